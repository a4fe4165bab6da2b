#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "unsplit/errors.hpp"
#include "unsplit/rational.hpp"

namespace unsplit {

enum class LpStatus { Optimal, Infeasible };

template <typename Point>
struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    Point point{};
    Rat objective = 0;
};

enum class Relation { LessEq, Equal, GreaterEq };

struct LinearConstraint {
    std::vector<Rat> coef;
    Relation rel = Relation::LessEq;
    Rat rhs = 0;
};

// min c^T v subject to the rows and finite box bounds l <= v <= u.
struct SmallLp {
    std::vector<Rat> objective;
    std::vector<Rat> lower, upper;
    std::vector<LinearConstraint> rows;

    std::size_t num_vars() const { return objective.size(); }
};

namespace detail {

// Solves an n x n rational system; nullopt when singular.
inline std::optional<std::vector<Rat>> solve_square(std::vector<std::vector<Rat>> m,
                                                    std::vector<Rat> rhs) {
    const std::size_t n = rhs.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && m[pivot][col] == 0) ++pivot;
        if (pivot == n) return std::nullopt;
        std::swap(m[col], m[pivot]);
        std::swap(rhs[col], rhs[pivot]);
        const Rat inv = m[col][col];
        for (std::size_t j = col; j < n; ++j) m[col][j] /= inv;
        rhs[col] /= inv;
        for (std::size_t row = 0; row < n; ++row) {
            if (row == col || m[row][col] == 0) continue;
            const Rat factor = m[row][col];
            for (std::size_t j = col; j < n; ++j) m[row][j] -= factor * m[col][j];
            rhs[row] -= factor * rhs[col];
        }
    }
    return rhs;
}

inline bool point_feasible(const SmallLp& lp, const std::vector<Rat>& v) {
    for (std::size_t j = 0; j < lp.num_vars(); ++j) {
        if (v[j] < lp.lower[j] || v[j] > lp.upper[j]) return false;
    }
    for (const LinearConstraint& row : lp.rows) {
        Rat lhs = 0;
        for (std::size_t j = 0; j < lp.num_vars(); ++j) lhs += row.coef[j] * v[j];
        switch (row.rel) {
            case Relation::LessEq:
                if (lhs > row.rhs) return false;
                break;
            case Relation::Equal:
                if (lhs != row.rhs) return false;
                break;
            case Relation::GreaterEq:
                if (lhs < row.rhs) return false;
                break;
        }
    }
    return true;
}

}  // namespace detail

// Testing oracle: finds the exact optimum of a tiny LP by enumerating every
// candidate vertex (each choice of n constraints among rows and bounds taken
// with equality), keeping feasible ones. Box bounds must be finite, so the
// feasible region is a polytope and a nonempty region attains its optimum
// at a vertex. Deliberately unrelated to the simplex and flow solvers it
// cross-checks.
inline LpSolution<std::vector<Rat>> lp_oracle_enumerate(const SmallLp& lp,
                                                        std::size_t max_vars = 6) {
    const std::size_t n = lp.num_vars();
    if (n > max_vars) {
        throw TooLargeError("lp_oracle_enumerate supports at most " + std::to_string(max_vars) +
                            " variables, got " + std::to_string(n));
    }
    if (lp.lower.size() != n || lp.upper.size() != n) {
        throw IndexMismatchError("bound vectors do not match variable count");
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (lp.lower[j] > lp.upper[j]) return {LpStatus::Infeasible, {}, 0};
    }
    for (const LinearConstraint& row : lp.rows) {
        if (row.coef.size() != n) {
            throw IndexMismatchError("constraint coefficient count does not match variables");
        }
    }
    if (n == 0) {
        std::vector<Rat> empty;
        if (detail::point_feasible(lp, empty)) return {LpStatus::Optimal, empty, 0};
        return {LpStatus::Infeasible, {}, 0};
    }

    // Candidate tight constraints: every row as an equality, then each bound.
    struct Candidate {
        std::vector<Rat> coef;
        Rat rhs;
    };
    std::vector<Candidate> candidates;
    for (const LinearConstraint& row : lp.rows) candidates.push_back({row.coef, row.rhs});
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<Rat> unit(n, Rat(0));
        unit[j] = 1;
        candidates.push_back({unit, lp.lower[j]});
        candidates.push_back({unit, lp.upper[j]});
    }

    bool found = false;
    Rat best_obj = 0;
    std::vector<Rat> best_point;

    std::vector<std::size_t> pick(n);
    // Enumerate n-subsets of candidates in lexicographic order.
    const std::size_t m = candidates.size();
    if (m < n) return {LpStatus::Infeasible, {}, 0};
    for (std::size_t j = 0; j < n; ++j) pick[j] = j;
    while (true) {
        std::vector<std::vector<Rat>> mat(n);
        std::vector<Rat> rhs(n);
        for (std::size_t j = 0; j < n; ++j) {
            mat[j] = candidates[pick[j]].coef;
            rhs[j] = candidates[pick[j]].rhs;
        }
        if (auto point = detail::solve_square(std::move(mat), std::move(rhs))) {
            if (detail::point_feasible(lp, *point)) {
                Rat obj = 0;
                for (std::size_t j = 0; j < n; ++j) obj += lp.objective[j] * (*point)[j];
                if (!found || obj < best_obj) {
                    found = true;
                    best_obj = obj;
                    best_point = *point;
                }
            }
        }
        // Next combination.
        std::size_t j = n;
        while (j > 0 && pick[j - 1] == m - n + (j - 1)) --j;
        if (j == 0) break;
        ++pick[j - 1];
        for (std::size_t l = j; l < n; ++l) pick[l] = pick[l - 1] + 1;
    }

    if (!found) return {LpStatus::Infeasible, {}, 0};
    return {LpStatus::Optimal, std::move(best_point), std::move(best_obj)};
}

}  // namespace unsplit
