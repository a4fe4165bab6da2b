#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "unsplit/errors.hpp"
#include "unsplit/lp_oracle.hpp"
#include "unsplit/rational.hpp"

namespace unsplit {

// min c^T v subject to rows * v = rhs and finite bounds lower <= v <= upper.
struct BoundedLp {
    std::vector<Rat> objective;
    std::vector<Rat> lower, upper;
    std::vector<std::vector<Rat>> rows;
    std::vector<Rat> rhs;

    std::size_t num_vars() const { return objective.size(); }
    std::size_t num_rows() const { return rows.size(); }
};

namespace detail {

// Dense two-phase bounded-variable simplex over exact rationals. Bland's
// smallest-index rule picks both the entering variable and, extended with
// the entering variable's own bound flip as a candidate, the leaving
// variable, so the method terminates on every input. Artificial variables
// get their bounds fixed to [0,0] after phase one.
class BoundedSimplex {
public:
    explicit BoundedSimplex(const BoundedLp& lp) : lp_(lp) {
        n_ = lp.num_vars();
        m_ = lp.num_rows();
        total_ = n_ + m_;
        if (lp.lower.size() != n_ || lp.upper.size() != n_) {
            throw IndexMismatchError("simplex bounds do not match variable count");
        }
        if (lp.rhs.size() != m_) throw IndexMismatchError("rhs does not match row count");
        for (const auto& row : lp.rows) {
            if (row.size() != n_) throw IndexMismatchError("row width does not match variables");
        }
    }

    LpSolution<std::vector<Rat>> solve() {
        for (std::size_t j = 0; j < n_; ++j) {
            if (lp_.lower[j] > lp_.upper[j]) return {LpStatus::Infeasible, {}, 0};
        }
        initialize();

        // Phase one: drive the artificials to zero.
        std::vector<Rat> phase1(total_, Rat(0));
        for (std::size_t k = 0; k < m_; ++k) phase1[n_ + k] = 1;
        run(phase1);
        Rat infeasibility = 0;
        for (std::size_t k = 0; k < m_; ++k) infeasibility += val_[n_ + k];
        if (infeasibility > 0) return {LpStatus::Infeasible, {}, 0};
        for (std::size_t k = 0; k < m_; ++k) upper_[n_ + k] = 0;

        std::vector<Rat> phase2(total_, Rat(0));
        for (std::size_t j = 0; j < n_; ++j) phase2[j] = lp_.objective[j];
        run(phase2);

        std::vector<Rat> point(val_.begin(), val_.begin() + static_cast<std::ptrdiff_t>(n_));
        Rat objective = 0;
        for (std::size_t j = 0; j < n_; ++j) objective += lp_.objective[j] * point[j];
        return {LpStatus::Optimal, std::move(point), std::move(objective)};
    }

private:
    void initialize() {
        lower_.assign(total_, Rat(0));
        upper_.assign(total_, Rat(0));
        val_.assign(total_, Rat(0));
        at_upper_.assign(total_, false);
        in_basis_.assign(total_, false);
        for (std::size_t j = 0; j < n_; ++j) {
            lower_[j] = lp_.lower[j];
            upper_[j] = lp_.upper[j];
            val_[j] = lp_.lower[j];
        }
        tableau_.assign(m_, std::vector<Rat>(total_, Rat(0)));
        basis_.assign(m_, 0);
        for (std::size_t i = 0; i < m_; ++i) {
            Rat residual = lp_.rhs[i];
            for (std::size_t j = 0; j < n_; ++j) residual -= lp_.rows[i][j] * val_[j];
            const bool nonneg = residual >= 0;
            for (std::size_t j = 0; j < n_; ++j) {
                tableau_[i][j] = nonneg ? lp_.rows[i][j] : Rat(-lp_.rows[i][j]);
            }
            tableau_[i][n_ + i] = 1;
            lower_[n_ + i] = 0;
            upper_[n_ + i] = rat_abs(residual);
            val_[n_ + i] = rat_abs(residual);
            basis_[i] = n_ + i;
            in_basis_[n_ + i] = true;
        }
    }

    void run(const std::vector<Rat>& cost) {
        // Far beyond any Bland-rule trajectory at this problem size.
        const std::size_t iteration_cap = 200000;
        for (std::size_t iter = 0; iter < iteration_cap; ++iter) {
            if (!pivot_once(cost)) return;
        }
        throw InternalError("simplex iteration cap exceeded");
    }

    // One Bland step; false when the current point is optimal.
    bool pivot_once(const std::vector<Rat>& cost) {
        std::vector<Rat> dual(m_);
        for (std::size_t i = 0; i < m_; ++i) dual[i] = cost[basis_[i]];

        std::size_t entering = total_;
        int direction = 0;
        for (std::size_t j = 0; j < total_; ++j) {
            if (in_basis_[j] || lower_[j] == upper_[j]) continue;
            Rat reduced = cost[j];
            for (std::size_t i = 0; i < m_; ++i) {
                if (dual[i] != 0) reduced -= dual[i] * tableau_[i][j];
            }
            if (!at_upper_[j] && reduced < 0) {
                entering = j;
                direction = 1;
                break;
            }
            if (at_upper_[j] && reduced > 0) {
                entering = j;
                direction = -1;
                break;
            }
        }
        if (entering == total_) return false;

        // Ratio test. The entering variable's own bound span competes as a
        // candidate carrying its own index.
        Rat best_t = upper_[entering] - lower_[entering];
        std::size_t best_var = entering;
        std::size_t best_row = m_;  // m_ means bound flip
        for (std::size_t i = 0; i < m_; ++i) {
            const Rat delta = direction > 0 ? Rat(-tableau_[i][entering]) : tableau_[i][entering];
            if (delta == 0) continue;
            const std::size_t b = basis_[i];
            Rat t;
            if (delta > 0) {
                t = (upper_[b] - val_[b]) / delta;
            } else {
                t = (val_[b] - lower_[b]) / -delta;
            }
            if (t < best_t || (t == best_t && b < best_var)) {
                best_t = t;
                best_var = b;
                best_row = i;
            }
        }

        // Move along the edge by best_t.
        if (direction > 0) {
            val_[entering] += best_t;
        } else {
            val_[entering] -= best_t;
        }
        if (best_t != 0) {
            for (std::size_t i = 0; i < m_; ++i) {
                const Rat delta = direction > 0 ? Rat(-tableau_[i][entering]) : tableau_[i][entering];
                if (delta != 0) val_[basis_[i]] += delta * best_t;
            }
        }

        if (best_row == m_) {
            at_upper_[entering] = !at_upper_[entering];
            return true;
        }

        const std::size_t leaving = basis_[best_row];
        const Rat delta_leaving =
            direction > 0 ? Rat(-tableau_[best_row][entering]) : tableau_[best_row][entering];
        at_upper_[leaving] = delta_leaving > 0;
        val_[leaving] = at_upper_[leaving] ? upper_[leaving] : lower_[leaving];
        in_basis_[leaving] = false;
        in_basis_[entering] = true;
        basis_[best_row] = entering;

        const Rat pivot = tableau_[best_row][entering];
        for (std::size_t j = 0; j < total_; ++j) tableau_[best_row][j] /= pivot;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == best_row || tableau_[i][entering] == 0) continue;
            const Rat factor = tableau_[i][entering];
            for (std::size_t j = 0; j < total_; ++j) {
                tableau_[i][j] -= factor * tableau_[best_row][j];
            }
        }
        return true;
    }

    const BoundedLp& lp_;
    std::size_t n_ = 0, m_ = 0, total_ = 0;
    std::vector<Rat> lower_, upper_, val_;
    std::vector<bool> at_upper_, in_basis_;
    std::vector<std::vector<Rat>> tableau_;
    std::vector<std::size_t> basis_;
};

}  // namespace detail

inline LpSolution<std::vector<Rat>> simplex_solve(const BoundedLp& lp) {
    return detail::BoundedSimplex(lp).solve();
}

}  // namespace unsplit
