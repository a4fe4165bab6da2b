#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "unsplit/errors.hpp"
#include "unsplit/rational.hpp"

namespace unsplit {

// Axis-aligned error body: per coordinate an interval [lower, upper] with
// lower <= 0 <= upper, so the box always contains the origin. Coordinates
// index arcs (flow setting) or edges (ring setting).
class BoxErrorBody {
public:
    BoxErrorBody() = default;  // empty body over zero coordinates

    BoxErrorBody(std::vector<Rat> lower, std::vector<Rat> upper)
        : lower_(std::move(lower)), upper_(std::move(upper)) {
        if (lower_.size() != upper_.size()) {
            throw InvalidBodyError("box bounds have mismatched dimensions");
        }
        for (std::size_t i = 0; i < lower_.size(); ++i) {
            if (lower_[i] > 0 || upper_[i] < 0) {
                throw InvalidBodyError("box does not contain the origin at coordinate " +
                                       std::to_string(i));
            }
        }
    }

    static BoxErrorBody symmetric(std::size_t dimension, const Rat& radius) {
        if (radius < 0) throw InvalidBodyError("negative box radius");
        return BoxErrorBody(std::vector<Rat>(dimension, -radius),
                            std::vector<Rat>(dimension, radius));
    }

    std::size_t dimension() const { return lower_.size(); }
    const Rat& lower(std::size_t i) const { return lower_[i]; }
    const Rat& upper(std::size_t i) const { return upper_[i]; }
    const std::vector<Rat>& lower() const { return lower_; }
    const std::vector<Rat>& upper() const { return upper_; }

    // Keeps only the listed coordinates, in the given order.
    BoxErrorBody restricted_to(const std::vector<int>& coords) const {
        std::vector<Rat> lo, up;
        lo.reserve(coords.size());
        up.reserve(coords.size());
        for (int c : coords) {
            lo.push_back(lower_[static_cast<std::size_t>(c)]);
            up.push_back(upper_[static_cast<std::size_t>(c)]);
        }
        return BoxErrorBody(std::move(lo), std::move(up));
    }

private:
    std::vector<Rat> lower_, upper_;
};

// factor * R for any factor >= 0. Internal helper; the algorithm parameter
// lambda is validated separately by scale_body.
inline BoxErrorBody scale_box(const BoxErrorBody& body, const Rat& factor) {
    if (factor < 0) throw InvalidBodyError("box scale factor must be nonnegative");
    std::vector<Rat> lo(body.dimension()), up(body.dimension());
    for (std::size_t i = 0; i < body.dimension(); ++i) {
        lo[i] = factor * body.lower(i);
        up[i] = factor * body.upper(i);
    }
    return BoxErrorBody(std::move(lo), std::move(up));
}

inline void require_valid_lambda(const Rat& lambda) {
    if (lambda <= 0 || lambda > 1) {
        throw BadLambdaError("lambda must lie in (0,1], got " + rat_to_string(lambda));
    }
}

inline BoxErrorBody scale_body(const BoxErrorBody& body, const Rat& lambda) {
    require_valid_lambda(lambda);
    return scale_box(body, lambda);
}

// R - lambda*R, coordinatewise [lower - lambda*upper, upper - lambda*lower].
inline BoxErrorBody minkowski_diff_body(const BoxErrorBody& body, const Rat& lambda) {
    require_valid_lambda(lambda);
    std::vector<Rat> lo(body.dimension()), up(body.dimension());
    for (std::size_t i = 0; i < body.dimension(); ++i) {
        lo[i] = body.lower(i) - lambda * body.upper(i);
        up[i] = body.upper(i) - lambda * body.lower(i);
    }
    return BoxErrorBody(std::move(lo), std::move(up));
}

inline bool body_contains(const BoxErrorBody& body, const std::vector<Rat>& v) {
    if (v.size() != body.dimension()) {
        throw IndexMismatchError("vector dimension does not match body dimension");
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] < body.lower(i) || v[i] > body.upper(i)) return false;
    }
    return true;
}

}  // namespace unsplit
