#pragma once

#include <string>
#include <utility>
#include <vector>

#include "unsplit/box.hpp"
#include "unsplit/errors.hpp"
#include "unsplit/lp_oracle.hpp"
#include "unsplit/min_cost_flow.hpp"
#include "unsplit/rational.hpp"
#include "unsplit/ring.hpp"
#include "unsplit/simplex.hpp"
#include "unsplit/ssuf.hpp"

namespace unsplit {

// Arc bounds realizing Q intersected with x - lambda*R for a box R:
// x - lambda*R is coordinatewise [x - lambda*upper_R, x - lambda*lower_R],
// clipped from below by the nonnegativity of Q.
inline ArcBounds bounds_for_restriction(const WeightedSsufNetwork& net, const FractionalFlow& x,
                                        const BoxErrorBody& body, const Rat& lambda) {
    require_valid_lambda(lambda);
    require_flow_shape(net, x);
    if (body.dimension() != static_cast<std::size_t>(net.arc_count())) {
        throw IndexMismatchError("error body dimension does not match arc count");
    }
    ArcBounds bounds;
    bounds.lower.resize(body.dimension());
    bounds.upper.resize(body.dimension());
    for (std::size_t a = 0; a < body.dimension(); ++a) {
        Rat lo = x.values[a] - lambda * body.upper(a);
        if (lo < 0) lo = 0;
        bounds.lower[a] = std::move(lo);
        bounds.upper[a] = x.values[a] - lambda * body.lower(a);
    }
    return bounds;
}

// Line 1 of the cost-aware rounding scheme for flows: the exact minimizer of
// c^T y over Q intersected with x - lambda*R. Always feasible when x is a
// fractional flow, since x itself satisfies the bounds.
inline LpSolution<FractionalFlow> restricted_min_cost_ssuf(const WeightedSsufNetwork& net,
                                                           const FractionalFlow& x,
                                                           const BoxErrorBody& body,
                                                           const Rat& lambda) {
    require_membership(net, x, "restricted_min_cost_ssuf");
    const ArcBounds bounds = bounds_for_restriction(net, x, body, lambda);
    LpSolution<FractionalFlow> solution = min_cost_flow_bounded(net, bounds);
    if (solution.status != LpStatus::Optimal) {
        throw InternalError("restricted flow problem infeasible despite feasible center");
    }
    return solution;
}

// Affine description of the edge loads as a function of the splits:
// load_e = base_e + sum_i gain[e][i] * split_i.
struct RingLoadForm {
    std::vector<Rat> base;               // loads when every split is 0
    std::vector<std::vector<Rat>> gain;  // per edge, per commodity
};

inline RingLoadForm ring_load_form(const RingInstance& inst) {
    RingLoadForm form;
    const auto m = static_cast<std::size_t>(inst.edge_count());
    form.base.assign(m, Rat(0));
    form.gain.assign(m, std::vector<Rat>(static_cast<std::size_t>(inst.commodity_count()), Rat(0)));
    for (int i = 0; i < inst.commodity_count(); ++i) {
        const Rat& d = inst.commodity(i).demand;
        const std::vector<bool> cw = inst.clockwise_mask(i);
        for (std::size_t e = 0; e < m; ++e) {
            if (cw[e]) {
                form.gain[e][static_cast<std::size_t>(i)] = d;
            } else {
                form.base[e] += d;
                form.gain[e][static_cast<std::size_t>(i)] = -d;
            }
        }
    }
    return form;
}

// Line 1 for the ring: minimize total routing cost over the splits, subject
// to every edge load staying within lambda*radius of the reference loads.
// Variables are the splits plus one load variable per edge; solved by the
// exact bounded-variable simplex.
inline LpSolution<RingFractionalSolution> ring_restricted_min_cost(
    const RingInstance& inst, const RingFractionalSolution& reference, const Rat& radius,
    const Rat& lambda) {
    require_valid_lambda(lambda);
    if (radius < 0) throw InvalidBodyError("negative ring body radius");
    require_ring_splits(inst, reference);

    const auto k = static_cast<std::size_t>(inst.commodity_count());
    const auto m = static_cast<std::size_t>(inst.edge_count());
    const std::vector<Rat> ref_load = ring_load(inst, reference);
    const RingLoadForm form = ring_load_form(inst);
    const Rat slack = lambda * radius;

    BoundedLp lp;
    lp.objective.assign(k + m, Rat(0));
    lp.lower.assign(k + m, Rat(0));
    lp.upper.assign(k + m, Rat(0));
    for (std::size_t i = 0; i < k; ++i) lp.upper[i] = 1;
    for (std::size_t e = 0; e < m; ++e) {
        lp.objective[k + e] = inst.edge_cost(static_cast<int>(e));
        Rat lo = ref_load[e] - slack;
        if (lo < 0) lo = 0;
        lp.lower[k + e] = std::move(lo);
        lp.upper[k + e] = ref_load[e] + slack;
    }
    lp.rows.assign(m, std::vector<Rat>(k + m, Rat(0)));
    lp.rhs.assign(m, Rat(0));
    for (std::size_t e = 0; e < m; ++e) {
        for (std::size_t i = 0; i < k; ++i) lp.rows[e][i] = form.gain[e][i];
        lp.rows[e][k + e] = -1;
        lp.rhs[e] = -form.base[e];
    }

    const LpSolution<std::vector<Rat>> raw = simplex_solve(lp);
    if (raw.status != LpStatus::Optimal) {
        throw InternalError("restricted ring problem infeasible despite feasible center");
    }
    RingFractionalSolution splits;
    splits.split.assign(raw.point.begin(), raw.point.begin() + static_cast<std::ptrdiff_t>(k));
    return {LpStatus::Optimal, std::move(splits), raw.objective};
}

// Independent formulations used by the enumeration oracle when cross-checking
// the two solvers above. Variables are arcs (flow case) or splits (ring
// case); no slack variables, so tiny instances stay within the oracle's cap.
inline SmallLp oracle_lp_for_ssuf(const WeightedSsufNetwork& net, const ArcBounds& bounds) {
    require_valid_bounds(net, bounds);
    SmallLp lp;
    const auto n = static_cast<std::size_t>(net.arc_count());
    lp.objective.resize(n);
    for (std::size_t a = 0; a < n; ++a) lp.objective[a] = net.arc(static_cast<int>(a)).cost;
    lp.lower = bounds.lower;
    lp.upper = bounds.upper;
    for (int v = 0; v < net.node_count(); ++v) {
        LinearConstraint row;
        row.coef.assign(n, Rat(0));
        for (int a : net.out_arcs(v)) row.coef[static_cast<std::size_t>(a)] += 1;
        for (int a : net.in_arcs(v)) row.coef[static_cast<std::size_t>(a)] -= 1;
        row.rel = Relation::Equal;
        row.rhs = net.net_supply(v);
        lp.rows.push_back(std::move(row));
    }
    return lp;
}

inline SmallLp oracle_lp_for_ring(const RingInstance& inst, const RingFractionalSolution& reference,
                                  const Rat& radius, const Rat& lambda) {
    require_valid_lambda(lambda);
    require_ring_splits(inst, reference);
    const auto k = static_cast<std::size_t>(inst.commodity_count());
    const auto m = static_cast<std::size_t>(inst.edge_count());
    const std::vector<Rat> ref_load = ring_load(inst, reference);
    const RingLoadForm form = ring_load_form(inst);
    const Rat slack = lambda * radius;

    SmallLp lp;
    lp.objective.assign(k, Rat(0));
    lp.lower.assign(k, Rat(0));
    lp.upper.assign(k, Rat(1));
    for (std::size_t e = 0; e < m; ++e) {
        for (std::size_t i = 0; i < k; ++i) {
            lp.objective[i] += inst.edge_cost(static_cast<int>(e)) * form.gain[e][i];
        }
    }
    for (std::size_t e = 0; e < m; ++e) {
        LinearConstraint up{form.gain[e], Relation::LessEq, ref_load[e] + slack - form.base[e]};
        lp.rows.push_back(std::move(up));
        Rat floor = ref_load[e] - slack;
        if (floor < 0) floor = 0;
        LinearConstraint down{form.gain[e], Relation::GreaterEq, floor - form.base[e]};
        lp.rows.push_back(std::move(down));
    }
    return lp;
}

// Constant to add to the ring oracle objective: cost of the base loads.
inline Rat ring_oracle_objective_offset(const RingInstance& inst) {
    const RingLoadForm form = ring_load_form(inst);
    Rat offset = 0;
    for (int e = 0; e < inst.edge_count(); ++e) {
        offset += inst.edge_cost(e) * form.base[static_cast<std::size_t>(e)];
    }
    return offset;
}

}  // namespace unsplit
