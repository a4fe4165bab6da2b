#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "unsplit/box.hpp"
#include "unsplit/errors.hpp"
#include "unsplit/fpra.hpp"
#include "unsplit/meta.hpp"
#include "unsplit/rational.hpp"
#include "unsplit/ring.hpp"
#include "unsplit/solvers.hpp"

namespace unsplit {

// ---------------------------------------------------------------------------
// Preprocessing: fixing unsplit commodities, eliminating parallel pairs
// ---------------------------------------------------------------------------

struct FixedCommodity {
    int index;   // original commodity index
    int choice;  // 1 = clockwise path, 2 = counterclockwise
};

struct RingPreprocessState {
    std::vector<bool> is_fixed;
    std::vector<int> fixed_choice;      // valid where is_fixed
    std::vector<Rat> split;             // current split, meaningful where not fixed
    std::vector<FixedCommodity> fixed;  // in fixing order
};

inline RingPreprocessState make_preprocess_state(const RingInstance& inst,
                                                 const RingFractionalSolution& x) {
    require_ring_splits(inst, x);
    RingPreprocessState state;
    state.is_fixed.assign(static_cast<std::size_t>(inst.commodity_count()), false);
    state.fixed_choice.assign(static_cast<std::size_t>(inst.commodity_count()), 0);
    state.split = x.split;
    return state;
}

// Moves commodities already routed unsplittably (split 0 or 1) into the
// fixed set; demandless commodities are fixed too since their routing never
// affects loads or costs. Returns how many were fixed.
inline int fix_unsplit_commodities(const RingInstance& inst, RingPreprocessState& state) {
    int count = 0;
    for (int i = 0; i < inst.commodity_count(); ++i) {
        const auto iu = static_cast<std::size_t>(i);
        if (state.is_fixed[iu]) continue;
        const Rat& s = state.split[iu];
        int choice = 0;
        if (s == 1) {
            choice = 1;
        } else if (s == 0) {
            choice = 2;
        } else if (inst.commodity(i).demand == 0) {
            choice = s >= Rat(1, 2) ? 1 : 2;
        } else {
            continue;
        }
        state.is_fixed[iu] = true;
        state.fixed_choice[iu] = choice;
        state.fixed.push_back(FixedCommodity{i, choice});
        ++count;
    }
    return count;
}

// Two commodities cross when their endpoint pairs strictly interleave on
// the cycle; any shared endpoint makes them parallel.
inline bool commodities_cross(const RingInstance& inst, int i, int j) {
    const RingCommodity& a = inst.commodity(i);
    const RingCommodity& b = inst.commodity(j);
    if (a.source == b.source || a.source == b.sink || a.sink == b.source || a.sink == b.sink) {
        return false;
    }
    const int n = inst.node_count();
    const auto strictly_inside = [n](int p, int from, int to) {
        // clockwise open interval (from, to)
        const int rel_p = (p - from + n) % n;
        const int rel_to = (to - from + n) % n;
        return rel_p > 0 && rel_p < rel_to;
    };
    return strictly_inside(b.source, a.source, a.sink) !=
           strictly_inside(b.sink, a.source, a.sink);
}

inline bool commodities_parallel(const RingInstance& inst, int i, int j) {
    return !commodities_cross(inst, i, j);
}

// Rerouting step for a parallel pair: with the paths labeled so that one
// path of i and one path of j are edge-disjoint, shift the minimum of the
// two complementary-path loads onto the disjoint pair. No edge load
// increases, and the commodity attaining the minimum becomes unsplit.
inline void eliminate_parallel_pair(const RingInstance& inst, RingPreprocessState& state, int i,
                                    int j) {
    const auto iu = static_cast<std::size_t>(i), ju = static_cast<std::size_t>(j);
    if (state.is_fixed[iu] || state.is_fixed[ju]) {
        throw NotParallelError("eliminate_parallel_pair needs two active commodities");
    }
    if (!commodities_parallel(inst, i, j)) {
        throw NotParallelError("commodities " + std::to_string(i) + " and " + std::to_string(j) +
                               " cross");
    }

    const std::vector<bool> cw_i = inst.clockwise_mask(i);
    const std::vector<bool> cw_j = inst.clockwise_mask(j);
    const auto disjoint = [&](int pi, int pj) {
        for (int e = 0; e < inst.edge_count(); ++e) {
            const bool in_i = (pi == 1) == static_cast<bool>(cw_i[static_cast<std::size_t>(e)]);
            const bool in_j = (pj == 1) == static_cast<bool>(cw_j[static_cast<std::size_t>(e)]);
            if (in_i && in_j) return false;
        }
        return true;
    };

    int pick_i = 0, pick_j = 0;
    for (int pi = 1; pi <= 2 && pick_i == 0; ++pi) {
        for (int pj = 1; pj <= 2; ++pj) {
            if (disjoint(pi, pj)) {
                pick_i = pi;
                pick_j = pj;
                break;
            }
        }
    }
    if (pick_i == 0) {
        throw InternalError("parallel commodities admit no edge-disjoint path labeling");
    }

    const Rat d_i = inst.commodity(i).demand;
    const Rat d_j = inst.commodity(j).demand;
    if (d_i == 0 || d_j == 0) {
        throw InternalError("demandless commodity reached parallel elimination");
    }
    // Load on the path complementary to the disjoint one.
    const Rat other_i = (pick_i == 1 ? Rat(1 - state.split[iu]) : state.split[iu]) * d_i;
    const Rat other_j = (pick_j == 1 ? Rat(1 - state.split[ju]) : state.split[ju]) * d_j;
    const Rat shift = std::min(other_i, other_j);
    if (pick_i == 1) {
        state.split[iu] += shift / d_i;
    } else {
        state.split[iu] -= shift / d_i;
    }
    if (pick_j == 1) {
        state.split[ju] += shift / d_j;
    } else {
        state.split[ju] -= shift / d_j;
    }
}

// Total load of the partially processed solution: fixed paths routed
// unsplittably plus the remaining fractional splits.
inline std::vector<Rat> preprocess_total_load(const RingInstance& inst,
                                              const RingPreprocessState& state) {
    std::vector<Rat> load(static_cast<std::size_t>(inst.edge_count()), Rat(0));
    for (int i = 0; i < inst.commodity_count(); ++i) {
        const auto iu = static_cast<std::size_t>(i);
        const Rat& d = inst.commodity(i).demand;
        if (state.is_fixed[iu]) {
            for (int e : inst.path_of_choice(i, state.fixed_choice[iu])) {
                load[static_cast<std::size_t>(e)] += d;
            }
        } else {
            const Rat on_cw = state.split[iu] * d;
            for (int e : inst.clockwise_path(i)) load[static_cast<std::size_t>(e)] += on_cw;
            for (int e : inst.counterclockwise_path(i)) {
                load[static_cast<std::size_t>(e)] += d - on_cw;
            }
        }
    }
    return load;
}

// Fix-then-eliminate loop: pairs are scanned in lexicographic index order
// and the process repeats until every remaining pair crosses.
inline RingPreprocessState preprocess_ring(const RingInstance& inst,
                                           const RingFractionalSolution& x) {
    RingPreprocessState state = make_preprocess_state(inst, x);
    fix_unsplit_commodities(inst, state);
    while (true) {
        bool eliminated = false;
        for (int i = 0; i < inst.commodity_count() && !eliminated; ++i) {
            if (state.is_fixed[static_cast<std::size_t>(i)]) continue;
            for (int j = i + 1; j < inst.commodity_count(); ++j) {
                if (state.is_fixed[static_cast<std::size_t>(j)]) continue;
                if (commodities_parallel(inst, i, j)) {
                    eliminate_parallel_pair(inst, state, i, j);
                    fix_unsplit_commodities(inst, state);
                    eliminated = true;
                    break;
                }
            }
        }
        if (!eliminated) break;
    }
    return state;
}

// ---------------------------------------------------------------------------
// Crossing canonical form
// ---------------------------------------------------------------------------

struct CanonicalRingForm {
    RingInstance reduced;
    int k_prime;
    std::vector<int> commodity_map;      // canonical index -> original index
    std::vector<bool> endpoint_swapped;  // canonical s was the original sink
    std::vector<int> edge_map;           // original edge -> canonical edge
    std::vector<FixedCommodity> fixed;   // original indices with original choices
    RingFractionalSolution xbar;         // canonical splits
    Rat d_max_original;
};

// Relabels the remaining all-crossing commodities so the canonical vertex
// order is s_1..s_k', t_1..t_k' and contracts every demand-free vertex,
// summing costs and taking the minimum capacity of merged edges. Pairwise
// crossing forces the endpoint positions to be antipodal, which the
// construction re-verifies.
inline CanonicalRingForm canonicalize_crossing(const RingInstance& inst,
                                               const RingPreprocessState& state) {
    std::vector<int> remaining;
    for (int i = 0; i < inst.commodity_count(); ++i) {
        if (!state.is_fixed[static_cast<std::size_t>(i)]) remaining.push_back(i);
    }
    const int k = static_cast<int>(remaining.size());
    if (k == 0) throw InvalidInstanceError("no commodities left to canonicalize");
    for (std::size_t a = 0; a < remaining.size(); ++a) {
        const Rat& s = state.split[static_cast<std::size_t>(remaining[a])];
        if (s <= 0 || s >= 1) {
            throw InternalError("canonicalize_crossing requires strictly split commodities");
        }
        for (std::size_t b = a + 1; b < remaining.size(); ++b) {
            if (!commodities_cross(inst, remaining[a], remaining[b])) {
                throw NotCrossingError("commodities " + std::to_string(remaining[a]) + " and " +
                                       std::to_string(remaining[b]) + " are parallel");
            }
        }
    }

    // Each vertex hosts at most one endpoint once all pairs cross.
    const int n = inst.node_count();
    std::vector<int> host_commodity(static_cast<std::size_t>(n), -1);
    std::vector<bool> host_is_sink(static_cast<std::size_t>(n), false);
    for (int idx : remaining) {
        const RingCommodity& c = inst.commodity(idx);
        for (const auto& [node, is_sink] :
             {std::pair<int, bool>{c.source, false}, std::pair<int, bool>{c.sink, true}}) {
            if (host_commodity[static_cast<std::size_t>(node)] != -1) {
                throw InternalError("crossing commodities share an endpoint vertex");
            }
            host_commodity[static_cast<std::size_t>(node)] = idx;
            host_is_sink[static_cast<std::size_t>(node)] = is_sink;
        }
    }

    // Canonical vertices: endpoint-hosting vertices in original cycle order.
    std::vector<int> canon_vertices;
    std::vector<int> vertex_position(static_cast<std::size_t>(n), -1);
    for (int v = 0; v < n; ++v) {
        if (host_commodity[static_cast<std::size_t>(v)] != -1) {
            vertex_position[static_cast<std::size_t>(v)] = static_cast<int>(canon_vertices.size());
            canon_vertices.push_back(v);
        }
    }
    const int m = static_cast<int>(canon_vertices.size());
    if (m != 2 * k) throw InternalError("canonical vertex count mismatch");

    // Antipodal structure: the two endpoints of a commodity sit k apart.
    for (int idx : remaining) {
        const RingCommodity& c = inst.commodity(idx);
        const int ps = vertex_position[static_cast<std::size_t>(c.source)];
        const int pt = vertex_position[static_cast<std::size_t>(c.sink)];
        if ((ps + k) % m != pt && (pt + k) % m != ps) {
            throw InternalError("crossing commodities are not antipodal after relabeling");
        }
    }

    CanonicalRingForm form{
        RingInstance({"x", "y"}, {Rat(0), Rat(0)}, {std::nullopt, std::nullopt}, {}),
        k,
        {},
        {},
        std::vector<int>(static_cast<std::size_t>(inst.edge_count()), -1),
        state.fixed,
        {},
        inst.d_max()};

    // Contract: canonical edge j spans the original edges between canonical
    // vertices j and j+1.
    std::vector<std::string> node_ids;
    std::vector<Rat> costs(static_cast<std::size_t>(m), Rat(0));
    std::vector<std::optional<Rat>> caps(static_cast<std::size_t>(m), std::nullopt);
    std::vector<bool> cap_complete(static_cast<std::size_t>(m), true);
    node_ids.reserve(static_cast<std::size_t>(m));
    for (int v : canon_vertices) node_ids.push_back(inst.node_id(v));
    {
        const int start = canon_vertices[0];
        int canon_edge = -1;
        for (int step = 0; step < n; ++step) {
            const int v = (start + step) % n;
            if (vertex_position[static_cast<std::size_t>(v)] != -1) ++canon_edge;
            const auto ce = static_cast<std::size_t>(canon_edge);
            form.edge_map[static_cast<std::size_t>(v)] = canon_edge;
            costs[ce] += inst.edge_cost(v);
            if (inst.edge_capacity(v)) {
                caps[ce] = caps[ce] ? std::min(*caps[ce], *inst.edge_capacity(v))
                                    : *inst.edge_capacity(v);
            } else {
                cap_complete[ce] = false;
            }
        }
    }
    for (std::size_t e = 0; e < caps.size(); ++e) {
        if (!cap_complete[e]) caps[e] = std::nullopt;
    }

    // Canonical commodity j starts at position j; its partner sits at j+k.
    std::vector<RingCommodity> commodities;
    for (int j = 0; j < k; ++j) {
        const int v = canon_vertices[static_cast<std::size_t>(j)];
        const int original = host_commodity[static_cast<std::size_t>(v)];
        form.commodity_map.push_back(original);
        form.endpoint_swapped.push_back(host_is_sink[static_cast<std::size_t>(v)]);
        commodities.push_back(RingCommodity{j, j + k, inst.commodity(original).demand});
        const Rat& split = state.split[static_cast<std::size_t>(original)];
        form.xbar.split.push_back(host_is_sink[static_cast<std::size_t>(v)] ? Rat(1 - split)
                                                                            : split);
    }

    form.reduced = RingInstance(std::move(node_ids), std::move(costs), std::move(caps),
                                std::move(commodities));

    // The canonical clockwise path of commodity j must be the contraction
    // image of the original path its split refers to.
    for (int j = 0; j < k; ++j) {
        const int original = form.commodity_map[static_cast<std::size_t>(j)];
        const std::vector<int> source_path = form.endpoint_swapped[static_cast<std::size_t>(j)]
                                                 ? inst.counterclockwise_path(original)
                                                 : inst.clockwise_path(original);
        std::vector<bool> image(static_cast<std::size_t>(m), false);
        for (int e : source_path) {
            image[static_cast<std::size_t>(form.edge_map[static_cast<std::size_t>(e)])] = true;
        }
        const std::vector<bool> canon_cw = form.reduced.clockwise_mask(j);
        if (image != canon_cw) {
            throw InternalError("contracted path image disagrees with canonical labeling");
        }
    }
    return form;
}

inline CanonicalRingForm canonical_form(const RingInstance& inst,
                                        const RingFractionalSolution& x) {
    return canonicalize_crossing(inst, preprocess_ring(inst, x));
}

// ---------------------------------------------------------------------------
// The opposing-edges identity and the two-sided bound
// ---------------------------------------------------------------------------

// On a canonical instance the edges j and j+k' always carry the whole
// demand between them, for any fractional or unsplittable routing.
inline bool check_opposing_edges(const RingInstance& canonical, const std::vector<Rat>& load) {
    const int m = canonical.edge_count();
    const int k = canonical.commodity_count();
    if (m != 2 * k || static_cast<int>(load.size()) != m) {
        throw IndexMismatchError("opposing-edges check needs a canonical instance");
    }
    const Rat total = canonical.total_demand();
    for (int j = 0; j < k; ++j) {
        if (load[static_cast<std::size_t>(j)] + load[static_cast<std::size_t>(j + k)] != total) {
            return false;
        }
    }
    return true;
}

inline bool check_opposing_edges(const CanonicalRingForm& form,
                                 const RingFractionalSolution& sol) {
    return check_opposing_edges(form.reduced, ring_load(form.reduced, sol));
}

inline bool check_opposing_edges(const CanonicalRingForm& form,
                                 const RingUnsplittableSolution& sol) {
    return check_opposing_edges(form.reduced, ring_load(form.reduced, sol));
}

struct TwoSidedBoundReport {
    std::vector<Rat> upper_margins;  // (xbar_e + radius) - load_e
    std::vector<Rat> lower_margins;  // load_e - (xbar_e - radius)
    bool certified = false;
};

// Upgrades a one-sided guarantee load <= xbar + alpha*d_max into the
// two-sided one via the opposing-edges identity applied to both vectors.
inline TwoSidedBoundReport two_sided_bound(const CanonicalRingForm& form,
                                           const RingFractionalSolution& xbar,
                                           const RingUnsplittableSolution& solution,
                                           const Rat& alpha) {
    const std::vector<Rat> ref = ring_load(form.reduced, xbar);
    const std::vector<Rat> load = ring_load(form.reduced, solution);
    const Rat radius = alpha * form.d_max_original;
    TwoSidedBoundReport report;
    for (std::size_t e = 0; e < load.size(); ++e) {
        report.upper_margins.push_back(ref[e] + radius - load[e]);
        if (report.upper_margins.back() < 0) {
            throw OneSidedViolatedError("one-sided bound violated on canonical edge " +
                                        std::to_string(e));
        }
    }
    if (!check_opposing_edges(form.reduced, ref) || !check_opposing_edges(form.reduced, load)) {
        throw InternalError("opposing-edges identity failed inside two_sided_bound");
    }
    report.certified = true;
    for (std::size_t e = 0; e < load.size(); ++e) {
        report.lower_margins.push_back(load[e] - (ref[e] - radius));
        if (report.lower_margins.back() < 0) {
            throw InternalError("two-sided bound derivation failed");
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Uniform-capacity reduction
// ---------------------------------------------------------------------------

struct SubdivisionRecord {
    int original_edge;
    int uniform_e1, uniform_e2;  // edge indices in the uniform instance
    int artificial_first;        // first of 2*r artificial commodities
    int pair_count;              // r
    Rat artificial_demand;       // (u_unif - u(e)) / r
};

struct UniformReduction {
    RingInstance uniform;
    Rat u_unif;
    int original_commodity_count;
    std::vector<std::optional<SubdivisionRecord>> subdivision;  // per original edge
    std::vector<int> node_map;  // original node index -> uniform node index
};

namespace detail {

inline mpz_class rat_ceil(const Rat& q) {
    mpz_class out;
    mpz_cdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return out;
}

}  // namespace detail

// Equalizes the capacities at u_unif = max u(e): every lighter edge is
// subdivided and saddled with 2r artificial commodities of demand at most
// d_max, r across each half. A solution of the original instance embeds by
// routing each artificial commodity over its own single edge; stripping the
// artificials from any uniform solution cannot increase any violation.
inline UniformReduction nonuniform_to_uniform(const RingInstance& inst,
                                              int max_pairs_per_edge = 4096) {
    if (!inst.has_all_capacities()) {
        throw InvalidInstanceError("uniform reduction needs capacities on every edge");
    }
    Rat u_unif = 0;
    for (int e = 0; e < inst.edge_count(); ++e) u_unif = std::max(u_unif, *inst.edge_capacity(e));
    const Rat d_max = inst.d_max();

    std::vector<std::string> node_ids;
    std::vector<Rat> costs;
    std::vector<std::optional<Rat>> caps;
    std::vector<int> node_map(static_cast<std::size_t>(inst.node_count()), -1);
    struct PendingArtificials {
        int original_edge;
        int e1, e2;
        int pair_count;
        Rat demand;
        int s1, mid, s2;  // uniform node indices of the halves' endpoints
    };
    std::vector<PendingArtificials> pending;
    std::vector<std::optional<SubdivisionRecord>> subdivision(
        static_cast<std::size_t>(inst.edge_count()), std::nullopt);

    for (int v = 0; v < inst.node_count(); ++v) {
        node_map[static_cast<std::size_t>(v)] = static_cast<int>(node_ids.size());
        node_ids.push_back(inst.node_id(v));
        const Rat gap = u_unif - *inst.edge_capacity(v);
        if (gap == 0) {
            costs.push_back(inst.edge_cost(v));
            caps.push_back(u_unif);
            continue;
        }
        if (d_max == 0) {
            throw ZeroDmaxError("cannot subdivide edge " + std::to_string(v) +
                                ": no commodity demand to size artificials");
        }
        const mpz_class pairs_z = detail::rat_ceil(gap / d_max);
        if (pairs_z > max_pairs_per_edge) {
            throw TooLargeError("uniform reduction would add " + pairs_z.get_str() +
                                " artificial pairs on one edge");
        }
        const int pairs = static_cast<int>(pairs_z.get_si());
        const int e1 = static_cast<int>(costs.size());
        costs.push_back(inst.edge_cost(v));
        caps.push_back(u_unif);
        const int mid = static_cast<int>(node_ids.size());
        node_ids.push_back(inst.node_id(v) + "+" + inst.node_id((v + 1) % inst.node_count()));
        const int e2 = static_cast<int>(costs.size());
        costs.push_back(Rat(0));
        caps.push_back(u_unif);
        subdivision[static_cast<std::size_t>(v)] =
            SubdivisionRecord{v, e1, e2, -1, pairs, gap / pairs};
        pending.push_back(PendingArtificials{v, e1, e2, pairs, gap / pairs,
                                             node_map[static_cast<std::size_t>(v)], mid, -1});
    }
    // Second endpoints of the e2 halves wrap around to the next original node.
    for (PendingArtificials& p : pending) {
        p.s2 = node_map[static_cast<std::size_t>((p.original_edge + 1) % inst.node_count())];
    }

    std::vector<RingCommodity> commodities;
    for (const RingCommodity& c : inst.commodities()) {
        commodities.push_back(RingCommodity{node_map[static_cast<std::size_t>(c.source)],
                                            node_map[static_cast<std::size_t>(c.sink)], c.demand});
    }
    for (PendingArtificials& p : pending) {
        subdivision[static_cast<std::size_t>(p.original_edge)]->artificial_first =
            static_cast<int>(commodities.size());
        for (int r = 0; r < p.pair_count; ++r) {
            commodities.push_back(RingCommodity{p.s1, p.mid, p.demand});
        }
        for (int r = 0; r < p.pair_count; ++r) {
            commodities.push_back(RingCommodity{p.mid, p.s2, p.demand});
        }
    }

    UniformReduction reduction{
        RingInstance(std::move(node_ids), std::move(costs), std::move(caps),
                     std::move(commodities)),
        std::move(u_unif), inst.commodity_count(), std::move(subdivision), std::move(node_map)};
    return reduction;
}

// Lifts a solution of the original instance to the uniform instance,
// routing every artificial commodity along its single subdivided edge.
inline RingUnsplittableSolution embed_solution(const UniformReduction& reduction,
                                               const RingUnsplittableSolution& original) {
    RingUnsplittableSolution uniform;
    uniform.choice = original.choice;
    uniform.choice.resize(static_cast<std::size_t>(reduction.uniform.commodity_count()), 1);
    return uniform;
}

struct StripEdgeAccount {
    Rat strip_violation;    // on the original instance
    Rat uniform_violation;  // worst counterpart in the uniform instance
    bool bound_ok;
};

struct StripReport {
    RingUnsplittableSolution original;
    std::vector<StripEdgeAccount> edges;
    bool all_ok = true;
};

// Drops the artificial commodities and accounts, edge by edge, that the
// violation on the original instance never exceeds the uniform one. On a
// subdivided edge at least one half carries u_unif - u(e) of artificial
// load, which pays for the lowered capacity.
inline StripReport strip_artificials(const RingInstance& original,
                                     const UniformReduction& reduction,
                                     const RingUnsplittableSolution& uniform_solution) {
    require_ring_choices(reduction.uniform, uniform_solution);
    StripReport report;
    report.original.choice.assign(
        uniform_solution.choice.begin(),
        uniform_solution.choice.begin() + reduction.original_commodity_count);

    const std::vector<Rat> strip_load = ring_load(original, report.original);
    const std::vector<Rat> strip_viol = ring_violation(original, strip_load);
    const std::vector<Rat> uniform_load = ring_load(reduction.uniform, uniform_solution);
    const std::vector<Rat> uniform_viol = ring_violation(reduction.uniform, uniform_load);

    for (int e = 0; e < original.edge_count(); ++e) {
        const auto eu = static_cast<std::size_t>(e);
        Rat uni;
        if (reduction.subdivision[eu]) {
            const SubdivisionRecord& rec = *reduction.subdivision[eu];
            uni = std::max(uniform_viol[static_cast<std::size_t>(rec.uniform_e1)],
                           uniform_viol[static_cast<std::size_t>(rec.uniform_e2)]);
        } else {
            // Unsubdivided edges keep their index order but may be shifted;
            // locate via the subdivision-free prefix mapping.
            int shifted = 0;
            for (int f = 0; f < e; ++f) {
                shifted += reduction.subdivision[static_cast<std::size_t>(f)] ? 2 : 1;
            }
            uni = uniform_viol[static_cast<std::size_t>(shifted)];
        }
        const bool ok = strip_viol[eu] <= uni;
        report.all_ok = report.all_ok && ok;
        report.edges.push_back(StripEdgeAccount{strip_viol[eu], std::move(uni), ok});
    }
    return report;
}

// ---------------------------------------------------------------------------
// Full cost-aware ring pipeline
// ---------------------------------------------------------------------------

class RingRoundingNoSolutionError : public NoSolutionInBodyError {
public:
    RingRoundingNoSolutionError(const std::string& what, RingFractionalSolution y_star,
                                RingCounterexample certificate)
        : NoSolutionInBodyError(what),
          y_star(std::move(y_star)),
          certificate(std::move(certificate)) {}

    RingFractionalSolution y_star;
    RingCounterexample certificate;
};

struct RingRoundingOutcome {
    RingUnsplittableSolution solution;  // over the original instance
    RoundingCertificate certificate;    // deviation/body fields over original edges
    std::optional<CanonicalRingForm> canonical;
    RingFractionalSolution y_star;                // canonical splits (empty if all fixed)
    RingUnsplittableSolution canonical_solution;  // canonical choices (empty if all fixed)
    std::vector<Rat> load;                        // of `solution` on the original instance
};

// Preprocess to crossing canonical form, optimize the splits over the
// lambda-restricted body, round with the face-preserving oracle, re-attach
// the fixed paths, and certify the cost ceiling together with the per-edge
// load bound load_e <= x_e + (1+lambda)*alpha*d_max.
inline RingRoundingOutcome ring_round_with_cost(const RingInstance& inst,
                                                const RingFractionalSolution& x,
                                                const RingFpra& fpra, const Rat& alpha,
                                                const Rat& lambda,
                                                Strictness strictness = Strictness::Strict) {
    require_valid_lambda(lambda);
    require_ring_splits(inst, x);
    if (alpha < 0) throw InvalidBodyError("alpha must be nonnegative");

    const Rat d_max = inst.d_max();
    const Rat radius = alpha * d_max;
    const std::vector<Rat> x_load = ring_load(inst, x);
    const Rat input_cost = ring_cost(inst, x_load);

    RingPreprocessState state = preprocess_ring(inst, x);
    std::vector<int> remaining;
    for (int i = 0; i < inst.commodity_count(); ++i) {
        if (!state.is_fixed[static_cast<std::size_t>(i)]) remaining.push_back(i);
    }

    RingRoundingOutcome outcome{
        RingUnsplittableSolution{},
        RoundingCertificate{lambda,
                            input_cost,
                            Rat(0),
                            Rat(0),
                            {},
                            BoxErrorBody::symmetric(static_cast<std::size_t>(inst.edge_count()),
                                                    radius),
                            minkowski_diff_body(
                                BoxErrorBody::symmetric(
                                    static_cast<std::size_t>(inst.edge_count()), radius),
                                lambda),
                            std::nullopt,
                            {},
                            {},
                            {}},
        std::nullopt,
        RingFractionalSolution{},
        RingUnsplittableSolution{},
        {}};
    RoundingCertificate& cert = outcome.certificate;

    outcome.solution.choice.assign(static_cast<std::size_t>(inst.commodity_count()), 0);
    for (int i = 0; i < inst.commodity_count(); ++i) {
        if (state.is_fixed[static_cast<std::size_t>(i)]) {
            outcome.solution.choice[static_cast<std::size_t>(i)] =
                state.fixed_choice[static_cast<std::size_t>(i)];
        }
    }

    bool preprocess_sound = true;
    if (!remaining.empty()) {
        CanonicalRingForm form = canonicalize_crossing(inst, state);

        // Soundness of the preprocessing on every original edge:
        // fixed load + contracted xbar load never exceeds the input load.
        const std::vector<Rat> xbar_load = ring_load(form.reduced, form.xbar);
        {
            std::vector<Rat> fixed_load(static_cast<std::size_t>(inst.edge_count()), Rat(0));
            for (const FixedCommodity& f : form.fixed) {
                for (int e : inst.path_of_choice(f.index, f.choice)) {
                    fixed_load[static_cast<std::size_t>(e)] += inst.commodity(f.index).demand;
                }
            }
            for (int e = 0; e < inst.edge_count(); ++e) {
                const auto eu = static_cast<std::size_t>(e);
                const auto ce = static_cast<std::size_t>(form.edge_map[eu]);
                if (fixed_load[eu] + xbar_load[ce] > x_load[eu]) preprocess_sound = false;
            }
        }

        LpSolution<RingFractionalSolution> restricted =
            ring_restricted_min_cost(form.reduced, form.xbar, radius, lambda);
        outcome.y_star = restricted.point;
        cert.restricted_cost = restricted.objective;

        const BoxErrorBody canon_body =
            BoxErrorBody::symmetric(static_cast<std::size_t>(form.reduced.edge_count()), radius);
        RingFpraResult rounded;
        try {
            rounded = fpra.run(form.reduced, outcome.y_star, canon_body);
        } catch (RingNoSolutionError& err) {
            throw RingRoundingNoSolutionError(
                std::string(err.what()) + " (restricted optimum splits = " +
                    vec_to_string(outcome.y_star.split) + ")",
                outcome.y_star, std::move(err.certificate));
        }
        outcome.canonical_solution = rounded.solution;

        for (int j = 0; j < form.k_prime; ++j) {
            const auto ju = static_cast<std::size_t>(j);
            const int original = form.commodity_map[ju];
            const int canon_choice = rounded.solution.choice[ju];
            outcome.solution.choice[static_cast<std::size_t>(original)] =
                form.endpoint_swapped[ju] ? 3 - canon_choice : canon_choice;
        }

        // Proof points in split space: the loads are affine in the splits,
        // so the segment y* + eps (y* - z) stays in the load polytope as
        // long as the witness splits stay in [0,1].
        const std::vector<Rat>& ls = outcome.y_star.split;
        std::vector<Rat> z01(ls.size());
        for (std::size_t j = 0; j < ls.size(); ++j) {
            z01[j] = rounded.solution.choice[j] == 1 ? 1 : 0;
        }
        std::optional<Rat> epsilon;
        for (std::size_t j = 0; j < ls.size(); ++j) {
            if (ls[j] > z01[j]) {
                Rat cap = (Rat(1) - ls[j]) / (ls[j] - z01[j]);
                if (!epsilon || cap < *epsilon) epsilon = std::move(cap);
            } else if (ls[j] < z01[j]) {
                Rat cap = ls[j] / (z01[j] - ls[j]);
                if (!epsilon || cap < *epsilon) epsilon = std::move(cap);
            }
        }
        cert.epsilon = epsilon;
        const Rat eps = epsilon.value_or(Rat(1));
        std::vector<Rat> ybar_split(ls.size()), yhat_split(ls.size());
        const Rat hat_x = eps / (lambda + eps);
        const Rat hat_bar = lambda / (lambda + eps);
        bool ybar_in_polytope = true;
        for (std::size_t j = 0; j < ls.size(); ++j) {
            ybar_split[j] = ls[j] + eps * (ls[j] - z01[j]);
            if (ybar_split[j] < 0 || ybar_split[j] > 1) ybar_in_polytope = false;
            yhat_split[j] = hat_x * form.xbar.split[j] + hat_bar * ybar_split[j];
        }
        const std::vector<Rat> z_load = ring_load(form.reduced, rounded.solution);
        std::vector<Rat> ybar_load, yhat_load;
        bool yhat_in_polytope = false;
        if (ybar_in_polytope) {
            ybar_load = ring_load(form.reduced, RingFractionalSolution{ybar_split});
            yhat_load = ring_load(form.reduced, RingFractionalSolution{yhat_split});
            yhat_in_polytope = true;
        }
        cert.y_bar = ybar_load;
        cert.y_hat = yhat_load;

        const Rat ystar_cost = ring_cost(form.reduced, ring_load(form.reduced, outcome.y_star));
        const bool ybar_in_body =
            ybar_in_polytope &&
            body_contains(scale_box(canon_body, lambda + eps), vec_sub(xbar_load, ybar_load));
        const bool yhat_ok =
            yhat_in_polytope &&
            body_contains(scale_box(canon_body, lambda), vec_sub(xbar_load, yhat_load)) &&
            ystar_cost <= ring_cost(form.reduced, yhat_load);

        cert.checks.push_back({"preprocessing_no_load_increase", preprocess_sound});
        cert.checks.push_back(
            {"restricted_cost_le_reduced_input_cost",
             cert.restricted_cost <= ring_cost(form.reduced, xbar_load)});
        cert.checks.push_back(
            {"canonical_deviation_in_diff_body",
             body_contains(minkowski_diff_body(canon_body, lambda), vec_sub(z_load, xbar_load))});
        cert.checks.push_back({"opposing_edges_xbar", check_opposing_edges(form.reduced, xbar_load)});
        cert.checks.push_back(
            {"opposing_edges_solution", check_opposing_edges(form.reduced, z_load)});
        cert.checks.push_back({"ybar_in_polytope", ybar_in_polytope});
        cert.checks.push_back({"ybar_in_scaled_body", ybar_in_body});
        cert.checks.push_back({"yhat_in_restricted_set", yhat_ok});

        outcome.canonical = std::move(form);
    } else {
        cert.checks.push_back({"preprocessing_no_load_increase", preprocess_sound});
    }

    outcome.load = ring_load(inst, outcome.solution);
    cert.output_cost = ring_cost(inst, outcome.load);
    cert.deviation = vec_sub(outcome.load, x_load);

    bool upper_ok = true;
    const Rat allowance = (Rat(1) + lambda) * radius;
    for (std::size_t e = 0; e < outcome.load.size(); ++e) {
        if (outcome.load[e] > x_load[e] + allowance) upper_ok = false;
    }
    cert.checks.push_back({"output_cost_le_ceiling", cert.output_cost * lambda <= input_cost});
    cert.checks.push_back({"load_upper_bound", upper_ok});

    if (!cert.all_checks_pass() && strictness == Strictness::Strict) {
        std::string failing;
        for (const CheckResult& c : cert.checks) {
            if (!c.pass) failing += (failing.empty() ? "" : ", ") + c.name;
        }
        throw CertificateViolationError("ring certificate checks failed: " + failing,
                                        std::move(cert));
    }
    return outcome;
}

}  // namespace unsplit
