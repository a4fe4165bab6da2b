#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "unsplit/box.hpp"
#include "unsplit/errors.hpp"
#include "unsplit/rational.hpp"
#include "unsplit/ring.hpp"
#include "unsplit/ssuf.hpp"

namespace unsplit {

enum class Strictness { Strict, Report };

struct FpraDescriptor {
    std::string name;
    bool declares_body = true;  // false: no guarantee, realized deviation is reported
    Strictness strictness = Strictness::Strict;
};

struct EnumerationLimits {
    std::size_t max_paths_per_terminal = 4096;
    std::size_t max_assignments = std::size_t{1} << 22;
    int max_ring_commodities = 20;
};

// Deviation measured in units of the body: max over coordinates of
// |dev| / radius on the violated side. A coordinate with zero radius and a
// nonzero deviation makes the measure infinite; infinite measures are
// ranked by their unscaled max-norm so report mode still prefers the least
// damaged assignment. Membership in the body is exactly "finite and at
// most 1".
struct ScaledDeviation {
    bool infinite = false;
    Rat value = 0;  // scaled max, or the unscaled max-norm when infinite

    bool in_body() const { return !infinite && value <= 1; }

    bool operator<(const ScaledDeviation& other) const {
        if (infinite != other.infinite) return other.infinite;
        return value < other.value;
    }
};

inline ScaledDeviation scaled_deviation(const std::vector<Rat>& deviation,
                                        const BoxErrorBody& body) {
    if (deviation.size() != body.dimension()) {
        throw IndexMismatchError("deviation dimension does not match body");
    }
    ScaledDeviation result;
    bool infinite = false;
    Rat scaled = 0, plain = 0;
    for (std::size_t i = 0; i < deviation.size(); ++i) {
        const Rat& dev = deviation[i];
        if (dev == 0) continue;
        plain = std::max(plain, rat_abs(dev));
        if (dev > 0) {
            if (body.upper(i) == 0) {
                infinite = true;
            } else {
                scaled = std::max(scaled, Rat(dev / body.upper(i)));
            }
        } else {
            if (body.lower(i) == 0) {
                infinite = true;
            } else {
                scaled = std::max(scaled, Rat(dev / body.lower(i)));
            }
        }
    }
    result.infinite = infinite;
    result.value = infinite ? plain : scaled;
    return result;
}

// ---------------------------------------------------------------------------
// Flow decomposition
// ---------------------------------------------------------------------------

struct PathDecompositionEntry {
    int terminal;
    std::vector<int> arcs;
    Rat amount;
};

struct PathDecomposition {
    std::vector<PathDecompositionEntry> entries;
};

// Strips source-to-terminal paths off x until every demand is covered.
// Paths stay inside the support of x, the amounts per terminal sum to its
// demand, and summing amounts per arc reproduces x exactly. At most
// |A| + |T| paths: every strip zeroes an arc or finishes a terminal.
inline PathDecomposition flow_decomposition(const WeightedSsufNetwork& net,
                                            const FractionalFlow& x) {
    require_membership(net, x, "flow_decomposition");
    if (!support_is_acyclic(net, x)) {
        throw CyclicSupportError("flow_decomposition requires an acyclic support");
    }
    PathDecomposition result;
    FractionalFlow residual = x;
    for (int t = 0; t < net.terminal_count(); ++t) {
        const Terminal& terminal = net.terminals()[static_cast<std::size_t>(t)];
        if (terminal.node == net.source()) {
            if (terminal.demand > 0) {
                result.entries.push_back(PathDecompositionEntry{t, {}, terminal.demand});
            }
            continue;
        }
        Rat remaining = terminal.demand;
        while (remaining > 0) {
            // Backward walk from the terminal along positive residual arcs;
            // conservation guarantees an incoming arc until the source.
            std::vector<int> reversed;
            int at = terminal.node;
            while (at != net.source()) {
                int chosen = -1;
                for (int a : net.in_arcs(at)) {
                    if (residual[a] > 0 && (chosen == -1 || a < chosen)) chosen = a;
                }
                if (chosen == -1) {
                    throw InternalError("flow decomposition stalled; input was not a flow");
                }
                reversed.push_back(chosen);
                at = net.arc(chosen).tail;
            }
            std::reverse(reversed.begin(), reversed.end());
            Rat amount = remaining;
            for (int a : reversed) amount = std::min(amount, residual[a]);
            for (int a : reversed) residual[a] -= amount;
            remaining -= amount;
            result.entries.push_back(PathDecompositionEntry{t, std::move(reversed), amount});
        }
    }
    for (int a = 0; a < net.arc_count(); ++a) {
        if (residual[a] != 0) {
            throw InternalError("flow decomposition left residual flow on arc " + net.arc(a).id);
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Path enumeration
// ---------------------------------------------------------------------------

namespace detail {

// All simple paths from the source to `target`, arcs explored in index
// order so the result is lexicographically sorted by arc sequence.
inline std::vector<std::vector<int>> enumerate_paths(const WeightedSsufNetwork& net, int target,
                                                     std::size_t cap) {
    std::vector<std::vector<int>> paths;
    std::vector<int> current;
    std::vector<bool> visited(static_cast<std::size_t>(net.node_count()), false);
    const std::function<void(int)> dfs = [&](int v) {
        if (v == target) {
            // A simple path meets the target only as its final node.
            if (paths.size() >= cap) {
                throw TooLargeError("path enumeration exceeded the per-terminal cap of " +
                                    std::to_string(cap));
            }
            paths.push_back(current);
            return;
        }
        visited[static_cast<std::size_t>(v)] = true;
        for (int a : net.out_arcs(v)) {
            const int w = net.arc(a).head;
            if (visited[static_cast<std::size_t>(w)]) continue;
            current.push_back(a);
            dfs(w);
            current.pop_back();
        }
        visited[static_cast<std::size_t>(v)] = false;
    };
    dfs(net.source());
    return paths;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Brute-force rounding for flows
// ---------------------------------------------------------------------------

struct SsufEnumerationEntry {
    std::vector<int> path_choice;  // per terminal: index into its candidate list
    int witness_arc;               // arc where the body is violated
    Rat deviation_at_witness;
};

// Exhaustive record proving that no assignment lands in the body: lists
// the candidate paths and one violated coordinate per assignment.
struct SsufCounterexample {
    std::vector<std::vector<std::vector<int>>> candidate_paths;  // per terminal
    std::vector<SsufEnumerationEntry> entries;
};

class SsufNoSolutionError : public NoSolutionInBodyError {
public:
    SsufNoSolutionError(const std::string& what, SsufCounterexample certificate)
        : NoSolutionInBodyError(what), certificate(std::move(certificate)) {}

    SsufCounterexample certificate;
};

struct SsufFpraResult {
    UnsplittablePathFlow flow;
    std::vector<Rat> deviation;  // f - x
    bool within_body = true;
};

namespace detail {

struct SsufAssignmentSearch {
    const WeightedSsufNetwork& net;
    const FractionalFlow& x;
    const BoxErrorBody& body;
    const std::vector<std::vector<std::vector<int>>>& candidates;
    std::size_t max_assignments;
    bool prune;

    std::vector<Rat> load;
    std::vector<int> choice;
    std::size_t visited = 0;

    bool found = false;
    ScaledDeviation best;
    std::vector<int> best_choice;
    bool require_in_body = true;
    SsufCounterexample* counterexample = nullptr;

    void run() {
        load.assign(static_cast<std::size_t>(net.arc_count()), Rat(0));
        choice.assign(candidates.size(), 0);
        descend(0);
    }

    void descend(std::size_t t) {
        if (t == candidates.size()) {
            ++visited;
            if (visited > max_assignments) {
                throw TooLargeError("assignment enumeration exceeded cap of " +
                                    std::to_string(max_assignments));
            }
            std::vector<Rat> deviation(load.size());
            for (std::size_t a = 0; a < load.size(); ++a) deviation[a] = load[a] - x.values[a];
            const ScaledDeviation dev = scaled_deviation(deviation, body);
            if (counterexample != nullptr && !dev.in_body()) {
                int witness = -1;
                for (std::size_t a = 0; a < deviation.size(); ++a) {
                    if (deviation[a] < body.lower(a) || deviation[a] > body.upper(a)) {
                        witness = static_cast<int>(a);
                        break;
                    }
                }
                counterexample->entries.push_back(
                    SsufEnumerationEntry{choice, witness,
                                         witness >= 0 ? deviation[static_cast<std::size_t>(witness)]
                                                      : Rat(0)});
            }
            if (require_in_body && !dev.in_body()) return;
            if (!found || dev < best) {
                found = true;
                best = dev;
                best_choice = choice;
            }
            return;
        }
        const Rat& demand = net.terminals()[t].demand;
        for (std::size_t p = 0; p < candidates[t].size(); ++p) {
            choice[t] = static_cast<int>(p);
            bool violated = false;
            for (int a : candidates[t][p]) {
                load[static_cast<std::size_t>(a)] += demand;
            }
            if (prune) {
                for (int a : candidates[t][p]) {
                    const auto ai = static_cast<std::size_t>(a);
                    if (load[ai] - x.values[ai] > body.upper(ai)) {
                        violated = true;
                        break;
                    }
                }
            }
            if (!violated) descend(t + 1);
            for (int a : candidates[t][p]) {
                load[static_cast<std::size_t>(a)] -= demand;
            }
        }
    }
};

}  // namespace detail

// Exhaustive rounding oracle: assigns every terminal to a source-sink path
// inside the support of x, keeps the assignments whose load lands in
// x + body, and returns the one of smallest scaled deviation (ties resolved
// toward the lexicographically smallest path-index tuple). Face preservation
// holds by construction since only support arcs are used. When no assignment
// lands in the body, strict mode throws with the full enumeration as a
// counterexample certificate and report mode returns the overall deviation
// minimizer flagged as out of body.
inline SsufFpraResult brute_force_ssuf_fpra(const WeightedSsufNetwork& net,
                                            const FractionalFlow& x, const BoxErrorBody& body,
                                            const EnumerationLimits& limits = {},
                                            Strictness strictness = Strictness::Strict) {
    require_membership(net, x, "brute_force_ssuf_fpra");
    if (!support_is_acyclic(net, x)) {
        throw CyclicSupportError("brute_force_ssuf_fpra requires an acyclic support");
    }
    if (body.dimension() != static_cast<std::size_t>(net.arc_count())) {
        throw IndexMismatchError("error body dimension does not match arc count");
    }

    const SupportSubnetwork support = support_subnetwork(net, x);
    std::vector<std::vector<std::vector<int>>> candidates(
        static_cast<std::size_t>(net.terminal_count()));
    std::map<int, std::vector<std::vector<int>>> by_node;
    for (int t = 0; t < net.terminal_count(); ++t) {
        const Terminal& terminal = net.terminals()[static_cast<std::size_t>(t)];
        auto it = by_node.find(terminal.node);
        if (it == by_node.end()) {
            std::vector<std::vector<int>> paths = detail::enumerate_paths(
                support.network, terminal.node, limits.max_paths_per_terminal);
            // Translate to original arc indices.
            for (auto& path : paths) {
                for (int& a : path) a = support.arc_to_original[static_cast<std::size_t>(a)];
            }
            if (paths.empty() && terminal.demand == 0) {
                // A demandless terminal cannot change the load vector, so a
                // path outside the support keeps the face intact.
                paths = detail::enumerate_paths(net, terminal.node, limits.max_paths_per_terminal);
            }
            if (paths.empty()) {
                throw InvalidFlowError("support has no path to terminal " + std::to_string(t) +
                                       " despite positive demand");
            }
            it = by_node.emplace(terminal.node, std::move(paths)).first;
        }
        candidates[static_cast<std::size_t>(t)] = it->second;
    }

    detail::SsufAssignmentSearch search{net, x, body, candidates, limits.max_assignments, true};
    search.run();

    std::vector<int> best_choice = search.best_choice;
    if (!search.found) {
        detail::SsufAssignmentSearch full{net, x, body, candidates, limits.max_assignments, false};
        SsufCounterexample certificate;
        certificate.candidate_paths = candidates;
        full.require_in_body = false;
        full.counterexample = &certificate;
        full.run();
        if (strictness == Strictness::Strict) {
            throw SsufNoSolutionError("no terminal-to-path assignment lands in the error body",
                                      std::move(certificate));
        }
        best_choice = full.best_choice;
    }

    SsufFpraResult result;
    result.flow.paths.resize(candidates.size());
    for (std::size_t t = 0; t < candidates.size(); ++t) {
        result.flow.paths[t] = candidates[t][static_cast<std::size_t>(best_choice[t])];
    }
    const FractionalFlow load = induced_load(net, result.flow);
    result.deviation = vec_sub(load.values, x.values);
    result.within_body = scaled_deviation(result.deviation, body).in_body();
    return result;
}

// Heuristic rounder with no declared body: decompose x into paths and send
// each terminal along its largest-amount path (first such path on ties).
// Decomposition paths live in the support, so the result is face preserving.
inline SsufFpraResult greedy_path_strip_fpra(const WeightedSsufNetwork& net,
                                             const FractionalFlow& x) {
    const PathDecomposition decomposition = flow_decomposition(net, x);
    SsufFpraResult result;
    result.flow.paths.assign(static_cast<std::size_t>(net.terminal_count()), {});
    std::vector<const PathDecompositionEntry*> pick(
        static_cast<std::size_t>(net.terminal_count()), nullptr);
    for (const PathDecompositionEntry& entry : decomposition.entries) {
        auto& best = pick[static_cast<std::size_t>(entry.terminal)];
        if (best == nullptr || entry.amount > best->amount) best = &entry;
    }
    for (int t = 0; t < net.terminal_count(); ++t) {
        const auto ti = static_cast<std::size_t>(t);
        if (pick[ti] != nullptr) {
            result.flow.paths[ti] = pick[ti]->arcs;
            continue;
        }
        // Demandless terminal: any path works; keep the lexicographically
        // first one found in the support, else in the full network.
        const Terminal& terminal = net.terminals()[ti];
        if (terminal.node == net.source()) continue;
        const SupportSubnetwork support = support_subnetwork(net, x);
        std::vector<std::vector<int>> paths =
            detail::enumerate_paths(support.network, terminal.node, 1);
        if (!paths.empty()) {
            for (int& a : paths[0]) a = support.arc_to_original[static_cast<std::size_t>(a)];
        } else {
            paths = detail::enumerate_paths(net, terminal.node, 1);
            if (paths.empty()) {
                throw InvalidFlowError("no path to demandless terminal " + std::to_string(t));
            }
        }
        result.flow.paths[ti] = paths[0];
    }
    const FractionalFlow load = induced_load(net, result.flow);
    result.deviation = vec_sub(load.values, x.values);
    result.within_body = true;  // no declared body; deviation is informational
    return result;
}

// ---------------------------------------------------------------------------
// Brute-force rounding for rings
// ---------------------------------------------------------------------------

struct RingEnumerationEntry {
    std::vector<int> choice;
    int witness_edge;
    Rat deviation_at_witness;
};

struct RingCounterexample {
    std::vector<RingEnumerationEntry> entries;
};

class RingNoSolutionError : public NoSolutionInBodyError {
public:
    RingNoSolutionError(const std::string& what, RingCounterexample certificate)
        : NoSolutionInBodyError(what), certificate(std::move(certificate)) {}

    RingCounterexample certificate;
};

struct RingFpraResult {
    RingUnsplittableSolution solution;
    std::vector<Rat> deviation;  // load - reference load
    bool within_body = true;
};

namespace detail {

struct RingChoiceSearch {
    const RingInstance& inst;
    const std::vector<Rat>& reference;
    const BoxErrorBody& body;
    bool prune;

    std::vector<Rat> load;
    std::vector<int> choice;

    bool found = false;
    ScaledDeviation best;
    std::vector<int> best_choice;
    bool require_in_body = true;
    RingCounterexample* counterexample = nullptr;

    void run() {
        load.assign(static_cast<std::size_t>(inst.edge_count()), Rat(0));
        choice.assign(static_cast<std::size_t>(inst.commodity_count()), 0);
        descend(0);
    }

    void descend(int i) {
        if (i == inst.commodity_count()) {
            std::vector<Rat> deviation(load.size());
            for (std::size_t e = 0; e < load.size(); ++e) deviation[e] = load[e] - reference[e];
            const ScaledDeviation dev = scaled_deviation(deviation, body);
            if (counterexample != nullptr && !dev.in_body()) {
                int witness = -1;
                for (std::size_t e = 0; e < deviation.size(); ++e) {
                    if (deviation[e] < body.lower(e) || deviation[e] > body.upper(e)) {
                        witness = static_cast<int>(e);
                        break;
                    }
                }
                counterexample->entries.push_back(RingEnumerationEntry{
                    choice, witness,
                    witness >= 0 ? deviation[static_cast<std::size_t>(witness)] : Rat(0)});
            }
            if (require_in_body && !dev.in_body()) return;
            if (!found || dev < best) {
                found = true;
                best = dev;
                best_choice = choice;
            }
            return;
        }
        const Rat& demand = inst.commodity(i).demand;
        for (int option = 1; option <= 2; ++option) {
            choice[static_cast<std::size_t>(i)] = option;
            const std::vector<int> path = inst.path_of_choice(i, option);
            bool violated = false;
            for (int e : path) load[static_cast<std::size_t>(e)] += demand;
            if (prune) {
                for (int e : path) {
                    const auto ei = static_cast<std::size_t>(e);
                    if (load[ei] - reference[ei] > body.upper(ei)) {
                        violated = true;
                        break;
                    }
                }
            }
            if (!violated) descend(i + 1);
            for (int e : path) load[static_cast<std::size_t>(e)] -= demand;
        }
    }
};

}  // namespace detail

// Exhaustive rounding oracle over the 2^k path choices, measured against the
// loads of `reference`. Same selection and tie-breaking discipline as the
// flow variant; the lexicographic order treats choice 1 as smaller.
inline RingFpraResult brute_force_ring_fpra(const RingInstance& inst,
                                            const RingFractionalSolution& reference,
                                            const BoxErrorBody& body,
                                            const EnumerationLimits& limits = {},
                                            Strictness strictness = Strictness::Strict) {
    require_ring_splits(inst, reference);
    if (body.dimension() != static_cast<std::size_t>(inst.edge_count())) {
        throw IndexMismatchError("error body dimension does not match edge count");
    }
    if (inst.commodity_count() > limits.max_ring_commodities) {
        throw TooLargeError("ring enumeration limited to " +
                            std::to_string(limits.max_ring_commodities) + " commodities, got " +
                            std::to_string(inst.commodity_count()));
    }
    const std::vector<Rat> reference_load = ring_load(inst, reference);

    detail::RingChoiceSearch search{inst, reference_load, body, true};
    search.run();
    std::vector<int> best_choice = search.best_choice;
    if (!search.found) {
        detail::RingChoiceSearch full{inst, reference_load, body, false};
        RingCounterexample certificate;
        full.require_in_body = false;
        full.counterexample = &certificate;
        full.run();
        if (strictness == Strictness::Strict) {
            throw RingNoSolutionError("no path choice lands in the error body",
                                      std::move(certificate));
        }
        best_choice = full.best_choice;
    }

    RingFpraResult result;
    result.solution.choice = best_choice;
    const std::vector<Rat> load = ring_load(inst, result.solution);
    result.deviation = vec_sub(load, reference_load);
    result.within_body = scaled_deviation(result.deviation, body).in_body();
    return result;
}

// ---------------------------------------------------------------------------
// Named plug-in slots
// ---------------------------------------------------------------------------

struct SsufFpra {
    FpraDescriptor descriptor;
    std::function<SsufFpraResult(const WeightedSsufNetwork&, const FractionalFlow&,
                                 const BoxErrorBody&)>
        run;
};

struct RingFpra {
    FpraDescriptor descriptor;
    std::function<RingFpraResult(const RingInstance&, const RingFractionalSolution&,
                                 const BoxErrorBody&)>
        run;
};

inline SsufFpra make_brute_force_ssuf_fpra(const EnumerationLimits& limits = {},
                                           Strictness strictness = Strictness::Strict) {
    SsufFpra fpra;
    fpra.descriptor = FpraDescriptor{"brute", true, strictness};
    fpra.run = [limits, strictness](const WeightedSsufNetwork& net, const FractionalFlow& x,
                                    const BoxErrorBody& body) {
        return brute_force_ssuf_fpra(net, x, body, limits, strictness);
    };
    return fpra;
}

inline SsufFpra make_greedy_ssuf_fpra() {
    SsufFpra fpra;
    fpra.descriptor = FpraDescriptor{"greedy", false, Strictness::Report};
    fpra.run = [](const WeightedSsufNetwork& net, const FractionalFlow& x, const BoxErrorBody&) {
        return greedy_path_strip_fpra(net, x);
    };
    return fpra;
}

inline RingFpra make_brute_force_ring_fpra(const EnumerationLimits& limits = {},
                                           Strictness strictness = Strictness::Strict) {
    RingFpra fpra;
    fpra.descriptor = FpraDescriptor{"brute", true, strictness};
    fpra.run = [limits, strictness](const RingInstance& inst, const RingFractionalSolution& ref,
                                    const BoxErrorBody& body) {
        return brute_force_ring_fpra(inst, ref, body, limits, strictness);
    };
    return fpra;
}

}  // namespace unsplit
