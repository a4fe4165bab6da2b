#pragma once

// Shared fixtures plus small independent re-enumeration oracles. The oracles
// here deliberately avoid the library's search code paths: full recomputation
// at every leaf, no pruning, no incremental loads.

#include <optional>
#include <vector>

#include "unsplit/box.hpp"
#include "unsplit/fpra.hpp"
#include "unsplit/rational.hpp"
#include "unsplit/ring.hpp"
#include "unsplit/ssuf.hpp"

namespace unsplit::test {

inline WeightedSsufNetwork parallel_arcs(const Rat& c0 = Rat(0), const Rat& c1 = Rat(1)) {
    return WeightedSsufNetwork({"s", "t"},
                               {ArcSpec{"a0", "s", "t", c0}, ArcSpec{"a1", "s", "t", c1}}, "s",
                               {TerminalSpec{"t", Rat(1)}, TerminalSpec{"t", Rat(1)}});
}

// s -> a -> t and s -> b -> t, one unit of demand at t.
inline WeightedSsufNetwork diamond() {
    return WeightedSsufNetwork({"s", "a", "b", "t"},
                               {ArcSpec{"sa", "s", "a", Rat(1)}, ArcSpec{"at", "a", "t", Rat(1)},
                                ArcSpec{"sb", "s", "b", Rat(1)}, ArcSpec{"bt", "b", "t", Rat(1)}},
                               "s", {TerminalSpec{"t", Rat(1)}});
}

inline WeightedSsufNetwork path_graph(const Rat& demand = Rat(3)) {
    return WeightedSsufNetwork(
        {"s", "v", "t"},
        {ArcSpec{"sv", "s", "v", Rat(1)}, ArcSpec{"vt", "v", "t", Rat(2)}}, "s",
        {TerminalSpec{"t", demand}});
}

inline std::vector<Rat> rats(std::initializer_list<const char*> labels) {
    std::vector<Rat> out;
    for (const char* text : labels) out.push_back(parse_rational(text));
    return out;
}

// All simple source-to-target paths using only arcs with x > 0, collected by
// plain recursion over in-arcs (reverse direction, unlike the library).
inline void collect_paths_rec(const WeightedSsufNetwork& net, const FractionalFlow& x, int at,
                              std::vector<int>& suffix, std::vector<bool>& used,
                              std::vector<std::vector<int>>& out) {
    if (at == net.source()) {
        out.emplace_back(suffix.rbegin(), suffix.rend());
        return;
    }
    for (int a : net.in_arcs(at)) {
        if (x[a] <= 0) continue;
        const int tail = net.arc(a).tail;
        if (used[static_cast<std::size_t>(tail)]) continue;
        used[static_cast<std::size_t>(tail)] = true;
        suffix.push_back(a);
        collect_paths_rec(net, x, tail, suffix, used, out);
        suffix.pop_back();
        used[static_cast<std::size_t>(tail)] = false;
    }
}

inline std::vector<std::vector<int>> support_paths(const WeightedSsufNetwork& net,
                                                   const FractionalFlow& x, int target) {
    std::vector<std::vector<int>> out;
    std::vector<int> suffix;
    std::vector<bool> used(static_cast<std::size_t>(net.node_count()), false);
    used[static_cast<std::size_t>(target)] = true;
    collect_paths_rec(net, x, target, suffix, used, out);
    return out;
}

struct IndependentSsufScan {
    bool any_in_body = false;
    std::optional<Rat> best_linf;  // over in-body assignments, unscaled max |dev|
    long assignments = 0;
};

// Exhaustively scans every terminal-to-path assignment in the support of x
// and records whether any lands in x + body.
inline IndependentSsufScan independent_ssuf_scan(const WeightedSsufNetwork& net,
                                                 const FractionalFlow& x,
                                                 const BoxErrorBody& body) {
    std::vector<std::vector<std::vector<int>>> options;
    for (const Terminal& t : net.terminals()) {
        options.push_back(support_paths(net, x, t.node));
    }
    IndependentSsufScan scan;
    for (const auto& list : options) {
        if (list.empty()) return scan;
    }
    std::vector<std::size_t> pick(options.size(), 0);
    while (true) {
        FractionalFlow load = FractionalFlow::zeros(net.arc_count());
        for (std::size_t t = 0; t < options.size(); ++t) {
            for (int a : options[t][pick[t]]) {
                load[a] += net.terminals()[t].demand;
            }
        }
        ++scan.assignments;
        bool in_body = true;
        Rat linf = 0;
        for (int a = 0; a < net.arc_count(); ++a) {
            const Rat dev = load[a] - x[a];
            if (dev < body.lower(static_cast<std::size_t>(a)) ||
                dev > body.upper(static_cast<std::size_t>(a))) {
                in_body = false;
            }
            linf = std::max(linf, rat_abs(dev));
        }
        if (in_body) {
            scan.any_in_body = true;
            if (!scan.best_linf || linf < *scan.best_linf) scan.best_linf = linf;
        }
        std::size_t t = 0;
        while (t < options.size() && ++pick[t] == options[t].size()) {
            pick[t] = 0;
            ++t;
        }
        if (t == options.size()) break;
        if (options.empty()) break;
    }
    return scan;
}

struct IndependentRingScan {
    bool any_in_body = false;
    std::optional<Rat> best_linf;
};

inline IndependentRingScan independent_ring_scan(const RingInstance& inst,
                                                 const std::vector<Rat>& reference,
                                                 const BoxErrorBody& body) {
    IndependentRingScan scan;
    const int k = inst.commodity_count();
    for (long mask = 0; mask < (1L << k); ++mask) {
        RingUnsplittableSolution sol;
        for (int i = 0; i < k; ++i) sol.choice.push_back(((mask >> i) & 1) == 0 ? 1 : 2);
        const std::vector<Rat> load = ring_load(inst, sol);
        bool in_body = true;
        Rat linf = 0;
        for (int e = 0; e < inst.edge_count(); ++e) {
            const Rat dev = load[static_cast<std::size_t>(e)] -
                            reference[static_cast<std::size_t>(e)];
            if (dev < body.lower(static_cast<std::size_t>(e)) ||
                dev > body.upper(static_cast<std::size_t>(e))) {
                in_body = false;
            }
            linf = std::max(linf, rat_abs(dev));
        }
        if (in_body) {
            scan.any_in_body = true;
            if (!scan.best_linf || linf < *scan.best_linf) scan.best_linf = linf;
        }
    }
    return scan;
}

}  // namespace unsplit::test
