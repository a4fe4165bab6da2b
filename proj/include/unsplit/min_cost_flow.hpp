#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "unsplit/errors.hpp"
#include "unsplit/lp_oracle.hpp"
#include "unsplit/rational.hpp"
#include "unsplit/ssuf.hpp"

namespace unsplit {

// Per-arc interval [lower, upper] with 0 <= lower <= upper. The nonnegativity
// part of Q is folded into the lower bounds.
struct ArcBounds {
    std::vector<Rat> lower, upper;
};

inline void require_valid_bounds(const WeightedSsufNetwork& net, const ArcBounds& bounds) {
    if (static_cast<int>(bounds.lower.size()) != net.arc_count() ||
        static_cast<int>(bounds.upper.size()) != net.arc_count()) {
        throw IndexMismatchError("bounds do not match arc count");
    }
    for (int a = 0; a < net.arc_count(); ++a) {
        const auto i = static_cast<std::size_t>(a);
        if (bounds.lower[i] < 0) throw InvalidBoundsError("negative lower bound on arc " + net.arc(a).id);
        if (bounds.lower[i] > bounds.upper[i]) {
            throw InvalidBoundsError("lower bound exceeds upper bound on arc " + net.arc(a).id);
        }
    }
}

namespace detail {

// Residual arc of the transformed zero-lower-bound problem.
struct ResidualArc {
    int to = 0;
    Rat remaining;
    Rat cost;
    int rev = 0;  // index of the paired reverse arc
};

class ResidualGraph {
public:
    explicit ResidualGraph(int node_count) : adj_(static_cast<std::size_t>(node_count)) {}

    int add(int from, int to, const Rat& capacity, const Rat& cost) {
        const int fwd = static_cast<int>(arcs_.size());
        arcs_.push_back(ResidualArc{to, capacity, cost, fwd + 1});
        arcs_.push_back(ResidualArc{from, Rat(0), -cost, fwd});
        adj_[static_cast<std::size_t>(from)].push_back(fwd);
        adj_[static_cast<std::size_t>(to)].push_back(fwd + 1);
        return fwd;
    }

    ResidualArc& arc(int i) { return arcs_[static_cast<std::size_t>(i)]; }
    const ResidualArc& arc(int i) const { return arcs_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& out(int v) const { return adj_[static_cast<std::size_t>(v)]; }
    int node_count() const { return static_cast<int>(adj_.size()); }

    void push(int i, const Rat& amount) {
        arcs_[static_cast<std::size_t>(i)].remaining -= amount;
        arcs_[static_cast<std::size_t>(arcs_[static_cast<std::size_t>(i)].rev)].remaining += amount;
    }

private:
    std::vector<std::vector<int>> adj_;
    std::vector<ResidualArc> arcs_;
};

}  // namespace detail

// Exact min-cost flow under box bounds: minimizes c^T y over flows of Q
// with bounds.lower <= y <= bounds.upper. Lower bounds are removed by the
// usual excess transformation, negative-cost arcs are pre-saturated, and the
// remainder is solved by successive shortest augmenting paths with rational
// node potentials. Deterministic for fixed input: arcs are scanned in index
// order and Dijkstra breaks ties toward the smaller node index.
inline LpSolution<FractionalFlow> min_cost_flow_bounded(const WeightedSsufNetwork& net,
                                                        const ArcBounds& bounds) {
    require_valid_bounds(net, bounds);

    const int n = net.node_count();
    const int source_node = n, sink_node = n + 1;
    detail::ResidualGraph graph(n + 2);

    std::vector<Rat> excess(static_cast<std::size_t>(n), Rat(0));
    for (int v = 0; v < n; ++v) excess[static_cast<std::size_t>(v)] = net.net_supply(v);

    // z ranges over [0, upper-lower]; shifting by the lower bound moves the
    // bound into the node excesses.
    std::vector<int> forward(static_cast<std::size_t>(net.arc_count()), -1);
    for (int a = 0; a < net.arc_count(); ++a) {
        const auto& arc = net.arc(a);
        const auto i = static_cast<std::size_t>(a);
        const Rat capacity = bounds.upper[i] - bounds.lower[i];
        excess[static_cast<std::size_t>(arc.tail)] -= bounds.lower[i];
        excess[static_cast<std::size_t>(arc.head)] += bounds.lower[i];
        forward[i] = graph.add(arc.tail, arc.head, capacity, arc.cost);
        if (arc.cost < 0 && capacity > 0) {
            // Saturating keeps every residual cost nonnegative.
            graph.push(forward[i], capacity);
            excess[static_cast<std::size_t>(arc.tail)] -= capacity;
            excess[static_cast<std::size_t>(arc.head)] += capacity;
        }
    }

    Rat required = 0;
    for (int v = 0; v < n; ++v) {
        const Rat& e = excess[static_cast<std::size_t>(v)];
        if (e > 0) {
            graph.add(source_node, v, e, Rat(0));
            required += e;
        } else if (e < 0) {
            graph.add(v, sink_node, -e, Rat(0));
        }
    }

    const int node_total = graph.node_count();
    std::vector<Rat> potential(static_cast<std::size_t>(node_total), Rat(0));
    Rat routed = 0;

    while (true) {
        // Dijkstra on reduced costs; O(V^2) selection is plenty at this scale.
        std::vector<std::optional<Rat>> dist(static_cast<std::size_t>(node_total));
        std::vector<int> pred_arc(static_cast<std::size_t>(node_total), -1);
        std::vector<bool> done(static_cast<std::size_t>(node_total), false);
        dist[static_cast<std::size_t>(source_node)] = Rat(0);
        while (true) {
            int best = -1;
            for (int v = 0; v < node_total; ++v) {
                if (done[static_cast<std::size_t>(v)] || !dist[static_cast<std::size_t>(v)]) continue;
                if (best == -1 || *dist[static_cast<std::size_t>(v)] < *dist[static_cast<std::size_t>(best)]) {
                    best = v;
                }
            }
            if (best == -1) break;
            done[static_cast<std::size_t>(best)] = true;
            for (int idx : graph.out(best)) {
                const auto& arc = graph.arc(idx);
                if (arc.remaining <= 0) continue;
                const Rat candidate = *dist[static_cast<std::size_t>(best)] + arc.cost +
                                      potential[static_cast<std::size_t>(best)] -
                                      potential[static_cast<std::size_t>(arc.to)];
                auto& d = dist[static_cast<std::size_t>(arc.to)];
                if (!d || candidate < *d) {
                    d = candidate;
                    pred_arc[static_cast<std::size_t>(arc.to)] = idx;
                }
            }
        }
        if (!dist[static_cast<std::size_t>(sink_node)]) break;

        const Rat sink_dist = *dist[static_cast<std::size_t>(sink_node)];
        for (int v = 0; v < node_total; ++v) {
            const auto& d = dist[static_cast<std::size_t>(v)];
            potential[static_cast<std::size_t>(v)] += d ? std::min(*d, sink_dist) : sink_dist;
        }

        Rat bottleneck;
        bool first = true;
        for (int v = sink_node; v != source_node;) {
            const int idx = pred_arc[static_cast<std::size_t>(v)];
            const auto& arc = graph.arc(idx);
            if (first || arc.remaining < bottleneck) bottleneck = arc.remaining;
            first = false;
            v = graph.arc(arc.rev).to;
        }
        for (int v = sink_node; v != source_node;) {
            const int idx = pred_arc[static_cast<std::size_t>(v)];
            graph.push(idx, bottleneck);
            v = graph.arc(graph.arc(idx).rev).to;
        }
        routed += bottleneck;
    }

    if (routed != required) return {LpStatus::Infeasible, {}, 0};

    FractionalFlow flow = FractionalFlow::zeros(net.arc_count());
    for (int a = 0; a < net.arc_count(); ++a) {
        const auto i = static_cast<std::size_t>(a);
        // The reverse arc's remaining capacity equals the flow on the arc.
        flow[a] = bounds.lower[i] + graph.arc(graph.arc(forward[i]).rev).remaining;
    }
    Rat objective = cost_of(net, flow);
    return {LpStatus::Optimal, std::move(flow), std::move(objective)};
}

}  // namespace unsplit
