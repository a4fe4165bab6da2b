#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "unsplit/errors.hpp"
#include "unsplit/io.hpp"
#include "unsplit/rational.hpp"
#include "unsplit/ring.hpp"
#include "unsplit/ssuf.hpp"

namespace unsplit {

namespace gen_detail {

// mt19937_64 output is fixed by the standard; combined with plain modulo
// sampling, identical seeds give identical instances on every platform.
inline std::uint64_t below(std::mt19937_64& rng, std::uint64_t n) {
    return n == 0 ? 0 : rng() % n;
}

inline Rat positive_rational(std::mt19937_64& rng, int num_max, int den_max) {
    const auto num = 1 + below(rng, static_cast<std::uint64_t>(num_max));
    const auto den = 1 + below(rng, static_cast<std::uint64_t>(den_max));
    Rat q(static_cast<long>(num), static_cast<long>(den));
    q.canonicalize();
    return q;
}

inline Rat nonnegative_rational(std::mt19937_64& rng, int num_max, int den_max) {
    const auto num = below(rng, static_cast<std::uint64_t>(num_max) + 1);
    const auto den = 1 + below(rng, static_cast<std::uint64_t>(den_max));
    Rat q(static_cast<long>(num), static_cast<long>(den));
    q.canonicalize();
    return q;
}

}  // namespace gen_detail

struct SsufGenParams {
    int nodes = 6;
    int extra_arcs = 5;  // arcs beyond the spanning ones; total = nodes - 1 + extra
    int terminals = 3;
    int demand_num_max = 4;
    int demand_den_max = 3;
    int cost_num_max = 6;
    int cost_den_max = 2;
    int max_paths_per_terminal = 3;
};

// Random acyclic instance with a feasible fractional flow built in: arcs
// only go forward in the node order, every node is reachable from the
// source, and x mixes a few random source-terminal paths per demand.
inline SsufInstanceDoc generate_ssuf(std::uint64_t seed, const SsufGenParams& params = {}) {
    if (params.nodes < 1) throw UnsatisfiableParamsError("need at least one node");
    if (params.terminals < 0 || params.extra_arcs < 0) {
        throw UnsatisfiableParamsError("negative size parameter");
    }
    if (params.terminals > params.nodes - 1) {
        throw UnsatisfiableParamsError("at most nodes-1 distinct terminal nodes are available");
    }
    std::mt19937_64 rng(seed);

    std::vector<std::string> node_ids;
    for (int v = 0; v < params.nodes; ++v) node_ids.push_back("v" + std::to_string(v));

    std::vector<ArcSpec> arcs;
    const auto add_arc = [&](int tail, int head) {
        arcs.push_back(ArcSpec{"a" + std::to_string(arcs.size()), node_ids[static_cast<std::size_t>(tail)],
                               node_ids[static_cast<std::size_t>(head)],
                               gen_detail::nonnegative_rational(rng, params.cost_num_max,
                                                                params.cost_den_max)});
    };
    for (int v = 1; v < params.nodes; ++v) {
        add_arc(static_cast<int>(gen_detail::below(rng, static_cast<std::uint64_t>(v))), v);
    }
    for (int extra = 0; extra < params.extra_arcs && params.nodes >= 2; ++extra) {
        const int tail =
            static_cast<int>(gen_detail::below(rng, static_cast<std::uint64_t>(params.nodes - 1)));
        const int head =
            tail + 1 +
            static_cast<int>(gen_detail::below(
                rng, static_cast<std::uint64_t>(params.nodes - 1 - tail)));
        add_arc(tail, head);
    }

    // Distinct terminal nodes drawn from everything but the source.
    std::vector<int> pool;
    for (int v = 1; v < params.nodes; ++v) pool.push_back(v);
    std::vector<TerminalSpec> terminals;
    for (int t = 0; t < params.terminals; ++t) {
        const auto pick = gen_detail::below(rng, pool.size());
        const int node = pool[static_cast<std::size_t>(pick)];
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
        terminals.push_back(TerminalSpec{
            node_ids[static_cast<std::size_t>(node)],
            gen_detail::positive_rational(rng, params.demand_num_max, params.demand_den_max)});
    }

    WeightedSsufNetwork net(node_ids, arcs, node_ids[0], terminals);

    // Fractional flow: mix 1..max random paths per terminal with random
    // positive weights. Backward walks terminate because every node has an
    // incoming arc from a smaller node.
    FractionalFlow x = FractionalFlow::zeros(net.arc_count());
    for (int t = 0; t < net.terminal_count(); ++t) {
        const Terminal& terminal = net.terminals()[static_cast<std::size_t>(t)];
        const int path_count =
            1 + static_cast<int>(gen_detail::below(
                    rng, static_cast<std::uint64_t>(params.max_paths_per_terminal)));
        std::vector<std::vector<int>> walk_arcs;
        std::vector<std::uint64_t> weights;
        std::uint64_t weight_sum = 0;
        for (int p = 0; p < path_count; ++p) {
            std::vector<int> arcs_reversed;
            int at = terminal.node;
            while (at != net.source()) {
                const auto& in = net.in_arcs(at);
                const int a = in[static_cast<std::size_t>(gen_detail::below(rng, in.size()))];
                arcs_reversed.push_back(a);
                at = net.arc(a).tail;
            }
            std::reverse(arcs_reversed.begin(), arcs_reversed.end());
            walk_arcs.push_back(std::move(arcs_reversed));
            const std::uint64_t w = 1 + gen_detail::below(rng, 8);
            weights.push_back(w);
            weight_sum += w;
        }
        for (std::size_t p = 0; p < walk_arcs.size(); ++p) {
            Rat amount = terminal.demand * Rat(static_cast<long>(weights[p]),
                                               static_cast<long>(weight_sum));
            amount.canonicalize();
            for (int a : walk_arcs[p]) x[a] += amount;
        }
    }

    return SsufInstanceDoc{std::move(net), std::move(x)};
}

struct RingGenParams {
    int nodes = 6;
    int commodities = 3;
    int demand_num_max = 4;
    int demand_den_max = 3;
    int cost_num_max = 5;
    int cost_den_max = 2;
    bool with_capacities = false;
    int capacity_slack_max = 3;
    int unsplit_percent = 20;  // odds that a commodity starts already unsplit
};

// Random ring instance with a fractional solution; with_capacities sizes
// every capacity as the fractional load plus random slack, so the instance
// is fractionally feasible by construction.
inline RingInstanceDoc generate_ring(std::uint64_t seed, const RingGenParams& params = {}) {
    if (params.nodes < 2) throw UnsatisfiableParamsError("a ring needs at least two nodes");
    if (params.commodities < 0) throw UnsatisfiableParamsError("negative commodity count");
    std::mt19937_64 rng(seed);

    std::vector<std::string> node_ids;
    for (int v = 0; v < params.nodes; ++v) node_ids.push_back("v" + std::to_string(v));
    std::vector<Rat> costs;
    for (int e = 0; e < params.nodes; ++e) {
        costs.push_back(gen_detail::nonnegative_rational(rng, params.cost_num_max,
                                                         params.cost_den_max));
    }

    std::vector<RingCommodity> commodities;
    for (int i = 0; i < params.commodities; ++i) {
        const int s = static_cast<int>(gen_detail::below(rng, static_cast<std::uint64_t>(params.nodes)));
        int t = static_cast<int>(gen_detail::below(rng, static_cast<std::uint64_t>(params.nodes - 1)));
        if (t >= s) ++t;
        commodities.push_back(RingCommodity{
            s, t, gen_detail::positive_rational(rng, params.demand_num_max, params.demand_den_max)});
    }

    RingFractionalSolution fractional;
    for (int i = 0; i < params.commodities; ++i) {
        if (gen_detail::below(rng, 100) < static_cast<std::uint64_t>(params.unsplit_percent)) {
            fractional.split.push_back(Rat(gen_detail::below(rng, 2) == 0 ? 0 : 1));
        } else {
            const auto den = 2 + gen_detail::below(rng, 4);
            const auto num = 1 + gen_detail::below(rng, den - 1);
            Rat q(static_cast<long>(num), static_cast<long>(den));
            q.canonicalize();
            fractional.split.push_back(std::move(q));
        }
    }

    std::vector<std::optional<Rat>> caps(static_cast<std::size_t>(params.nodes), std::nullopt);
    if (params.with_capacities) {
        const RingInstance bare(node_ids, costs, caps, commodities);
        const std::vector<Rat> load = ring_load(bare, fractional);
        for (int e = 0; e < params.nodes; ++e) {
            const Rat slack(static_cast<long>(gen_detail::below(
                                rng, static_cast<std::uint64_t>(params.capacity_slack_max) + 1)),
                            1);
            caps[static_cast<std::size_t>(e)] = load[static_cast<std::size_t>(e)] + slack;
        }
    }

    return RingInstanceDoc{RingInstance(std::move(node_ids), std::move(costs), std::move(caps),
                                        std::move(commodities)),
                           std::move(fractional)};
}

}  // namespace unsplit
