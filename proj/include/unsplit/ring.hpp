#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "unsplit/errors.hpp"
#include "unsplit/rational.hpp"

namespace unsplit {

struct RingCommodity {
    int source;  // node position on the cycle
    int sink;
    Rat demand;
};

// Undirected cycle v_0 .. v_{n-1}; edge i joins v_i and v_{i+1 mod n}.
// Each commodity routes its demand along one of the two source-sink paths.
// Costs are nonnegative; capacities are optional and only consulted by the
// uniform-capacity reduction.
class RingInstance {
public:
    RingInstance(std::vector<std::string> node_ids, std::vector<Rat> edge_costs,
                 std::vector<std::optional<Rat>> edge_capacities,
                 std::vector<RingCommodity> commodities)
        : node_ids_(std::move(node_ids)),
          edge_costs_(std::move(edge_costs)),
          edge_capacities_(std::move(edge_capacities)),
          commodities_(std::move(commodities)) {
        const int n = node_count();
        if (n < 2) throw InvalidInstanceError("a ring needs at least two nodes");
        if (static_cast<int>(edge_costs_.size()) != n ||
            static_cast<int>(edge_capacities_.size()) != n) {
            throw InvalidInstanceError("edge attribute count must equal node count");
        }
        for (const Rat& c : edge_costs_) {
            if (c < 0) throw InvalidInstanceError("negative ring edge cost");
        }
        for (const auto& cap : edge_capacities_) {
            if (cap && *cap < 0) throw InvalidInstanceError("negative ring edge capacity");
        }
        for (const RingCommodity& c : commodities_) {
            if (c.source < 0 || c.source >= n || c.sink < 0 || c.sink >= n) {
                throw InvalidInstanceError("commodity endpoint out of range");
            }
            if (c.source == c.sink) {
                throw InvalidInstanceError("commodity source and sink coincide");
            }
            if (c.demand < 0) throw InvalidInstanceError("negative commodity demand");
        }
    }

    int node_count() const { return static_cast<int>(node_ids_.size()); }
    int edge_count() const { return node_count(); }
    int commodity_count() const { return static_cast<int>(commodities_.size()); }

    const std::string& node_id(int v) const { return node_ids_[static_cast<std::size_t>(v)]; }
    const std::vector<std::string>& node_ids() const { return node_ids_; }
    const Rat& edge_cost(int e) const { return edge_costs_[static_cast<std::size_t>(e)]; }
    const std::optional<Rat>& edge_capacity(int e) const {
        return edge_capacities_[static_cast<std::size_t>(e)];
    }
    const RingCommodity& commodity(int i) const {
        return commodities_[static_cast<std::size_t>(i)];
    }
    const std::vector<RingCommodity>& commodities() const { return commodities_; }

    bool has_all_capacities() const {
        return std::all_of(edge_capacities_.begin(), edge_capacities_.end(),
                           [](const std::optional<Rat>& c) { return c.has_value(); });
    }

    Rat d_max() const {
        Rat m = 0;
        for (const RingCommodity& c : commodities_) m = std::max(m, c.demand);
        return m;
    }

    Rat total_demand() const {
        Rat sum = 0;
        for (const RingCommodity& c : commodities_) sum += c.demand;
        return sum;
    }

    // Clockwise path from the commodity's source to its sink: edge indices
    // pos(source), pos(source)+1, ..., pos(sink)-1 (mod n). This is P^1;
    // the complementary edge set is P^2.
    std::vector<int> clockwise_path(int i) const {
        const RingCommodity& c = commodity(i);
        std::vector<int> edges;
        const int n = node_count();
        for (int e = c.source; e != c.sink; e = (e + 1) % n) edges.push_back(e);
        return edges;
    }

    std::vector<int> counterclockwise_path(int i) const {
        const RingCommodity& c = commodity(i);
        std::vector<int> edges;
        const int n = node_count();
        for (int e = c.sink; e != c.source; e = (e + 1) % n) edges.push_back(e);
        return edges;
    }

    std::vector<int> path_of_choice(int i, int choice) const {
        if (choice == 1) return clockwise_path(i);
        if (choice == 2) return counterclockwise_path(i);
        throw InvalidPathError("ring path choice must be 1 or 2");
    }

    // Membership mask: uses_edge[e] true iff e lies on the clockwise path.
    std::vector<bool> clockwise_mask(int i) const {
        std::vector<bool> mask(static_cast<std::size_t>(edge_count()), false);
        for (int e : clockwise_path(i)) mask[static_cast<std::size_t>(e)] = true;
        return mask;
    }

private:
    std::vector<std::string> node_ids_;
    std::vector<Rat> edge_costs_;
    std::vector<std::optional<Rat>> edge_capacities_;
    std::vector<RingCommodity> commodities_;
};

// Fractional routing: split[i] in [0,1] is the fraction of d_i sent along
// the clockwise path P_i^1.
struct RingFractionalSolution {
    std::vector<Rat> split;
};

// Unsplittable routing: choice[i] is 1 (clockwise path) or 2.
struct RingUnsplittableSolution {
    std::vector<int> choice;
};

inline void require_ring_splits(const RingInstance& inst, const RingFractionalSolution& sol) {
    if (static_cast<int>(sol.split.size()) != inst.commodity_count()) {
        throw IndexMismatchError("split count does not match commodity count");
    }
    for (std::size_t i = 0; i < sol.split.size(); ++i) {
        if (sol.split[i] < 0 || sol.split[i] > 1) {
            throw InvalidFlowError("split " + std::to_string(i) + " outside [0,1]");
        }
    }
}

inline void require_ring_choices(const RingInstance& inst, const RingUnsplittableSolution& sol) {
    if (static_cast<int>(sol.choice.size()) != inst.commodity_count()) {
        throw IndexMismatchError("choice count does not match commodity count");
    }
    for (int c : sol.choice) {
        if (c != 1 && c != 2) throw InvalidPathError("ring path choice must be 1 or 2");
    }
}

inline std::vector<Rat> ring_load(const RingInstance& inst, const RingFractionalSolution& sol) {
    require_ring_splits(inst, sol);
    std::vector<Rat> load(static_cast<std::size_t>(inst.edge_count()), Rat(0));
    for (int i = 0; i < inst.commodity_count(); ++i) {
        const Rat on_cw = sol.split[static_cast<std::size_t>(i)] * inst.commodity(i).demand;
        const Rat on_ccw = inst.commodity(i).demand - on_cw;
        for (int e : inst.clockwise_path(i)) load[static_cast<std::size_t>(e)] += on_cw;
        for (int e : inst.counterclockwise_path(i)) load[static_cast<std::size_t>(e)] += on_ccw;
    }
    return load;
}

inline std::vector<Rat> ring_load(const RingInstance& inst, const RingUnsplittableSolution& sol) {
    require_ring_choices(inst, sol);
    std::vector<Rat> load(static_cast<std::size_t>(inst.edge_count()), Rat(0));
    for (int i = 0; i < inst.commodity_count(); ++i) {
        for (int e : inst.path_of_choice(i, sol.choice[static_cast<std::size_t>(i)])) {
            load[static_cast<std::size_t>(e)] += inst.commodity(i).demand;
        }
    }
    return load;
}

inline Rat ring_cost(const RingInstance& inst, const std::vector<Rat>& load) {
    if (static_cast<int>(load.size()) != inst.edge_count()) {
        throw IndexMismatchError("load vector size does not match edge count");
    }
    Rat total = 0;
    for (int e = 0; e < inst.edge_count(); ++e) {
        total += inst.edge_cost(e) * load[static_cast<std::size_t>(e)];
    }
    return total;
}

// Per-edge capacity excess max(0, load - u(e)). Requires capacities on all edges.
inline std::vector<Rat> ring_violation(const RingInstance& inst, const std::vector<Rat>& load) {
    if (!inst.has_all_capacities()) {
        throw InvalidInstanceError("violation accounting needs capacities on every edge");
    }
    std::vector<Rat> viol(static_cast<std::size_t>(inst.edge_count()), Rat(0));
    for (int e = 0; e < inst.edge_count(); ++e) {
        const Rat excess = load[static_cast<std::size_t>(e)] - *inst.edge_capacity(e);
        if (excess > 0) viol[static_cast<std::size_t>(e)] = excess;
    }
    return viol;
}

}  // namespace unsplit
