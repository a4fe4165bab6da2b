#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "unsplit/errors.hpp"
#include "unsplit/rational.hpp"

namespace unsplit {

struct ArcSpec {
    std::string id;
    std::string tail;
    std::string head;
    Rat cost;
};

struct TerminalSpec {
    std::string node;
    Rat demand;
};

struct Terminal {
    int node;
    Rat demand;
};

// Single-source network with per-terminal demands and arc costs.
// Nodes and arcs carry string ids for serialization; all algorithms work on
// dense indices. Immutable after construction. Demands must be nonnegative;
// negative costs are representable (they are legal for the lambda = 1
// transformation) and flagged via has_negative_cost().
class WeightedSsufNetwork {
public:
    struct Arc {
        std::string id;
        int tail;
        int head;
        Rat cost;
    };

    WeightedSsufNetwork(const std::vector<std::string>& node_ids,
                        const std::vector<ArcSpec>& arc_specs,
                        const std::string& source_id,
                        const std::vector<TerminalSpec>& terminal_specs) {
        node_ids_ = node_ids;
        for (int i = 0; i < static_cast<int>(node_ids_.size()); ++i) {
            if (!node_index_.emplace(node_ids_[i], i).second) {
                throw InvalidInstanceError("duplicate node id '" + node_ids_[i] + "'");
            }
        }
        arcs_.reserve(arc_specs.size());
        out_arcs_.assign(node_ids_.size(), {});
        in_arcs_.assign(node_ids_.size(), {});
        for (const ArcSpec& spec : arc_specs) {
            Arc arc;
            arc.id = spec.id;
            arc.tail = node_index(spec.tail);
            arc.head = node_index(spec.head);
            arc.cost = spec.cost;
            const int idx = static_cast<int>(arcs_.size());
            if (!arc_index_.emplace(arc.id, idx).second) {
                throw InvalidInstanceError("duplicate arc id '" + arc.id + "'");
            }
            out_arcs_[arc.tail].push_back(idx);
            in_arcs_[arc.head].push_back(idx);
            arcs_.push_back(std::move(arc));
        }
        source_ = node_index(source_id);
        for (const TerminalSpec& spec : terminal_specs) {
            if (spec.demand < 0) {
                throw InvalidInstanceError("negative demand at terminal '" + spec.node + "'");
            }
            terminals_.push_back(Terminal{node_index(spec.node), spec.demand});
        }
    }

    int node_count() const { return static_cast<int>(node_ids_.size()); }
    int arc_count() const { return static_cast<int>(arcs_.size()); }
    int terminal_count() const { return static_cast<int>(terminals_.size()); }

    const std::string& node_id(int v) const { return node_ids_[static_cast<std::size_t>(v)]; }
    const std::vector<std::string>& node_ids() const { return node_ids_; }

    int node_index(const std::string& id) const {
        auto it = node_index_.find(id);
        if (it == node_index_.end()) throw InvalidInstanceError("unknown node id '" + id + "'");
        return it->second;
    }

    const Arc& arc(int a) const { return arcs_[static_cast<std::size_t>(a)]; }
    const std::vector<Arc>& arcs() const { return arcs_; }

    std::optional<int> find_arc(const std::string& id) const {
        auto it = arc_index_.find(id);
        if (it == arc_index_.end()) return std::nullopt;
        return it->second;
    }

    int source() const { return source_; }
    const std::vector<Terminal>& terminals() const { return terminals_; }

    const std::vector<int>& out_arcs(int v) const { return out_arcs_[static_cast<std::size_t>(v)]; }
    const std::vector<int>& in_arcs(int v) const { return in_arcs_[static_cast<std::size_t>(v)]; }

    Rat total_demand() const {
        Rat sum = 0;
        for (const Terminal& t : terminals_) sum += t.demand;
        return sum;
    }

    // Maximum demand over terminals; 0 for an empty terminal set.
    Rat d_max() const {
        Rat m = 0;
        for (const Terminal& t : terminals_) m = std::max(m, t.demand);
        return m;
    }

    // Net supply of node v: total demand at the source minus demand of
    // terminals located at v. Handles terminals co-located with the source
    // and several terminals sharing a node.
    Rat net_supply(int v) const {
        Rat b = 0;
        if (v == source_) b += total_demand();
        for (const Terminal& t : terminals_) {
            if (t.node == v) b -= t.demand;
        }
        return b;
    }

    bool has_negative_cost() const {
        for (const Arc& a : arcs_) {
            if (a.cost < 0) return true;
        }
        return false;
    }

    // Topological order of the nodes, or nullopt when the arc set has a
    // directed cycle.
    std::optional<std::vector<int>> topological_order() const {
        std::vector<int> indegree(node_ids_.size(), 0);
        for (const Arc& a : arcs_) ++indegree[static_cast<std::size_t>(a.head)];
        std::vector<int> order;
        order.reserve(node_ids_.size());
        std::vector<int> stack;
        for (int v = node_count() - 1; v >= 0; --v) {
            if (indegree[static_cast<std::size_t>(v)] == 0) stack.push_back(v);
        }
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            order.push_back(v);
            for (int a : out_arcs_[static_cast<std::size_t>(v)]) {
                const int w = arcs_[static_cast<std::size_t>(a)].head;
                if (--indegree[static_cast<std::size_t>(w)] == 0) stack.push_back(w);
            }
        }
        if (order.size() != node_ids_.size()) return std::nullopt;
        return order;
    }

    bool is_acyclic() const { return topological_order().has_value(); }

private:
    std::vector<std::string> node_ids_;
    std::map<std::string, int> node_index_;
    std::vector<Arc> arcs_;
    std::map<std::string, int> arc_index_;
    int source_ = 0;
    std::vector<Terminal> terminals_;
    std::vector<std::vector<int>> out_arcs_, in_arcs_;
};

// Point of the flow polytope, indexed by arc. Plain value type; membership
// is checked by check_membership, not enforced here.
struct FractionalFlow {
    std::vector<Rat> values;

    FractionalFlow() = default;
    explicit FractionalFlow(std::vector<Rat> v) : values(std::move(v)) {}
    static FractionalFlow zeros(int arc_count) {
        return FractionalFlow(std::vector<Rat>(static_cast<std::size_t>(arc_count), Rat(0)));
    }

    const Rat& operator[](int a) const { return values[static_cast<std::size_t>(a)]; }
    Rat& operator[](int a) { return values[static_cast<std::size_t>(a)]; }
    std::size_t size() const { return values.size(); }
};

// One source-to-sink path per terminal, as arc index sequences. The path of
// a terminal co-located with the source is empty.
struct UnsplittablePathFlow {
    std::vector<std::vector<int>> paths;  // indexed by terminal
};

struct MembershipViolation {
    enum class Kind { Negativity, Conservation };
    Kind kind;
    int index;   // arc for negativity, node for conservation
    Rat amount;  // arc value, or out-minus-in surplus relative to the required supply
};

struct MembershipReport {
    bool ok = true;
    std::vector<MembershipViolation> violations;
};

inline void require_flow_shape(const WeightedSsufNetwork& net, const FractionalFlow& x) {
    if (static_cast<int>(x.size()) != net.arc_count()) {
        throw IndexMismatchError("flow vector has " + std::to_string(x.size()) +
                                 " entries, network has " + std::to_string(net.arc_count()) +
                                 " arcs");
    }
}

// Exact test of x in Q: nonnegativity plus flow conservation with the
// aggregate demands as right-hand sides.
inline MembershipReport check_membership(const WeightedSsufNetwork& net,
                                         const FractionalFlow& x) {
    require_flow_shape(net, x);
    MembershipReport report;
    for (int a = 0; a < net.arc_count(); ++a) {
        if (x[a] < 0) {
            report.ok = false;
            report.violations.push_back(
                MembershipViolation{MembershipViolation::Kind::Negativity, a, x[a]});
        }
    }
    for (int v = 0; v < net.node_count(); ++v) {
        Rat balance = 0;
        for (int a : net.out_arcs(v)) balance += x[a];
        for (int a : net.in_arcs(v)) balance -= x[a];
        const Rat surplus = balance - net.net_supply(v);
        if (surplus != 0) {
            report.ok = false;
            report.violations.push_back(
                MembershipViolation{MembershipViolation::Kind::Conservation, v, surplus});
        }
    }
    return report;
}

inline void require_membership(const WeightedSsufNetwork& net, const FractionalFlow& x,
                               const std::string& context) {
    const MembershipReport report = check_membership(net, x);
    if (!report.ok) {
        throw InvalidFlowError(context + ": vector is not a fractional flow (" +
                               std::to_string(report.violations.size()) +
                               " violated constraints)");
    }
}

inline Rat cost_of(const WeightedSsufNetwork& net, const FractionalFlow& x) {
    require_flow_shape(net, x);
    Rat total = 0;
    for (int a = 0; a < net.arc_count(); ++a) total += net.arc(a).cost * x[a];
    return total;
}

// Validates that `arcs` forms a simple path from the source to the
// terminal's node. Empty paths are valid exactly when the terminal sits on
// the source.
inline void validate_terminal_path(const WeightedSsufNetwork& net, int terminal,
                                   const std::vector<int>& arcs) {
    const Terminal& t = net.terminals()[static_cast<std::size_t>(terminal)];
    int at = net.source();
    std::vector<bool> seen(static_cast<std::size_t>(net.node_count()), false);
    seen[static_cast<std::size_t>(at)] = true;
    for (int a : arcs) {
        if (a < 0 || a >= net.arc_count()) {
            throw InvalidPathError("terminal " + std::to_string(terminal) +
                                   ": arc index out of range");
        }
        if (net.arc(a).tail != at) {
            throw InvalidPathError("terminal " + std::to_string(terminal) +
                                   ": arcs do not form a contiguous path");
        }
        at = net.arc(a).head;
        if (seen[static_cast<std::size_t>(at)]) {
            throw InvalidPathError("terminal " + std::to_string(terminal) +
                                   ": path revisits a node");
        }
        seen[static_cast<std::size_t>(at)] = true;
    }
    if (at != t.node) {
        throw InvalidPathError("terminal " + std::to_string(terminal) +
                               ": path ends at '" + net.node_id(at) + "', expected '" +
                               net.node_id(t.node) + "'");
    }
}

// Load vector f of an unsplittable flow: per arc the sum of demands whose
// path uses the arc.
inline FractionalFlow induced_load(const WeightedSsufNetwork& net,
                                   const UnsplittablePathFlow& flow) {
    if (static_cast<int>(flow.paths.size()) != net.terminal_count()) {
        throw IndexMismatchError("path family size does not match terminal count");
    }
    FractionalFlow load = FractionalFlow::zeros(net.arc_count());
    for (int t = 0; t < net.terminal_count(); ++t) {
        validate_terminal_path(net, t, flow.paths[static_cast<std::size_t>(t)]);
        for (int a : flow.paths[static_cast<std::size_t>(t)]) {
            load[a] += net.terminals()[static_cast<std::size_t>(t)].demand;
        }
    }
    return load;
}

inline Rat cost_of(const WeightedSsufNetwork& net, const UnsplittablePathFlow& flow) {
    return cost_of(net, induced_load(net, flow));
}

namespace detail {

// Finds a directed cycle using only arcs with x(a) > 0, exploring arcs in
// index order. Returns the cycle's arc indices, or empty if none.
inline std::vector<int> find_support_cycle(const WeightedSsufNetwork& net,
                                           const FractionalFlow& x) {
    enum class Color { White, Gray, Black };
    std::vector<Color> color(static_cast<std::size_t>(net.node_count()), Color::White);
    std::vector<int> parent_arc(static_cast<std::size_t>(net.node_count()), -1);

    for (int root = 0; root < net.node_count(); ++root) {
        if (color[static_cast<std::size_t>(root)] != Color::White) continue;
        // Iterative DFS; frame second member is the position in out_arcs.
        std::vector<std::pair<int, std::size_t>> stack;
        stack.emplace_back(root, 0);
        color[static_cast<std::size_t>(root)] = Color::Gray;
        while (!stack.empty()) {
            auto& [v, pos] = stack.back();
            const auto& outs = net.out_arcs(v);
            bool descended = false;
            while (pos < outs.size()) {
                const int a = outs[pos++];
                if (x[a] <= 0) continue;
                const int w = net.arc(a).head;
                if (color[static_cast<std::size_t>(w)] == Color::Gray) {
                    // Back arc closes a cycle. Walk parent arcs from v to w.
                    std::vector<int> cycle{a};
                    int cur = v;
                    while (cur != w) {
                        const int pa = parent_arc[static_cast<std::size_t>(cur)];
                        cycle.push_back(pa);
                        cur = net.arc(pa).tail;
                    }
                    std::reverse(cycle.begin(), cycle.end());
                    return cycle;
                }
                if (color[static_cast<std::size_t>(w)] == Color::White) {
                    color[static_cast<std::size_t>(w)] = Color::Gray;
                    parent_arc[static_cast<std::size_t>(w)] = a;
                    stack.emplace_back(w, 0);
                    descended = true;
                    break;
                }
            }
            if (!descended && stack.back().second >= net.out_arcs(stack.back().first).size()) {
                color[static_cast<std::size_t>(stack.back().first)] = Color::Black;
                stack.pop_back();
            }
        }
    }
    return {};
}

}  // namespace detail

inline bool support_is_acyclic(const WeightedSsufNetwork& net, const FractionalFlow& x) {
    require_flow_shape(net, x);
    return detail::find_support_cycle(net, x).empty();
}

// Repeatedly subtracts the bottleneck value along directed cycles in the
// support until the support is acyclic. The result is a flow x' <= x with
// the same conservation balances.
inline FractionalFlow eliminate_cycle_flow(const WeightedSsufNetwork& net,
                                           const FractionalFlow& x) {
    require_membership(net, x, "eliminate_cycle_flow");
    FractionalFlow result = x;
    while (true) {
        const std::vector<int> cycle = detail::find_support_cycle(net, result);
        if (cycle.empty()) break;
        Rat bottleneck = result[cycle[0]];
        for (int a : cycle) bottleneck = std::min(bottleneck, result[a]);
        for (int a : cycle) result[a] -= bottleneck;
    }
    return result;
}

// Network restricted to the arcs carrying positive flow, with index maps in
// both directions for re-embedding results.
struct SupportSubnetwork {
    WeightedSsufNetwork network;
    std::vector<int> arc_to_original;  // sub arc index -> original arc index
    std::vector<int> original_to_sub;  // original arc index -> sub index or -1
};

inline SupportSubnetwork support_subnetwork(const WeightedSsufNetwork& net,
                                            const FractionalFlow& x) {
    require_flow_shape(net, x);
    std::vector<ArcSpec> kept;
    std::vector<int> arc_to_original;
    std::vector<int> original_to_sub(static_cast<std::size_t>(net.arc_count()), -1);
    for (int a = 0; a < net.arc_count(); ++a) {
        if (x[a] > 0) {
            const auto& arc = net.arc(a);
            original_to_sub[static_cast<std::size_t>(a)] = static_cast<int>(kept.size());
            kept.push_back(ArcSpec{arc.id, net.node_id(arc.tail), net.node_id(arc.head), arc.cost});
            arc_to_original.push_back(a);
        }
    }
    std::vector<TerminalSpec> terminals;
    terminals.reserve(net.terminals().size());
    for (const Terminal& t : net.terminals()) {
        terminals.push_back(TerminalSpec{net.node_id(t.node), t.demand});
    }
    WeightedSsufNetwork sub(net.node_ids(), kept, net.node_id(net.source()), terminals);
    return SupportSubnetwork{std::move(sub), std::move(arc_to_original),
                             std::move(original_to_sub)};
}

// Coordinatewise difference b - a of equally indexed vectors.
inline std::vector<Rat> vec_sub(const std::vector<Rat>& b, const std::vector<Rat>& a) {
    if (a.size() != b.size()) throw IndexMismatchError("vector size mismatch in subtraction");
    std::vector<Rat> out(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) out[i] = b[i] - a[i];
    return out;
}

}  // namespace unsplit
