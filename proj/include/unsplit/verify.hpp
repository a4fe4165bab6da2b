#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "unsplit/box.hpp"
#include "unsplit/errors.hpp"
#include "unsplit/io.hpp"
#include "unsplit/meta.hpp"
#include "unsplit/rational.hpp"
#include "unsplit/ring.hpp"
#include "unsplit/ring_pipeline.hpp"
#include "unsplit/ssuf.hpp"

namespace unsplit {

struct VerificationCheck {
    std::string name;
    std::string detail;  // empty when nothing to explain
    bool pass;
};

struct VerificationReport {
    std::vector<VerificationCheck> checks;

    bool verdict() const {
        for (const VerificationCheck& c : checks) {
            if (!c.pass) return false;
        }
        return true;
    }
};

namespace verify_detail {

inline void push(VerificationReport& report, const std::string& name, bool pass,
                 const std::string& detail = "") {
    report.checks.push_back(VerificationCheck{name, detail, pass});
}

inline void push_eq(VerificationReport& report, const std::string& name, const Rat& claimed,
                    const Rat& computed) {
    push(report, name, claimed == computed,
         "claimed " + rat_to_string(claimed) + ", recomputed " + rat_to_string(computed));
}

inline Rat lambda_field(const ojson& j) {
    const Rat lambda = io_detail::rat_field(j, "lambda");
    if (lambda <= 0 || lambda > 1) {
        throw ParseError("lambda outside (0,1]: " + rat_to_string(lambda));
    }
    return lambda;
}

}  // namespace verify_detail

// Re-derives every claim of a flow-rounding report from the primary data
// (instance, x, y*, paths). Certificate numerics are treated as claims and
// compared against recomputation; the theorem inequalities are checked
// exactly. Needs no solver or rounding oracle.
inline VerificationReport verify_ssuf_run(const ojson& report_json) {
    using io_detail::expect;
    VerificationReport report;

    const SsufInstanceDoc doc = parse_ssuf_instance(expect(report_json, "instance"));
    const WeightedSsufNetwork& net = doc.network;
    if (!doc.fractional) throw ParseError("report instance lacks the fractional flow x");
    const FractionalFlow& x = *doc.fractional;
    const Rat lambda = verify_detail::lambda_field(report_json);
    const ojson& cert = expect(report_json, "certificate");
    if (verify_detail::lambda_field(cert) != lambda) {
        throw ParseError("certificate lambda disagrees with report lambda");
    }

    const FractionalFlow y_star = flow_from_json(net, expect(report_json, "y_star"));
    const BoxErrorBody body = body_from_json_by_arc(net, expect(cert, "body"));
    if (lambda < 1 && net.has_negative_cost()) {
        verify_detail::push(report, "nonnegative_costs_for_lambda_below_one", false);
    }

    // Paths -> z, the primary witness.
    const ojson& paths_json = io_detail::array_field(report_json, "paths");
    if (static_cast<int>(paths_json.size()) != net.terminal_count()) {
        throw IndexMismatchError("path count does not match terminal count");
    }
    UnsplittablePathFlow flow;
    for (const auto& p : paths_json) {
        if (!p.is_array()) throw ParseError("each path must be an array of arc ids");
        std::vector<int> arcs;
        for (const auto& id : p) {
            if (!id.is_string()) throw ParseError("arc ids must be strings");
            const std::optional<int> a = net.find_arc(id.get<std::string>());
            if (!a) throw IndexMismatchError("path references unknown arc '" +
                                             id.get<std::string>() + "'");
            arcs.push_back(*a);
        }
        flow.paths.push_back(std::move(arcs));
    }

    bool paths_valid = true;
    std::string path_problem;
    FractionalFlow z = FractionalFlow::zeros(net.arc_count());
    try {
        z = induced_load(net, flow);
    } catch (const InvalidPathError& err) {
        paths_valid = false;
        path_problem = err.what();
    }
    verify_detail::push(report, "paths_are_source_sink_paths", paths_valid, path_problem);
    if (!paths_valid) return report;

    verify_detail::push(report, "x_in_polytope", check_membership(net, x).ok);
    verify_detail::push(report, "z_in_polytope", check_membership(net, z).ok);
    verify_detail::push(report, "y_star_in_polytope", check_membership(net, y_star).ok);
    verify_detail::push(report, "y_star_in_restricted_set",
                        body_contains(scale_box(body, lambda), vec_sub(x.values, y_star.values)));

    const Rat input_cost = cost_of(net, x);
    const Rat restricted_cost = cost_of(net, y_star);
    const Rat output_cost = cost_of(net, z);
    verify_detail::push_eq(report, "input_cost_claim", io_detail::rat_field(cert, "input_cost"),
                           input_cost);
    verify_detail::push_eq(report, "restricted_cost_claim",
                           io_detail::rat_field(cert, "restricted_cost"), restricted_cost);
    verify_detail::push_eq(report, "output_cost_claim", io_detail::rat_field(cert, "output_cost"),
                           output_cost);
    verify_detail::push(report, "restricted_cost_le_input_cost", restricted_cost <= input_cost);
    verify_detail::push(report, "output_cost_le_ceiling", output_cost * lambda <= input_cost,
                        "c^T z = " + rat_to_string(output_cost) + ", ceiling = (1/" +
                            rat_to_string(lambda) + ") * " + rat_to_string(input_cost));

    const std::vector<Rat> deviation = vec_sub(z.values, x.values);
    const FractionalFlow claimed_dev = flow_from_json(net, expect(cert, "deviation"));
    verify_detail::push(report, "deviation_claim", claimed_dev.values == deviation);
    const BoxErrorBody body_diff = minkowski_diff_body(body, lambda);
    const BoxErrorBody claimed_diff = body_from_json_by_arc(net, expect(cert, "body_diff"));
    verify_detail::push(report, "body_diff_claim",
                        claimed_diff.lower() == body_diff.lower() &&
                            claimed_diff.upper() == body_diff.upper());
    verify_detail::push(report, "deviation_in_diff_body", body_contains(body_diff, deviation));

    bool face = true;
    for (int a = 0; a < net.arc_count(); ++a) {
        if (y_star[a] == 0 && z[a] != 0) face = false;
    }
    verify_detail::push(report, "face_preservation", face);
    if (!face) return report;

    // Proof points: recompute epsilon, y_bar, y_hat and re-run the checks.
    const std::optional<Rat> epsilon = compute_epsilon(net, y_star, z);
    const std::string claimed_eps = io_detail::string_field(cert, "epsilon");
    if (epsilon) {
        verify_detail::push(report, "epsilon_claim",
                            claimed_eps != "unbounded" && parse_rational(claimed_eps) == *epsilon,
                            "claimed " + claimed_eps + ", recomputed " + rat_to_string(*epsilon));
    } else {
        verify_detail::push(report, "epsilon_claim", claimed_eps == "unbounded",
                            "claimed " + claimed_eps + ", recomputed unbounded");
    }
    const ProofPoints proof = verify_proof_points(net, x, y_star, z, body, lambda);
    const FractionalFlow claimed_ybar = flow_from_json(net, expect(cert, "y_bar"));
    const FractionalFlow claimed_yhat = flow_from_json(net, expect(cert, "y_hat"));
    verify_detail::push(report, "y_bar_claim", claimed_ybar.values == proof.y_bar.values);
    verify_detail::push(report, "y_hat_claim", claimed_yhat.values == proof.y_hat.values);
    for (const CheckResult& c : proof.checks) {
        verify_detail::push(report, "proof_" + c.name, c.pass);
    }
    return report;
}

// Ring analogue: recomputes loads and costs from the choices, re-checks the
// cost ceiling and the per-edge bound load_e <= x_e + (1+lambda)*alpha*d_max,
// and re-verifies the canonical form: contraction consistency, the
// opposing-edges identity for both the fractional reduction and the rounded
// solution, the restricted set, and the two-sided canonical deviation.
inline VerificationReport verify_ring_run(const ojson& report_json) {
    using io_detail::expect;
    VerificationReport report;

    const RingInstanceDoc doc = parse_ring_instance(expect(report_json, "instance"));
    const RingInstance& inst = doc.instance;
    if (!doc.fractional) throw ParseError("report instance lacks the fractional splits");
    const RingFractionalSolution& x = *doc.fractional;
    const Rat lambda = verify_detail::lambda_field(report_json);
    const Rat alpha = io_detail::rat_field(report_json, "alpha");
    if (alpha < 0) throw ParseError("alpha must be nonnegative");
    const ojson& cert = expect(report_json, "certificate");

    const Rat d_max = inst.d_max();
    verify_detail::push_eq(report, "d_max_claim", io_detail::rat_field(report_json, "d_max"),
                           d_max);
    const Rat radius = alpha * d_max;

    const ojson& choices_json = io_detail::array_field(report_json, "choices");
    RingUnsplittableSolution solution;
    for (const auto& c : choices_json) {
        if (!c.is_number_integer()) throw ParseError("choices must be integers");
        solution.choice.push_back(c.get<int>());
    }
    require_ring_choices(inst, solution);

    const std::vector<Rat> x_load = ring_load(inst, x);
    const std::vector<Rat> load = ring_load(inst, solution);
    verify_detail::push(report, "load_claim",
                        rat_vector_from_json(expect(report_json, "load")) == load);

    const Rat input_cost = ring_cost(inst, x_load);
    const Rat output_cost = ring_cost(inst, load);
    verify_detail::push_eq(report, "input_cost_claim", io_detail::rat_field(cert, "input_cost"),
                           input_cost);
    verify_detail::push_eq(report, "output_cost_claim", io_detail::rat_field(cert, "output_cost"),
                           output_cost);
    verify_detail::push(report, "output_cost_le_ceiling", output_cost * lambda <= input_cost);

    const Rat allowance = (Rat(1) + lambda) * radius;
    bool upper_ok = true;
    for (std::size_t e = 0; e < load.size(); ++e) {
        if (load[e] > x_load[e] + allowance) upper_ok = false;
    }
    verify_detail::push(report, "load_upper_bound", upper_ok,
                        "allowance (1+lambda)*alpha*d_max = " + rat_to_string(allowance));
    verify_detail::push(report, "deviation_claim",
                        rat_vector_from_json(expect(cert, "deviation")) ==
                            vec_sub(load, x_load));

    if (!report_json.contains("canonical")) {
        // Everything was fixed during preprocessing. Fixing and rerouting
        // parallel pairs never raises a load, so the output load must stay
        // below the input load on every edge.
        bool no_increase = true;
        for (std::size_t e = 0; e < load.size(); ++e) {
            if (load[e] > x_load[e]) no_increase = false;
        }
        verify_detail::push(report, "all_fixed_no_load_increase", no_increase);
        return report;
    }

    const ojson& canon = report_json.at("canonical");
    std::vector<std::string> canon_nodes;
    for (const auto& v : io_detail::array_field(canon, "nodes")) {
        canon_nodes.push_back(v.get<std::string>());
    }
    const std::vector<Rat> canon_costs = rat_vector_from_json(expect(canon, "edge_costs"));
    std::vector<RingCommodity> canon_commodities;
    for (const auto& c : io_detail::array_field(canon, "commodities")) {
        canon_commodities.push_back(RingCommodity{io_detail::int_field(c, "source"),
                                                  io_detail::int_field(c, "sink"),
                                                  io_detail::rat_field(c, "demand")});
    }
    const RingInstance reduced(
        canon_nodes, canon_costs,
        std::vector<std::optional<Rat>>(canon_costs.size(), std::nullopt), canon_commodities);
    const int k_prime = reduced.commodity_count();
    if (reduced.edge_count() != 2 * k_prime) {
        throw IndexMismatchError("canonical instance is not a 2k'-gon");
    }
    for (int j = 0; j < k_prime; ++j) {
        if (reduced.commodity(j).source != j || reduced.commodity(j).sink != j + k_prime) {
            throw IndexMismatchError("canonical commodities are not in s_1..s_k,t_1..t_k order");
        }
    }

    std::vector<int> commodity_map, edge_map;
    std::vector<bool> endpoint_swapped;
    for (const auto& v : io_detail::array_field(canon, "commodity_map")) {
        commodity_map.push_back(v.get<int>());
    }
    for (const auto& v : io_detail::array_field(canon, "edge_map")) edge_map.push_back(v.get<int>());
    for (const auto& v : io_detail::array_field(canon, "endpoint_swapped")) {
        endpoint_swapped.push_back(v.get<bool>());
    }
    if (static_cast<int>(commodity_map.size()) != k_prime ||
        static_cast<int>(edge_map.size()) != inst.edge_count() ||
        static_cast<int>(endpoint_swapped.size()) != k_prime) {
        throw IndexMismatchError("canonical mapping arrays have wrong sizes");
    }

    // Contraction consistency: costs and demands must aggregate correctly.
    {
        std::vector<Rat> sum_costs(static_cast<std::size_t>(reduced.edge_count()), Rat(0));
        bool edges_ok = true;
        for (int e = 0; e < inst.edge_count(); ++e) {
            const int ce = edge_map[static_cast<std::size_t>(e)];
            if (ce < 0 || ce >= reduced.edge_count()) {
                edges_ok = false;
                break;
            }
            sum_costs[static_cast<std::size_t>(ce)] += inst.edge_cost(e);
        }
        for (int ce = 0; edges_ok && ce < reduced.edge_count(); ++ce) {
            if (sum_costs[static_cast<std::size_t>(ce)] != reduced.edge_cost(ce)) edges_ok = false;
        }
        verify_detail::push(report, "contraction_cost_consistency", edges_ok);
        bool demand_ok = true;
        for (int j = 0; j < k_prime; ++j) {
            const int orig = commodity_map[static_cast<std::size_t>(j)];
            if (orig < 0 || orig >= inst.commodity_count() ||
                reduced.commodity(j).demand != inst.commodity(orig).demand) {
                demand_ok = false;
            }
        }
        verify_detail::push(report, "contraction_demand_consistency", demand_ok);
    }

    const RingFractionalSolution xbar{rat_vector_from_json(expect(canon, "xbar"))};
    require_ring_splits(reduced, xbar);
    const RingFractionalSolution y_star{rat_vector_from_json(expect(canon, "y_star"))};
    require_ring_splits(reduced, y_star);
    RingUnsplittableSolution canon_solution;
    for (const auto& c : io_detail::array_field(canon, "choices")) {
        canon_solution.choice.push_back(c.get<int>());
    }
    require_ring_choices(reduced, canon_solution);

    // Fixed paths + contracted xbar must stay below the input loads, and the
    // final choices must be the canonical ones pulled back through the
    // relabeling together with the fixed paths.
    {
        std::vector<bool> covered(static_cast<std::size_t>(inst.commodity_count()), false);
        bool choice_consistent = true;
        for (int j = 0; j < k_prime; ++j) {
            const int orig = commodity_map[static_cast<std::size_t>(j)];
            covered[static_cast<std::size_t>(orig)] = true;
            const int expected = endpoint_swapped[static_cast<std::size_t>(j)]
                                     ? 3 - canon_solution.choice[static_cast<std::size_t>(j)]
                                     : canon_solution.choice[static_cast<std::size_t>(j)];
            if (solution.choice[static_cast<std::size_t>(orig)] != expected) {
                choice_consistent = false;
            }
        }
        std::vector<Rat> fixed_load(static_cast<std::size_t>(inst.edge_count()), Rat(0));
        for (const auto& f : io_detail::array_field(canon, "fixed")) {
            const int index = io_detail::int_field(f, "index");
            const int choice = io_detail::int_field(f, "choice");
            if (index < 0 || index >= inst.commodity_count() ||
                covered[static_cast<std::size_t>(index)]) {
                throw IndexMismatchError("fixed set overlaps canonical commodities");
            }
            covered[static_cast<std::size_t>(index)] = true;
            if (solution.choice[static_cast<std::size_t>(index)] != choice) {
                choice_consistent = false;
            }
            for (int e : inst.path_of_choice(index, choice)) {
                fixed_load[static_cast<std::size_t>(e)] += inst.commodity(index).demand;
            }
        }
        bool all_covered = true;
        for (bool c : covered) all_covered = all_covered && c;
        verify_detail::push(report, "choices_consistent_with_canonical",
                            choice_consistent && all_covered);

        const std::vector<Rat> xbar_load = ring_load(reduced, xbar);
        bool no_increase = true;
        for (int e = 0; e < inst.edge_count(); ++e) {
            const auto eu = static_cast<std::size_t>(e);
            if (fixed_load[eu] + xbar_load[static_cast<std::size_t>(edge_map[eu])] > x_load[eu]) {
                no_increase = false;
            }
        }
        verify_detail::push(report, "preprocessing_no_load_increase", no_increase);
    }

    const std::vector<Rat> xbar_load = ring_load(reduced, xbar);
    const std::vector<Rat> ystar_load = ring_load(reduced, y_star);
    const std::vector<Rat> canon_load = ring_load(reduced, canon_solution);

    verify_detail::push(report, "opposing_edges_xbar", check_opposing_edges(reduced, xbar_load));
    verify_detail::push(report, "opposing_edges_y_star", check_opposing_edges(reduced, ystar_load));
    verify_detail::push(report, "opposing_edges_solution",
                        check_opposing_edges(reduced, canon_load));

    const BoxErrorBody canon_body =
        BoxErrorBody::symmetric(static_cast<std::size_t>(reduced.edge_count()), radius);
    verify_detail::push(report, "y_star_in_restricted_set",
                        body_contains(scale_box(canon_body, lambda),
                                      vec_sub(xbar_load, ystar_load)));
    const Rat restricted_cost = ring_cost(reduced, ystar_load);
    verify_detail::push_eq(report, "restricted_cost_claim",
                           io_detail::rat_field(cert, "restricted_cost"), restricted_cost);
    verify_detail::push(report, "restricted_cost_le_reduced_input_cost",
                        restricted_cost <= ring_cost(reduced, xbar_load));
    verify_detail::push(report, "canonical_deviation_in_diff_body",
                        body_contains(minkowski_diff_body(canon_body, lambda),
                                      vec_sub(canon_load, xbar_load)));
    // Two-sided bound against xbar (never against the original x).
    bool lower_ok = true;
    for (std::size_t e = 0; e < canon_load.size(); ++e) {
        if (canon_load[e] < xbar_load[e] - allowance) lower_ok = false;
    }
    verify_detail::push(report, "canonical_load_lower_bound", lower_ok);
    return report;
}

inline VerificationReport verify_report(const ojson& report_json) {
    const std::string kind = io_detail::string_field(report_json, "kind");
    if (kind == "ssuf-round") return verify_ssuf_run(report_json);
    if (kind == "ring-round") return verify_ring_run(report_json);
    throw ParseError("cannot verify report of kind '" + kind + "'");
}

}  // namespace unsplit
