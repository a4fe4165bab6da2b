#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "unsplit/box.hpp"
#include "unsplit/errors.hpp"
#include "unsplit/fpra.hpp"
#include "unsplit/rational.hpp"
#include "unsplit/solvers.hpp"
#include "unsplit/ssuf.hpp"

namespace unsplit {

struct CheckResult {
    std::string name;
    bool pass;
};

// Everything needed to re-verify one cost-aware rounding run without solver
// access: the cost chain, the realized deviation, both bodies, and the
// points of the constructive argument (epsilon, y_bar, y_hat).
struct RoundingCertificate {
    Rat lambda;
    Rat input_cost;       // c^T x
    Rat restricted_cost;  // c^T y*
    Rat output_cost;      // c^T z
    std::vector<Rat> deviation;  // z - x
    BoxErrorBody body;           // R
    BoxErrorBody body_diff;      // R - lambda R
    std::optional<Rat> epsilon;  // nullopt: unbounded (z = y*)
    std::vector<Rat> y_bar, y_hat;
    std::vector<CheckResult> checks;

    bool all_checks_pass() const {
        for (const CheckResult& c : checks) {
            if (!c.pass) return false;
        }
        return true;
    }
};

class CertificateViolationError : public Error {
public:
    CertificateViolationError(const std::string& what, RoundingCertificate certificate)
        : Error(what), certificate(std::move(certificate)) {}

    RoundingCertificate certificate;
};

// The rounding error with the restricted optimum attached, so a conjecture
// counterexample surfaces with its full context instead of being masked.
class SsufRoundingNoSolutionError : public NoSolutionInBodyError {
public:
    SsufRoundingNoSolutionError(const std::string& what, FractionalFlow y_star,
                                SsufCounterexample certificate)
        : NoSolutionInBodyError(what),
          y_star(std::move(y_star)),
          certificate(std::move(certificate)) {}

    FractionalFlow y_star;
    SsufCounterexample certificate;
};

// Largest epsilon with y* + epsilon*(y* - z) still a flow: the minimum over
// arcs where z exceeds y* of y*(a) / (z(a) - y*(a)). nullopt when no arc
// binds (then any epsilon works). Face preservation is required: an arc
// with y*(a) = 0 < z(a) admits no positive epsilon.
inline std::optional<Rat> compute_epsilon(const WeightedSsufNetwork& net,
                                          const FractionalFlow& y_star,
                                          const FractionalFlow& z) {
    require_flow_shape(net, y_star);
    require_flow_shape(net, z);
    std::optional<Rat> epsilon;
    for (int a = 0; a < net.arc_count(); ++a) {
        if (z[a] <= y_star[a]) continue;
        if (y_star[a] == 0) {
            throw FaceViolationError("arc " + net.arc(a).id +
                                     " carries output flow outside the support of y*");
        }
        Rat candidate = y_star[a] / (z[a] - y_star[a]);
        if (!epsilon || candidate < *epsilon) epsilon = std::move(candidate);
    }
    return epsilon;
}

struct ProofPoints {
    std::optional<Rat> epsilon;
    FractionalFlow y_bar, y_hat;
    std::vector<CheckResult> checks;
};

// Reconstructs y_bar = y* + eps*(y* - z) and
// y_hat = eps/(lambda+eps) * x + lambda/(lambda+eps) * y_bar and verifies
// the five facts the cost bound rests on, all with exact comparisons:
//   (a) y_bar is a flow,
//   (b) y_bar lies in x - (lambda+eps)R,
//   (c) y_hat lies in Q and in x - lambda R,
//   (d) c^T y* <= c^T y_hat,
//   (e) c^T z <= (1/lambda) c^T x.
// An unbounded epsilon is replaced by 1; the checks remain valid.
inline ProofPoints verify_proof_points(const WeightedSsufNetwork& net, const FractionalFlow& x,
                                       const FractionalFlow& y_star, const FractionalFlow& z,
                                       const BoxErrorBody& body, const Rat& lambda) {
    require_valid_lambda(lambda);
    require_flow_shape(net, x);

    ProofPoints result;
    result.epsilon = compute_epsilon(net, y_star, z);
    const Rat eps = result.epsilon.value_or(Rat(1));

    const auto n = static_cast<std::size_t>(net.arc_count());
    result.y_bar.values.resize(n);
    result.y_hat.values.resize(n);
    const Rat hat_x_weight = eps / (lambda + eps);
    const Rat hat_bar_weight = lambda / (lambda + eps);
    for (std::size_t a = 0; a < n; ++a) {
        result.y_bar.values[a] = y_star.values[a] + eps * (y_star.values[a] - z.values[a]);
        result.y_hat.values[a] =
            hat_x_weight * x.values[a] + hat_bar_weight * result.y_bar.values[a];
    }

    const bool ybar_in_q = check_membership(net, result.y_bar).ok;
    const bool ybar_in_body =
        body_contains(scale_box(body, lambda + eps), vec_sub(x.values, result.y_bar.values));
    const bool yhat_in_q = check_membership(net, result.y_hat).ok;
    const bool yhat_in_body =
        body_contains(scale_box(body, lambda), vec_sub(x.values, result.y_hat.values));
    const bool cost_step = cost_of(net, y_star) <= cost_of(net, result.y_hat);
    const bool cost_chain = cost_of(net, z) * lambda <= cost_of(net, x);

    result.checks.push_back({"ybar_in_polytope", ybar_in_q});
    result.checks.push_back({"ybar_in_scaled_body", ybar_in_body});
    result.checks.push_back({"yhat_in_restricted_set", yhat_in_q && yhat_in_body});
    result.checks.push_back({"restricted_cost_le_yhat_cost", cost_step});
    result.checks.push_back({"cost_chain", cost_chain});
    return result;
}

struct SsufRoundingOutcome {
    FractionalFlow y_star;
    UnsplittablePathFlow flow;  // one path per terminal, original arc indices
    FractionalFlow z;           // induced load of `flow`
    RoundingCertificate certificate;
};

// The cost-aware rounding scheme for flows: optimize over Q intersected
// with x - lambda*R, hand the optimum to the face-preserving rounder on its
// support subnetwork, and certify every guarantee of the run. lambda = 1
// admits negative costs; lambda < 1 requires nonnegative ones.
inline SsufRoundingOutcome round_with_cost(const WeightedSsufNetwork& net,
                                           const FractionalFlow& x, const SsufFpra& fpra,
                                           const BoxErrorBody& body, const Rat& lambda,
                                           Strictness strictness = Strictness::Strict) {
    require_valid_lambda(lambda);
    require_membership(net, x, "round_with_cost");
    if (lambda < 1 && net.has_negative_cost()) {
        throw NegativeCostError("lambda < 1 requires nonnegative arc costs");
    }

    LpSolution<FractionalFlow> restricted = restricted_min_cost_ssuf(net, x, body, lambda);
    const FractionalFlow& y_star = restricted.point;

    const SupportSubnetwork support = support_subnetwork(net, y_star);
    FractionalFlow y_star_sub;
    y_star_sub.values.reserve(support.arc_to_original.size());
    for (int a : support.arc_to_original) y_star_sub.values.push_back(y_star[a]);
    const BoxErrorBody body_sub = body.restricted_to(support.arc_to_original);

    SsufFpraResult rounded;
    try {
        rounded = fpra.run(support.network, y_star_sub, body_sub);
    } catch (SsufNoSolutionError& err) {
        // Remap the counterexample's candidate paths to original arc indices
        // before surfacing it together with y*.
        for (auto& per_terminal : err.certificate.candidate_paths) {
            for (auto& path : per_terminal) {
                for (int& a : path) a = support.arc_to_original[static_cast<std::size_t>(a)];
            }
        }
        for (auto& entry : err.certificate.entries) {
            if (entry.witness_arc >= 0) {
                entry.witness_arc =
                    support.arc_to_original[static_cast<std::size_t>(entry.witness_arc)];
            }
        }
        throw SsufRoundingNoSolutionError(std::string(err.what()) + " (restricted optimum y* = " +
                                              vec_to_string(y_star.values) + ")",
                                          y_star, std::move(err.certificate));
    }

    UnsplittablePathFlow flow;
    flow.paths.resize(rounded.flow.paths.size());
    for (std::size_t t = 0; t < rounded.flow.paths.size(); ++t) {
        for (int a : rounded.flow.paths[t]) {
            flow.paths[t].push_back(support.arc_to_original[static_cast<std::size_t>(a)]);
        }
    }
    const FractionalFlow z = induced_load(net, flow);

    RoundingCertificate cert{
        lambda,
        cost_of(net, x),
        restricted.objective,
        cost_of(net, z),
        vec_sub(z.values, x.values),
        body,
        minkowski_diff_body(body, lambda),
        std::nullopt,
        {},
        {},
        {},
    };

    ProofPoints proof = verify_proof_points(net, x, y_star, z, body, lambda);
    cert.epsilon = proof.epsilon;
    cert.y_bar = std::move(proof.y_bar.values);
    cert.y_hat = std::move(proof.y_hat.values);

    bool face_preserved = true;
    for (int a = 0; a < net.arc_count(); ++a) {
        if (y_star[a] == 0 && z[a] != 0) face_preserved = false;
    }
    cert.checks.push_back({"restricted_cost_le_input_cost", cert.restricted_cost <= cert.input_cost});
    cert.checks.push_back({"output_cost_le_ceiling", cert.output_cost * lambda <= cert.input_cost});
    cert.checks.push_back({"deviation_in_diff_body", body_contains(cert.body_diff, cert.deviation)});
    cert.checks.push_back({"face_preservation", face_preserved});
    for (CheckResult& c : proof.checks) cert.checks.push_back(std::move(c));

    if (!cert.all_checks_pass() && strictness == Strictness::Strict) {
        std::string failing;
        for (const CheckResult& c : cert.checks) {
            if (!c.pass) failing += (failing.empty() ? "" : ", ") + c.name;
        }
        throw CertificateViolationError("certificate checks failed: " + failing, std::move(cert));
    }

    return SsufRoundingOutcome{y_star, std::move(flow), std::move(z), std::move(cert)};
}

}  // namespace unsplit
