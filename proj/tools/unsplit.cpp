// Command-line front end: instance generation, the two rounding pipelines,
// standalone certificate verification, and solver-vs-oracle campaigns.
//
// Exit codes: 0 success / verified, 1 certificate or verification failure,
// 2 input error, 3 enumeration or resource cap exceeded.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "unsplit/generate.hpp"
#include "unsplit/io.hpp"
#include "unsplit/lp_oracle.hpp"
#include "unsplit/meta.hpp"
#include "unsplit/ring_pipeline.hpp"
#include "unsplit/solvers.hpp"
#include "unsplit/verify.hpp"

namespace {

using namespace unsplit;

constexpr int kExitOk = 0;
constexpr int kExitCertificateFailure = 1;
constexpr int kExitInputError = 2;
constexpr int kExitResourceCap = 3;

std::string read_file(const std::string& path) {
    if (path == "-") {
        std::ostringstream buffer;
        buffer << std::cin.rdbuf();
        return buffer.str();
    }
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path == "-" || path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open '" + path + "' for writing");
    out << text;
}

struct CommonRoundOptions {
    std::string instance_path;
    std::string lambda_text = "1";
    std::string fpra_name = "brute";
    bool report_mode = false;
    std::size_t cap = 0;  // 0: defaults
    std::string out_path = "-";
};

int run_ssuf_round(const CommonRoundOptions& opt, const std::string& radius_text,
                   bool compute_fractional) {
    const ojson doc_json = parse_json_text(read_file(opt.instance_path));
    InstanceDoc parsed = parse_instance(doc_json);
    auto* doc = std::get_if<SsufInstanceDoc>(&parsed);
    if (doc == nullptr) throw ParseError("ssuf-round needs an instance of kind 'ssuf'");
    const Rat lambda = parse_rational(opt.lambda_text);

    if (!doc->fractional) {
        if (!compute_fractional) {
            throw ParseError("instance has no fractional flow; pass --compute-fractional");
        }
        if (doc->network.has_negative_cost() && !doc->network.is_acyclic()) {
            throw InvalidInstanceError(
                "initial fractional solve needs nonnegative costs on cyclic networks");
        }
        ArcBounds free_bounds;
        const Rat total = doc->network.total_demand();
        free_bounds.lower.assign(static_cast<std::size_t>(doc->network.arc_count()), Rat(0));
        free_bounds.upper.assign(static_cast<std::size_t>(doc->network.arc_count()), total);
        const auto initial = min_cost_flow_bounded(doc->network, free_bounds);
        if (initial.status != LpStatus::Optimal) {
            throw InvalidInstanceError("instance admits no fractional flow");
        }
        doc->fractional = initial.point;
    }

    bool eliminated = false;
    if (!support_is_acyclic(doc->network, *doc->fractional)) {
        doc->fractional = eliminate_cycle_flow(doc->network, *doc->fractional);
        eliminated = true;
    }

    const Rat radius = radius_text.empty() ? doc->network.d_max() : parse_rational(radius_text);
    const BoxErrorBody body =
        BoxErrorBody::symmetric(static_cast<std::size_t>(doc->network.arc_count()), radius);
    const Strictness strictness = opt.report_mode ? Strictness::Report : Strictness::Strict;
    EnumerationLimits limits;
    if (opt.cap > 0) limits.max_assignments = opt.cap;

    SsufFpra fpra = opt.fpra_name == "greedy" ? make_greedy_ssuf_fpra()
                                              : make_brute_force_ssuf_fpra(limits, strictness);
    if (opt.fpra_name != "greedy" && opt.fpra_name != "brute") {
        throw ParseError("unknown FPRA '" + opt.fpra_name + "' (expected brute or greedy)");
    }

    try {
        const SsufRoundingOutcome outcome =
            round_with_cost(doc->network, *doc->fractional, fpra, body, lambda, strictness);
        const ojson report =
            build_ssuf_report(*doc, lambda, fpra.descriptor.name, strictness, outcome, eliminated);
        const VerificationReport verification = verify_ssuf_run(report);
        write_output(opt.out_path, report.dump(2) + "\n");
        if (!outcome.certificate.all_checks_pass() || !verification.verdict()) {
            std::cerr << "certificate or verification checks failed\n";
            return kExitCertificateFailure;
        }
        std::cerr << "certified: c^T z = " << rat_to_string(outcome.certificate.output_cost)
                  << " <= (1/" << rat_to_string(lambda) << ") * "
                  << rat_to_string(outcome.certificate.input_cost) << "\n";
        return kExitOk;
    } catch (const SsufRoundingNoSolutionError& err) {
        const ojson report = build_ssuf_counterexample_report(*doc, lambda, body, err);
        write_output(opt.out_path, report.dump(2) + "\n");
        std::cerr << "no in-body rounding exists; counterexample certificate written ("
                  << err.certificate.entries.size() << " assignments)\n";
        return kExitCertificateFailure;
    }
}

int run_ring_round(const CommonRoundOptions& opt, const std::string& alpha_text) {
    const ojson doc_json = parse_json_text(read_file(opt.instance_path));
    InstanceDoc parsed = parse_instance(doc_json);
    auto* doc = std::get_if<RingInstanceDoc>(&parsed);
    if (doc == nullptr) throw ParseError("ring-round needs an instance of kind 'ring'");
    if (!doc->fractional) throw ParseError("ring instance has no fractional splits");
    if (opt.fpra_name != "brute") {
        throw ParseError("ring rounding ships only the brute-force FPRA");
    }
    const Rat lambda = parse_rational(opt.lambda_text);
    const Rat alpha = parse_rational(alpha_text);
    const Strictness strictness = opt.report_mode ? Strictness::Report : Strictness::Strict;
    EnumerationLimits limits;
    if (opt.cap > 0) limits.max_ring_commodities = static_cast<int>(opt.cap);
    const RingFpra fpra = make_brute_force_ring_fpra(limits, strictness);

    try {
        const RingRoundingOutcome outcome =
            ring_round_with_cost(doc->instance, *doc->fractional, fpra, alpha, lambda, strictness);
        const ojson report =
            build_ring_report(*doc, lambda, alpha, fpra.descriptor.name, strictness, outcome);
        const VerificationReport verification = verify_ring_run(report);
        write_output(opt.out_path, report.dump(2) + "\n");
        if (!outcome.certificate.all_checks_pass() || !verification.verdict()) {
            std::cerr << "certificate or verification checks failed\n";
            return kExitCertificateFailure;
        }
        std::cerr << "certified: total path cost "
                  << rat_to_string(outcome.certificate.output_cost) << " <= (1/"
                  << rat_to_string(lambda) << ") * "
                  << rat_to_string(outcome.certificate.input_cost) << "\n";
        return kExitOk;
    } catch (const RingRoundingNoSolutionError& err) {
        const ojson report = build_ring_counterexample_report(*doc, lambda, alpha, err);
        write_output(opt.out_path, report.dump(2) + "\n");
        std::cerr << "no in-body rounding exists; counterexample certificate written\n";
        return kExitCertificateFailure;
    }
}

int run_verify(const std::string& report_path) {
    const ojson report_json = parse_json_text(read_file(report_path));
    const VerificationReport report = verify_report(report_json);
    for (const VerificationCheck& check : report.checks) {
        std::cout << (check.pass ? "PASS " : "FAIL ") << check.name;
        if (!check.pass && !check.detail.empty()) std::cout << " (" << check.detail << ")";
        std::cout << "\n";
    }
    std::cout << (report.verdict() ? "verdict: pass" : "verdict: fail") << "\n";
    return report.verdict() ? kExitOk : kExitCertificateFailure;
}

struct CampaignStats {
    int runs = 0;
    int failures = 0;
};

int run_oracle_compare(int n, std::uint64_t seed, bool inject_fault) {
    CampaignStats ssuf_lp, ring_lp, lemma, pipelines;
    const std::vector<Rat> lambdas{Rat(1), Rat(1, 2), Rat(1, 4)};
    std::ostringstream failures;

    // Flow solver vs vertex enumeration on instances tiny enough for the
    // oracle's variable cap.
    SsufGenParams tiny;
    tiny.nodes = 4;
    tiny.extra_arcs = 3;  // 3 spanning + 3 extra = 6 arcs = 6 LP variables
    tiny.terminals = 2;
    for (int i = 0; i < n; ++i) {
        const SsufInstanceDoc doc = generate_ssuf(seed + static_cast<std::uint64_t>(i), tiny);
        const Rat& lambda = lambdas[static_cast<std::size_t>(i) % lambdas.size()];
        const BoxErrorBody body = BoxErrorBody::symmetric(
            static_cast<std::size_t>(doc.network.arc_count()), doc.network.d_max());
        auto solver = restricted_min_cost_ssuf(doc.network, *doc.fractional, body, lambda);
        if (inject_fault && i == 0) solver.objective += 1;
        const auto oracle = lp_oracle_enumerate(
            oracle_lp_for_ssuf(doc.network, bounds_for_restriction(doc.network, *doc.fractional,
                                                                   body, lambda)));
        ++ssuf_lp.runs;
        const bool redundancy_ok =
            cost_of(doc.network, solver.point) <= cost_of(doc.network, *doc.fractional) &&
            body_contains(scale_box(body, lambda),
                          vec_sub(doc.fractional->values, solver.point.values));
        if (oracle.status != LpStatus::Optimal || oracle.objective != solver.objective ||
            !redundancy_ok) {
            ++ssuf_lp.failures;
            failures << "ssuf-lp seed " << seed + static_cast<std::uint64_t>(i) << ": solver "
                     << rat_to_string(solver.objective) << " oracle "
                     << rat_to_string(oracle.objective) << "\n"
                     << instance_to_json(doc).dump(2) << "\n";
        }
    }

    // Ring simplex vs vertex enumeration, on the canonical form.
    RingGenParams ring_params;
    ring_params.nodes = 6;
    ring_params.commodities = 3;
    for (int i = 0; i < n; ++i) {
        const RingInstanceDoc doc = generate_ring(seed + 1000 + static_cast<std::uint64_t>(i),
                                                  ring_params);
        const RingPreprocessState state = preprocess_ring(doc.instance, *doc.fractional);
        bool any_active = false;
        for (bool fixed : state.is_fixed) any_active = any_active || !fixed;
        if (!any_active) continue;
        const CanonicalRingForm form = canonicalize_crossing(doc.instance, state);
        const Rat radius = parse_rational("13/10") * form.d_max_original;
        const Rat& lambda = lambdas[static_cast<std::size_t>(i) % lambdas.size()];
        auto solver = ring_restricted_min_cost(form.reduced, form.xbar, radius, lambda);
        const auto oracle =
            lp_oracle_enumerate(oracle_lp_for_ring(form.reduced, form.xbar, radius, lambda));
        const Rat oracle_total = oracle.objective + ring_oracle_objective_offset(form.reduced);
        ++ring_lp.runs;
        if (oracle.status != LpStatus::Optimal || oracle_total != solver.objective) {
            ++ring_lp.failures;
            failures << "ring-lp seed " << seed + 1000 + static_cast<std::uint64_t>(i)
                     << ": solver " << rat_to_string(solver.objective) << " oracle "
                     << rat_to_string(oracle_total) << "\n"
                     << instance_to_json(doc).dump(2) << "\n";
        }
    }

    // Uniform-capacity reduction round trips.
    RingGenParams cap_params = ring_params;
    cap_params.with_capacities = true;
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    for (int i = 0; i < n; ++i) {
        const RingInstanceDoc doc = generate_ring(seed + 2000 + static_cast<std::uint64_t>(i),
                                                  cap_params);
        const UniformReduction reduction = nonuniform_to_uniform(doc.instance);
        ++lemma.runs;
        bool ok = true;

        RingUnsplittableSolution original;
        for (int c = 0; c < doc.instance.commodity_count(); ++c) {
            original.choice.push_back(rng() % 2 == 0 ? 1 : 2);
        }
        const RingUnsplittableSolution embedded = embed_solution(reduction, original);
        const auto orig_viol =
            ring_violation(doc.instance, ring_load(doc.instance, original));
        const auto unif_viol =
            ring_violation(reduction.uniform, ring_load(reduction.uniform, embedded));
        for (int e = 0; e < doc.instance.edge_count(); ++e) {
            const auto eu = static_cast<std::size_t>(e);
            if (reduction.subdivision[eu]) {
                const auto& rec = *reduction.subdivision[eu];
                if (unif_viol[static_cast<std::size_t>(rec.uniform_e1)] != orig_viol[eu] ||
                    unif_viol[static_cast<std::size_t>(rec.uniform_e2)] != orig_viol[eu]) {
                    ok = false;
                }
            }
        }

        RingUnsplittableSolution uniform_random;
        for (int c = 0; c < reduction.uniform.commodity_count(); ++c) {
            uniform_random.choice.push_back(rng() % 2 == 0 ? 1 : 2);
        }
        const StripReport strip = strip_artificials(doc.instance, reduction, uniform_random);
        ok = ok && strip.all_ok;
        if (!ok) {
            ++lemma.failures;
            failures << "lemma-4.1 seed " << seed + 2000 + static_cast<std::uint64_t>(i) << "\n"
                     << instance_to_json(doc).dump(2) << "\n";
        }
    }

    // Full pipelines plus standalone verification.
    for (int i = 0; i < n / 4 + 1; ++i) {
        const std::uint64_t s = seed + 3000 + static_cast<std::uint64_t>(i);
        {
            const SsufInstanceDoc doc = generate_ssuf(s);
            const BoxErrorBody body = BoxErrorBody::symmetric(
                static_cast<std::size_t>(doc.network.arc_count()), doc.network.d_max());
            const auto outcome = round_with_cost(doc.network, *doc.fractional,
                                                 make_brute_force_ssuf_fpra(), body, Rat(1));
            const ojson report =
                build_ssuf_report(doc, Rat(1), "brute", Strictness::Strict, outcome, false);
            ++pipelines.runs;
            if (!verify_ssuf_run(report).verdict()) {
                ++pipelines.failures;
                failures << "ssuf pipeline seed " << s << " failed verification\n";
            }
        }
        {
            const RingInstanceDoc doc = generate_ring(s);
            const auto outcome =
                ring_round_with_cost(doc.instance, *doc.fractional, make_brute_force_ring_fpra(),
                                     parse_rational("13/10"), Rat(1));
            const ojson report = build_ring_report(doc, Rat(1), parse_rational("13/10"), "brute",
                                                   Strictness::Strict, outcome);
            ++pipelines.runs;
            if (!verify_ring_run(report).verdict()) {
                ++pipelines.failures;
                failures << "ring pipeline seed " << s << " failed verification\n";
            }
        }
    }

    const auto line = [](const char* name, const CampaignStats& s) {
        std::cout << name << ": " << s.runs << " runs, " << s.failures << " disagreements\n";
    };
    line("ssuf-lp-vs-oracle", ssuf_lp);
    line("ring-lp-vs-oracle", ring_lp);
    line("uniform-reduction-roundtrip", lemma);
    line("pipeline-verification", pipelines);
    const int total = ssuf_lp.failures + ring_lp.failures + lemma.failures + pipelines.failures;
    if (total > 0) {
        std::cerr << failures.str();
        std::cout << "result: " << total << " disagreements\n";
        return kExitCertificateFailure;
    }
    std::cout << "result: all campaigns agree\n";
    return kExitOk;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"cost-aware rounding for single-source unsplittable flow and ring loading"};
    app.require_subcommand(1);

    // generate
    auto* generate = app.add_subcommand("generate", "emit a random instance file");
    std::string gen_kind = "ssuf", gen_out = "-";
    std::uint64_t gen_seed = 1;
    SsufGenParams ssuf_params;
    RingGenParams ring_params;
    generate->add_option("--kind", gen_kind, "ssuf or ring")
        ->check(CLI::IsMember({"ssuf", "ring"}));
    generate->add_option("--seed", gen_seed, "generator seed");
    generate->add_option("--out", gen_out, "output path, - for stdout");
    generate->add_option("--nodes", ssuf_params.nodes, "node count");
    generate->add_option("--extra-arcs", ssuf_params.extra_arcs, "arcs beyond the spanning ones");
    generate->add_option("--terminals", ssuf_params.terminals, "terminal count (ssuf)");
    generate->add_option("--commodities", ring_params.commodities, "commodity count (ring)");
    bool with_caps = false;
    generate->add_flag("--with-capacities", with_caps, "attach feasible edge capacities (ring)");

    // shared rounding options
    const auto add_round_options = [](CLI::App* cmd, CommonRoundOptions& opt) {
        cmd->add_option("instance", opt.instance_path, "instance file, - for stdin")->required();
        cmd->add_option("--lambda", opt.lambda_text, "tradeoff parameter in (0,1]");
        cmd->add_option("--fpra", opt.fpra_name, "rounding algorithm: brute or greedy");
        cmd->add_flag("--report", opt.report_mode,
                      "record failed checks instead of aborting (default --strict)");
        bool strict_dummy = false;
        cmd->add_flag("--strict", strict_dummy, "abort on failed checks (default)");
        cmd->add_option("--cap", opt.cap, "enumeration cap override");
        cmd->add_option("--out", opt.out_path, "report path, - for stdout");
    };

    auto* ssuf_round = app.add_subcommand("ssuf-round", "cost-aware rounding of a fractional flow");
    CommonRoundOptions ssuf_opt;
    add_round_options(ssuf_round, ssuf_opt);
    std::string radius_text;
    bool compute_fractional = false;
    ssuf_round->add_option("--radius", radius_text, "error body radius (default d_max)");
    ssuf_round->add_flag("--compute-fractional", compute_fractional,
                         "solve for a min-cost fractional flow first");

    auto* ring_round = app.add_subcommand("ring-round", "cost-aware rounding of ring splits");
    CommonRoundOptions ring_opt;
    add_round_options(ring_round, ring_opt);
    std::string alpha_text = "13/10";
    ring_round->add_option("--alpha", alpha_text, "one-sided guarantee factor");

    auto* verify_cmd = app.add_subcommand("verify", "re-check a serialized run report");
    std::string report_path;
    verify_cmd->add_option("report", report_path, "report file, - for stdin")->required();

    auto* oracle = app.add_subcommand("oracle-compare", "solver vs enumeration campaigns");
    int oracle_n = 200;
    std::uint64_t oracle_seed = 1;
    bool inject_fault = false;
    oracle->add_option("--n", oracle_n, "instances per campaign");
    oracle->add_option("--seed", oracle_seed, "campaign seed");
    oracle->add_flag("--inject-fault", inject_fault, "corrupt one result to test detection");

    CLI11_PARSE(app, argc, argv);

    if (generate->parsed()) {
        if (gen_kind == "ssuf") {
            const SsufInstanceDoc doc = generate_ssuf(gen_seed, ssuf_params);
            write_output(gen_out, instance_to_json(doc).dump(2) + "\n");
        } else {
            ring_params.nodes = ssuf_params.nodes;
            ring_params.with_capacities = with_caps;
            const RingInstanceDoc doc = generate_ring(gen_seed, ring_params);
            write_output(gen_out, instance_to_json(doc).dump(2) + "\n");
        }
        return kExitOk;
    }
    if (ssuf_round->parsed()) return run_ssuf_round(ssuf_opt, radius_text, compute_fractional);
    if (ring_round->parsed()) return run_ring_round(ring_opt, alpha_text);
    if (verify_cmd->parsed()) return run_verify(report_path);
    if (oracle->parsed()) return run_oracle_compare(oracle_n, oracle_seed, inject_fault);
    return kExitInputError;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const TooLargeError& err) {
        std::cerr << "error (resource cap): " << err.what() << "\n";
        return kExitResourceCap;
    } catch (const CertificateViolationError& err) {
        std::cerr << "error (certificate): " << err.what() << "\n";
        return kExitCertificateFailure;
    } catch (const NoSolutionInBodyError& err) {
        std::cerr << "error (no in-body solution): " << err.what() << "\n";
        return kExitCertificateFailure;
    } catch (const InternalError& err) {
        std::cerr << "internal error: " << err.what() << "\n";
        return kExitCertificateFailure;
    } catch (const Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitInputError;
    }
}
