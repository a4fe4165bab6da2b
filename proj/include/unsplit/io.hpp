#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "unsplit/errors.hpp"
#include "unsplit/fpra.hpp"
#include "unsplit/meta.hpp"
#include "unsplit/rational.hpp"
#include "unsplit/ring.hpp"
#include "unsplit/ring_pipeline.hpp"
#include "unsplit/ssuf.hpp"

namespace unsplit {

using ojson = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// JSON field helpers (all structural problems surface as ParseError)
// ---------------------------------------------------------------------------

namespace io_detail {

inline const ojson& expect(const ojson& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) {
        throw ParseError(std::string("missing field '") + key + "'");
    }
    return j.at(key);
}

inline std::string string_field(const ojson& j, const char* key) {
    const ojson& v = expect(j, key);
    if (!v.is_string()) throw ParseError(std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

inline Rat rat_field(const ojson& j, const char* key) {
    return parse_rational(string_field(j, key));
}

inline const ojson& array_field(const ojson& j, const char* key) {
    const ojson& v = expect(j, key);
    if (!v.is_array()) throw ParseError(std::string("field '") + key + "' must be an array");
    return v;
}

inline int int_field(const ojson& j, const char* key) {
    const ojson& v = expect(j, key);
    if (!v.is_number_integer()) {
        throw ParseError(std::string("field '") + key + "' must be an integer");
    }
    return v.get<int>();
}

}  // namespace io_detail

// ---------------------------------------------------------------------------
// Instance documents
// ---------------------------------------------------------------------------

struct SsufInstanceDoc {
    WeightedSsufNetwork network;
    std::optional<FractionalFlow> fractional;
};

struct RingInstanceDoc {
    RingInstance instance;
    std::optional<RingFractionalSolution> fractional;
};

using InstanceDoc = std::variant<SsufInstanceDoc, RingInstanceDoc>;

inline ojson flow_to_json(const WeightedSsufNetwork& net, const FractionalFlow& x) {
    require_flow_shape(net, x);
    ojson out = ojson::object();
    for (int a = 0; a < net.arc_count(); ++a) out[net.arc(a).id] = rat_to_string(x[a]);
    return out;
}

inline FractionalFlow flow_from_json(const WeightedSsufNetwork& net, const ojson& j) {
    if (!j.is_object()) throw ParseError("flow must be an object keyed by arc id");
    if (static_cast<int>(j.size()) != net.arc_count()) {
        throw IndexMismatchError("flow has " + std::to_string(j.size()) + " entries, expected " +
                                 std::to_string(net.arc_count()));
    }
    FractionalFlow x = FractionalFlow::zeros(net.arc_count());
    for (const auto& [key, value] : j.items()) {
        const std::optional<int> a = net.find_arc(key);
        if (!a) throw IndexMismatchError("flow references unknown arc '" + key + "'");
        if (!value.is_string()) throw ParseError("flow value for '" + key + "' must be a string");
        x[*a] = parse_rational(value.get<std::string>());
    }
    return x;
}

inline ojson rat_vector_to_json(const std::vector<Rat>& v) {
    ojson out = ojson::array();
    for (const Rat& q : v) out.push_back(rat_to_string(q));
    return out;
}

inline std::vector<Rat> rat_vector_from_json(const ojson& j) {
    if (!j.is_array()) throw ParseError("expected an array of rationals");
    std::vector<Rat> out;
    out.reserve(j.size());
    for (const auto& v : j) {
        if (!v.is_string()) throw ParseError("rational array entries must be strings");
        out.push_back(parse_rational(v.get<std::string>()));
    }
    return out;
}

inline ojson instance_to_json(const SsufInstanceDoc& doc) {
    const WeightedSsufNetwork& net = doc.network;
    ojson j;
    j["kind"] = "ssuf";
    j["nodes"] = net.node_ids();
    j["source"] = net.node_id(net.source());
    ojson arcs = ojson::array();
    for (const auto& arc : net.arcs()) {
        ojson a;
        a["id"] = arc.id;
        a["tail"] = net.node_id(arc.tail);
        a["head"] = net.node_id(arc.head);
        a["cost"] = rat_to_string(arc.cost);
        arcs.push_back(std::move(a));
    }
    j["arcs"] = std::move(arcs);
    ojson terminals = ojson::array();
    for (const Terminal& t : net.terminals()) {
        ojson entry;
        entry["node"] = net.node_id(t.node);
        entry["demand"] = rat_to_string(t.demand);
        terminals.push_back(std::move(entry));
    }
    j["terminals"] = std::move(terminals);
    if (doc.fractional) j["fractional"] = flow_to_json(net, *doc.fractional);
    return j;
}

inline ojson instance_to_json(const RingInstanceDoc& doc) {
    const RingInstance& inst = doc.instance;
    ojson j;
    j["kind"] = "ring";
    j["nodes"] = inst.node_ids();
    ojson edges = ojson::array();
    for (int e = 0; e < inst.edge_count(); ++e) {
        ojson entry;
        entry["cost"] = rat_to_string(inst.edge_cost(e));
        if (inst.edge_capacity(e)) entry["capacity"] = rat_to_string(*inst.edge_capacity(e));
        edges.push_back(std::move(entry));
    }
    j["edges"] = std::move(edges);
    ojson commodities = ojson::array();
    for (const RingCommodity& c : inst.commodities()) {
        ojson entry;
        entry["source"] = inst.node_id(c.source);
        entry["sink"] = inst.node_id(c.sink);
        entry["demand"] = rat_to_string(c.demand);
        commodities.push_back(std::move(entry));
    }
    j["commodities"] = std::move(commodities);
    if (doc.fractional) {
        ojson splits = ojson::array();
        for (const Rat& s : doc.fractional->split) splits.push_back(rat_to_string(s));
        j["fractional"] = std::move(splits);
    }
    return j;
}

inline SsufInstanceDoc parse_ssuf_instance(const ojson& j) {
    using io_detail::array_field;
    using io_detail::string_field;
    std::vector<std::string> nodes;
    for (const auto& v : array_field(j, "nodes")) {
        if (!v.is_string()) throw ParseError("node ids must be strings");
        nodes.push_back(v.get<std::string>());
    }
    std::vector<ArcSpec> arcs;
    for (const auto& a : array_field(j, "arcs")) {
        arcs.push_back(ArcSpec{string_field(a, "id"), string_field(a, "tail"),
                               string_field(a, "head"), io_detail::rat_field(a, "cost")});
    }
    std::vector<TerminalSpec> terminals;
    for (const auto& t : array_field(j, "terminals")) {
        terminals.push_back(TerminalSpec{string_field(t, "node"), io_detail::rat_field(t, "demand")});
    }
    SsufInstanceDoc doc{WeightedSsufNetwork(nodes, arcs, string_field(j, "source"), terminals),
                        std::nullopt};
    if (j.contains("fractional")) doc.fractional = flow_from_json(doc.network, j.at("fractional"));
    return doc;
}

inline RingInstanceDoc parse_ring_instance(const ojson& j) {
    using io_detail::array_field;
    using io_detail::string_field;
    std::vector<std::string> nodes;
    std::map<std::string, int> node_index;
    for (const auto& v : array_field(j, "nodes")) {
        if (!v.is_string()) throw ParseError("node ids must be strings");
        if (!node_index.emplace(v.get<std::string>(), static_cast<int>(nodes.size())).second) {
            throw ParseError("duplicate ring node id '" + v.get<std::string>() + "'");
        }
        nodes.push_back(v.get<std::string>());
    }
    std::vector<Rat> costs;
    std::vector<std::optional<Rat>> caps;
    for (const auto& e : array_field(j, "edges")) {
        costs.push_back(io_detail::rat_field(e, "cost"));
        if (e.contains("capacity")) {
            caps.push_back(io_detail::rat_field(e, "capacity"));
        } else {
            caps.push_back(std::nullopt);
        }
    }
    std::vector<RingCommodity> commodities;
    for (const auto& c : array_field(j, "commodities")) {
        const std::string s = string_field(c, "source"), t = string_field(c, "sink");
        if (!node_index.count(s)) throw ParseError("unknown commodity source '" + s + "'");
        if (!node_index.count(t)) throw ParseError("unknown commodity sink '" + t + "'");
        commodities.push_back(
            RingCommodity{node_index[s], node_index[t], io_detail::rat_field(c, "demand")});
    }
    RingInstanceDoc doc{RingInstance(std::move(nodes), std::move(costs), std::move(caps),
                                     std::move(commodities)),
                        std::nullopt};
    if (j.contains("fractional")) {
        RingFractionalSolution frac{rat_vector_from_json(j.at("fractional"))};
        require_ring_splits(doc.instance, frac);
        doc.fractional = std::move(frac);
    }
    return doc;
}

inline InstanceDoc parse_instance(const ojson& j) {
    const std::string kind = io_detail::string_field(j, "kind");
    if (kind == "ssuf") return parse_ssuf_instance(j);
    if (kind == "ring") return parse_ring_instance(j);
    throw ParseError("unknown instance kind '" + kind + "'");
}

inline ojson parse_json_text(const std::string& text) {
    ojson j = ojson::parse(text, nullptr, false);
    if (j.is_discarded()) throw ParseError("input is not valid JSON");
    return j;
}

inline InstanceDoc parse_instance_text(const std::string& text) {
    return parse_instance(parse_json_text(text));
}

// ---------------------------------------------------------------------------
// Certificates and run reports
// ---------------------------------------------------------------------------

inline ojson body_to_json_by_arc(const WeightedSsufNetwork& net, const BoxErrorBody& body) {
    ojson lower = ojson::object(), upper = ojson::object();
    for (int a = 0; a < net.arc_count(); ++a) {
        lower[net.arc(a).id] = rat_to_string(body.lower(static_cast<std::size_t>(a)));
        upper[net.arc(a).id] = rat_to_string(body.upper(static_cast<std::size_t>(a)));
    }
    ojson out;
    out["lower"] = std::move(lower);
    out["upper"] = std::move(upper);
    return out;
}

inline BoxErrorBody body_from_json_by_arc(const WeightedSsufNetwork& net, const ojson& j) {
    const FractionalFlow lower = flow_from_json(net, io_detail::expect(j, "lower"));
    const FractionalFlow upper = flow_from_json(net, io_detail::expect(j, "upper"));
    return BoxErrorBody(lower.values, upper.values);
}

inline ojson checks_to_json(const std::vector<CheckResult>& checks) {
    ojson out = ojson::array();
    for (const CheckResult& c : checks) {
        ojson entry;
        entry["name"] = c.name;
        entry["pass"] = c.pass;
        out.push_back(std::move(entry));
    }
    return out;
}

inline ojson ssuf_certificate_to_json(const WeightedSsufNetwork& net,
                                      const RoundingCertificate& cert) {
    ojson j;
    j["lambda"] = rat_to_string(cert.lambda);
    j["input_cost"] = rat_to_string(cert.input_cost);
    j["restricted_cost"] = rat_to_string(cert.restricted_cost);
    j["output_cost"] = rat_to_string(cert.output_cost);
    j["deviation"] = flow_to_json(net, FractionalFlow(cert.deviation));
    j["body"] = body_to_json_by_arc(net, cert.body);
    j["body_diff"] = body_to_json_by_arc(net, cert.body_diff);
    j["epsilon"] = cert.epsilon ? rat_to_string(*cert.epsilon) : "unbounded";
    j["y_bar"] = flow_to_json(net, FractionalFlow(cert.y_bar));
    j["y_hat"] = flow_to_json(net, FractionalFlow(cert.y_hat));
    j["checks"] = checks_to_json(cert.checks);
    return j;
}

inline ojson build_ssuf_report(const SsufInstanceDoc& instance_with_x, const Rat& lambda,
                               const std::string& fpra_name, Strictness strictness,
                               const SsufRoundingOutcome& outcome, bool cycle_flow_eliminated) {
    const WeightedSsufNetwork& net = instance_with_x.network;
    ojson j;
    j["kind"] = "ssuf-round";
    j["instance"] = instance_to_json(instance_with_x);
    j["lambda"] = rat_to_string(lambda);
    j["fpra"] = fpra_name;
    j["strictness"] = strictness == Strictness::Strict ? "strict" : "report";
    j["cycle_flow_eliminated"] = cycle_flow_eliminated;
    j["y_star"] = flow_to_json(net, outcome.y_star);
    ojson paths = ojson::array();
    for (const auto& path : outcome.flow.paths) {
        ojson p = ojson::array();
        for (int a : path) p.push_back(net.arc(a).id);
        paths.push_back(std::move(p));
    }
    j["paths"] = std::move(paths);
    j["load"] = flow_to_json(net, outcome.z);
    j["certificate"] = ssuf_certificate_to_json(net, outcome.certificate);
    return j;
}

inline ojson build_ring_report(const RingInstanceDoc& instance_with_x, const Rat& lambda,
                               const Rat& alpha, const std::string& fpra_name,
                               Strictness strictness, const RingRoundingOutcome& outcome) {
    const RingInstance& inst = instance_with_x.instance;
    ojson j;
    j["kind"] = "ring-round";
    j["instance"] = instance_to_json(instance_with_x);
    j["lambda"] = rat_to_string(lambda);
    j["alpha"] = rat_to_string(alpha);
    j["fpra"] = fpra_name;
    j["strictness"] = strictness == Strictness::Strict ? "strict" : "report";
    j["d_max"] = rat_to_string(inst.d_max());
    j["choices"] = outcome.solution.choice;
    j["load"] = rat_vector_to_json(outcome.load);

    const RoundingCertificate& cert = outcome.certificate;
    ojson c;
    c["lambda"] = rat_to_string(cert.lambda);
    c["input_cost"] = rat_to_string(cert.input_cost);
    c["restricted_cost"] = rat_to_string(cert.restricted_cost);
    c["output_cost"] = rat_to_string(cert.output_cost);
    c["deviation"] = rat_vector_to_json(cert.deviation);
    c["epsilon"] = cert.epsilon ? rat_to_string(*cert.epsilon) : "unbounded";
    c["y_bar"] = rat_vector_to_json(cert.y_bar);
    c["y_hat"] = rat_vector_to_json(cert.y_hat);
    c["checks"] = checks_to_json(cert.checks);
    j["certificate"] = std::move(c);

    if (outcome.canonical) {
        const CanonicalRingForm& form = *outcome.canonical;
        ojson k;
        k["nodes"] = form.reduced.node_ids();
        k["edge_costs"] = rat_vector_to_json([&] {
            std::vector<Rat> costs;
            for (int e = 0; e < form.reduced.edge_count(); ++e) {
                costs.push_back(form.reduced.edge_cost(e));
            }
            return costs;
        }());
        ojson commodities = ojson::array();
        for (const RingCommodity& cm : form.reduced.commodities()) {
            ojson entry;
            entry["source"] = cm.source;
            entry["sink"] = cm.sink;
            entry["demand"] = rat_to_string(cm.demand);
            commodities.push_back(std::move(entry));
        }
        k["commodities"] = std::move(commodities);
        k["commodity_map"] = form.commodity_map;
        k["endpoint_swapped"] = form.endpoint_swapped;
        k["edge_map"] = form.edge_map;
        ojson fixed = ojson::array();
        for (const FixedCommodity& f : form.fixed) {
            ojson entry;
            entry["index"] = f.index;
            entry["choice"] = f.choice;
            fixed.push_back(std::move(entry));
        }
        k["fixed"] = std::move(fixed);
        ojson xbar = ojson::array();
        for (const Rat& s : form.xbar.split) xbar.push_back(rat_to_string(s));
        k["xbar"] = std::move(xbar);
        ojson ystar = ojson::array();
        for (const Rat& s : outcome.y_star.split) ystar.push_back(rat_to_string(s));
        k["y_star"] = std::move(ystar);
        k["choices"] = outcome.canonical_solution.choice;
        j["canonical"] = std::move(k);
    }
    return j;
}

inline ojson build_ssuf_counterexample_report(const SsufInstanceDoc& instance_with_x,
                                              const Rat& lambda, const BoxErrorBody& body,
                                              const SsufRoundingNoSolutionError& err) {
    const WeightedSsufNetwork& net = instance_with_x.network;
    ojson j;
    j["kind"] = "ssuf-no-solution";
    j["instance"] = instance_to_json(instance_with_x);
    j["lambda"] = rat_to_string(lambda);
    j["body"] = body_to_json_by_arc(net, body);
    j["y_star"] = flow_to_json(net, err.y_star);
    ojson candidates = ojson::array();
    for (const auto& per_terminal : err.certificate.candidate_paths) {
        ojson lists = ojson::array();
        for (const auto& path : per_terminal) {
            ojson p = ojson::array();
            for (int a : path) p.push_back(net.arc(a).id);
            lists.push_back(std::move(p));
        }
        candidates.push_back(std::move(lists));
    }
    j["candidate_paths"] = std::move(candidates);
    ojson entries = ojson::array();
    for (const SsufEnumerationEntry& entry : err.certificate.entries) {
        ojson e;
        e["choice"] = entry.path_choice;
        e["witness_arc"] = entry.witness_arc >= 0 ? net.arc(entry.witness_arc).id : "";
        e["deviation"] = rat_to_string(entry.deviation_at_witness);
        entries.push_back(std::move(e));
    }
    j["assignments"] = std::move(entries);
    return j;
}

inline ojson build_ring_counterexample_report(const RingInstanceDoc& instance_with_x,
                                              const Rat& lambda, const Rat& alpha,
                                              const RingRoundingNoSolutionError& err) {
    ojson j;
    j["kind"] = "ring-no-solution";
    j["instance"] = instance_to_json(instance_with_x);
    j["lambda"] = rat_to_string(lambda);
    j["alpha"] = rat_to_string(alpha);
    ojson ystar = ojson::array();
    for (const Rat& s : err.y_star.split) ystar.push_back(rat_to_string(s));
    j["y_star"] = std::move(ystar);
    ojson entries = ojson::array();
    for (const RingEnumerationEntry& entry : err.certificate.entries) {
        ojson e;
        e["choice"] = entry.choice;
        e["witness_edge"] = entry.witness_edge;
        e["deviation"] = rat_to_string(entry.deviation_at_witness);
        entries.push_back(std::move(e));
    }
    j["assignments"] = std::move(entries);
    return j;
}

}  // namespace unsplit
