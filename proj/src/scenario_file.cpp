#include "dynsync/scenario_file.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <set>

#include "dynsync/rng.hpp"

namespace dynsync {

using nlohmann::json;

namespace {

std::string join(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
}

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw SchemaError(where.empty() ? "<root>" : where, "expected an object");
    for (const auto& [key, value] : obj.items()) {
        const bool ok = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
        if (!ok) throw SchemaError(join(where, key), "unknown key");
    }
}

template <typename T>
T get_number(const json& obj, const std::string& key, const std::string& where) {
    const json& v = obj.at(key);
    if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw SchemaError(join(where, key), "expected a number");
    } else {
        if (!v.is_number_integer()) throw SchemaError(join(where, key), "expected an integer");
        if constexpr (std::is_unsigned_v<T>) {
            if (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0) {
                throw SchemaError(join(where, key), "expected a non-negative integer");
            }
        }
    }
    return v.get<T>();
}

template <typename T>
T number_or(const json& obj, const std::string& key, const std::string& where, T fallback) {
    return obj.contains(key) ? get_number<T>(obj, key, where) : fallback;
}

bool is_non_negative_integer(const json& v) {
    return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

NodeId get_id(const json& v, const std::string& where) {
    if (!is_non_negative_integer(v) || v.get<std::uint64_t>() > std::numeric_limits<std::uint32_t>::max()) {
        throw SchemaError(where, "expected a node id (unsigned 32-bit integer)");
    }
    return NodeId{v.get<std::uint32_t>()};
}

std::vector<NodeId> parse_nodes(const json& v) {
    std::vector<NodeId> ids;
    if (v.is_number_integer()) {
        if (!is_non_negative_integer(v)) throw SchemaError("nodes", "count must lie in [1, 64]");
        const auto n = v.get<std::uint64_t>();
        if (n < 1 || n > kMaxNodes) throw SchemaError("nodes", "count must lie in [1, 64]");
        for (std::uint32_t i = 1; i <= n; ++i) ids.push_back(NodeId{i});
        return ids;
    }
    if (!v.is_array() || v.empty()) throw SchemaError("nodes", "expected a count or a non-empty id list");
    for (std::size_t i = 0; i < v.size(); ++i) ids.push_back(get_id(v[i], "nodes[" + std::to_string(i) + "]"));
    IdSet set = make_id_set(ids);
    if (set.size() != ids.size()) throw SchemaError("nodes", "duplicate node id");
    return set;
}

std::map<NodeId, Round> parse_starts(const json& v, const std::vector<NodeId>& nodes, std::uint64_t master_seed) {
    std::map<NodeId, Round> starts;
    if (v.is_string()) {
        if (v.get<std::string>() != "all-at-1") throw SchemaError("starts", "unknown start pattern");
        for (NodeId id : nodes) starts[id] = 1;
        return starts;
    }
    if (!v.is_object() || v.size() != 1) {
        throw SchemaError("starts", "expected \"all-at-1\" or one of {staggered, random, explicit}");
    }
    if (v.contains("staggered")) {
        const auto k = get_number<std::int64_t>(v, "staggered", "starts");
        if (k < 0) throw SchemaError("starts.staggered", "must be >= 0");
        for (std::size_t i = 0; i < nodes.size(); ++i) starts[nodes[i]] = 1 + k * static_cast<Round>(i);
    } else if (v.contains("random")) {
        const json& r = v.at("random");
        reject_unknown(r, "starts.random", {"max_s", "seed"});
        if (!r.contains("max_s")) throw SchemaError("starts.random.max_s", "missing");
        const auto max_s = get_number<std::int64_t>(r, "max_s", "starts.random");
        if (max_s < 1) throw SchemaError("starts.random.max_s", "must be >= 1");
        const auto seed = number_or<std::uint64_t>(r, "seed", "starts.random",
                                                   derive_seed(master_seed, SeedDomain::schedule));
        RngStream rng(seed);
        std::uniform_int_distribution<Round> pick(1, max_s);
        for (NodeId id : nodes) starts[id] = pick(rng);
    } else if (v.contains("explicit")) {
        const json& m = v.at("explicit");
        if (!m.is_object()) throw SchemaError("starts.explicit", "expected an object id -> round");
        for (const auto& [key, value] : m.items()) {
            const std::string where = "starts.explicit." + key;
            std::uint32_t id = 0;
            try {
                std::size_t used = 0;
                const unsigned long parsed = std::stoul(key, &used);
                if (used != key.size() || parsed > std::numeric_limits<std::uint32_t>::max()) throw std::exception();
                id = static_cast<std::uint32_t>(parsed);
            } catch (...) {
                throw SchemaError(where, "key is not a node id");
            }
            if (!contains(nodes, NodeId{id})) throw SchemaError(where, "not a declared node");
            if (!value.is_number_integer()) throw SchemaError(where, "expected an integer round");
            starts[NodeId{id}] = value.get<Round>();
        }
        for (NodeId id : nodes) {
            if (!starts.contains(id)) throw SchemaError("starts.explicit", "node " + std::to_string(id.value) + " missing");
        }
    } else {
        throw SchemaError("starts." + v.begin().key(), "unknown start pattern");
    }
    return starts;
}

GraphSpec parse_graph(const json& g) {
    if (!g.is_object() || !g.contains("kind") || !g.at("kind").is_string()) {
        throw SchemaError("graph.kind", "missing or not a string");
    }
    GraphSpec spec;
    AdversaryParams& p = spec.params;
    try {
        p.kind = graph_kind_from_string(g.at("kind").get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw SchemaError("graph.kind", e.what());
    }
    const std::string w = "graph";
    switch (p.kind) {
    case GraphKind::constant_complete: reject_unknown(g, w, {"kind", "seed"}); break;
    case GraphKind::T_complete_random: reject_unknown(g, w, {"kind", "seed", "T", "density"}); break;
    case GraphKind::cT_cycle: reject_unknown(g, w, {"kind", "seed", "c", "T", "density"}); break;
    case GraphKind::eventually_connected_sparse:
        reject_unknown(g, w, {"kind", "seed", "quiet_max", "burst_len", "density"});
        break;
    case GraphKind::star_alternation: reject_unknown(g, w, {"kind", "seed", "hub", "lead_idle"}); break;
    case GraphKind::kw_vs_kuw: reject_unknown(g, w, {"kind", "seed", "outsider", "t0"}); break;
    }
    p.T = number_or<int>(g, "T", w, p.T);
    p.c = number_or<int>(g, "c", w, p.c);
    p.density = number_or<double>(g, "density", w, p.kind == GraphKind::T_complete_random ? 0.2 : 0.0);
    p.quiet_max = number_or<int>(g, "quiet_max", w, p.quiet_max);
    p.burst_len = number_or<int>(g, "burst_len", w, p.burst_len);
    p.lead_idle = number_or<int>(g, "lead_idle", w, p.lead_idle);
    p.t0 = number_or<Round>(g, "t0", w, p.t0);
    if (g.contains("hub")) p.hub = get_id(g.at("hub"), "graph.hub");
    if (g.contains("outsider")) p.outsider = get_id(g.at("outsider"), "graph.outsider");
    if (g.contains("seed")) spec.seed = get_number<std::uint64_t>(g, "seed", w);
    return spec;
}

ProtocolParams parse_algorithm(const json& a) {
    if (!a.is_object() || !a.contains("name") || !a.at("name").is_string()) {
        throw SchemaError("algorithm.name", "missing or not a string");
    }
    ProtocolParams p;
    try {
        p.algorithm = algorithm_from_string(a.at("name").get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw SchemaError("algorithm.name", e.what());
    }
    const std::string w = "algorithm";
    switch (p.algorithm) {
    case Algorithm::A1: reject_unknown(a, w, {"name"}); break;
    case Algorithm::A2:
        reject_unknown(a, w, {"name", "T"});
        if (!a.contains("T")) throw SchemaError("algorithm.T", "required for A2");
        break;
    case Algorithm::A3:
        reject_unknown(a, w, {"name", "T", "c"});
        if (!a.contains("T") || !a.contains("c")) throw SchemaError("algorithm", "A3 requires T and c");
        break;
    case Algorithm::A4:
        reject_unknown(a, w, {"name", "N", "eta", "ell"});
        if (!a.contains("N") || !a.contains("eta")) throw SchemaError("algorithm", "A4 requires N and eta");
        break;
    case Algorithm::A5:
        reject_unknown(a, w, {"name", "n"});
        if (!a.contains("n")) throw SchemaError("algorithm.n", "required for A5");
        break;
    }
    p.T = number_or<int>(a, "T", w, p.T);
    p.c = number_or<int>(a, "c", w, p.c);
    p.N = number_or<int>(a, "N", w, p.N);
    p.eta = number_or<double>(a, "eta", w, p.eta);
    p.n_exact = number_or<int>(a, "n", w, p.n_exact);
    if (a.contains("ell")) p.ell_override = get_number<int>(a, "ell", w);
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        throw SchemaError("algorithm", e.what());
    }
    return p;
}

std::vector<std::string> default_checks(Algorithm a) {
    switch (a) {
    case Algorithm::A1: return {"synchronization"};
    case Algorithm::A5: return {"synchronization", "detection"};
    default: return {"synchronization", "detection", "simultaneity", "bound"};
    }
}

ConnectivityClass parse_class(const json& c) {
    reject_unknown(c, "declared_class", {"kind", "c", "T"});
    if (!c.contains("kind") || !c.at("kind").is_string()) throw SchemaError("declared_class.kind", "missing");
    ConnectivityClass cls;
    const auto kind = c.at("kind").get<std::string>();
    if (kind == "T-complete") {
        cls.kind = WindowClass::T_complete;
    } else if (kind == "cT-in-connected") {
        cls.kind = WindowClass::cT_in_connected;
    } else {
        throw SchemaError("declared_class.kind", "expected \"T-complete\" or \"cT-in-connected\"");
    }
    cls.T = number_or<int>(c, "T", "declared_class", 1);
    cls.c = number_or<int>(c, "c", "declared_class", 1);
    if (cls.T < 1 || cls.c < 1) throw SchemaError("declared_class", "c and T must be >= 1");
    return cls;
}

} // namespace

Round default_horizon(std::size_t n, Round s_max) { return 4 * static_cast<Round>(n) + s_max + 10; }

std::optional<ConnectivityClass> natural_class(const AdversaryParams& p) {
    switch (p.kind) {
    case GraphKind::constant_complete: return ConnectivityClass{WindowClass::T_complete, 1, 1};
    case GraphKind::T_complete_random: return ConnectivityClass{WindowClass::T_complete, 1, p.T};
    case GraphKind::cT_cycle: return ConnectivityClass{WindowClass::cT_in_connected, p.c, p.T};
    default: return std::nullopt;
    }
}

namespace {

ScenarioFile parse_document(const json& doc) {
    reject_unknown(doc, "",
                   {"nodes", "starts", "graph", "algorithm", "horizon", "seed", "checks", "output",
                    "terminate_on_detect", "declared_class", "batch", "lemma"});
    for (const char* key : {"nodes", "graph", "algorithm"}) {
        if (!doc.contains(key)) throw SchemaError(key, "missing");
    }
    ScenarioFile file;
    Scenario& s = file.scenario;
    s.master_seed = number_or<std::uint64_t>(doc, "seed", "", 0);
    s.nodes = parse_nodes(doc.at("nodes"));
    s.starts = parse_starts(doc.contains("starts") ? doc.at("starts") : json("all-at-1"), s.nodes, s.master_seed);
    s.graph = parse_graph(doc.at("graph"));
    s.params = parse_algorithm(doc.at("algorithm"));
    s.horizon = doc.contains("horizon") ? get_number<Round>(doc, "horizon", "")
                                        : default_horizon(s.nodes.size(), s.s_max());
    if (s.horizon < s.s_max()) {
        throw SchemaError("horizon", "horizon " + std::to_string(s.horizon) + " is below the last start round " +
                                         std::to_string(s.s_max()));
    }
    if (s.params.algorithm == Algorithm::A3 && s.nodes.size() >= 2 &&
        s.params.c >= static_cast<int>(s.nodes.size())) {
        throw SchemaError("algorithm.c", "must be smaller than the number of nodes");
    }
    if (doc.contains("terminate_on_detect")) {
        if (!doc.at("terminate_on_detect").is_boolean()) throw SchemaError("terminate_on_detect", "expected a boolean");
        s.terminate_on_detect = doc.at("terminate_on_detect").get<bool>();
    }

    if (doc.contains("checks")) {
        const json& c = doc.at("checks");
        if (!c.is_array()) throw SchemaError("checks", "expected a list of names");
        for (std::size_t i = 0; i < c.size(); ++i) {
            const std::string where = "checks[" + std::to_string(i) + "]";
            if (!c[i].is_string() || !is_known_check(c[i].get<std::string>())) {
                throw SchemaError(where, "unknown check");
            }
            file.plan.checks.push_back(c[i].get<std::string>());
        }
    } else {
        file.plan.checks = default_checks(s.params.algorithm);
    }
    if (doc.contains("lemma")) {
        const json& l = doc.at("lemma");
        reject_unknown(l, "lemma", {"interval_cap", "full_sweep"});
        file.plan.lemma.interval_cap = number_or<Round>(l, "interval_cap", "lemma", 12);
        if (l.contains("full_sweep")) {
            if (!l.at("full_sweep").is_boolean()) throw SchemaError("lemma.full_sweep", "expected a boolean");
            file.plan.lemma.full_sweep = l.at("full_sweep").get<bool>();
        }
    }
    if (doc.contains("output")) {
        const json& o = doc.at("output");
        reject_unknown(o, "output", {"dir", "trace", "trace_csv", "summary", "batch"});
        auto str = [&](const char* key, std::string& dst) {
            if (!o.contains(key)) return;
            if (!o.at(key).is_string()) throw SchemaError(std::string("output.") + key, "expected a string");
            dst = o.at(key).get<std::string>();
        };
        str("dir", file.output.dir);
        str("trace", file.output.trace);
        str("trace_csv", file.output.trace_csv);
        str("summary", file.output.summary);
        str("batch", file.output.batch);
    }
    if (doc.contains("batch")) {
        const json& b = doc.at("batch");
        reject_unknown(b, "batch", {"seeds", "parallel", "threshold"});
        file.batch.seeds = number_or<std::size_t>(b, "seeds", "batch", 0);
        file.batch.parallel = number_or<int>(b, "parallel", "batch", 1);
        file.batch.threshold = number_or<double>(b, "threshold", "batch", 0.0);
    }
    if (doc.contains("declared_class")) {
        file.declared_class = parse_class(doc.at("declared_class"));
    } else {
        file.declared_class = natural_class(s.graph.params);
    }
    return file;
}

} // namespace

ScenarioFile parse_scenario(const json& doc) {
    try {
        return parse_document(doc);
    } catch (const json::exception& e) {
        throw SchemaError("<document>", e.what());
    }
}

json read_scenario_document(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("<file>", "cannot open " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError("<file>", e.what());
    }
    return doc;
}

ScenarioFile load_scenario(const std::filesystem::path& path) { return parse_scenario(read_scenario_document(path)); }

nlohmann::ordered_json scenario_to_json(const Scenario& s) {
    nlohmann::ordered_json out;
    nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
    for (NodeId id : s.nodes) nodes.push_back(id.value);
    out["nodes"] = nodes;
    nlohmann::ordered_json starts = nlohmann::ordered_json::object();
    for (const auto& [id, r] : s.starts) starts[std::to_string(id.value)] = r;
    out["starts"] = {{"explicit", starts}};

    const AdversaryParams& p = s.graph.params;
    nlohmann::ordered_json g;
    g["kind"] = std::string(to_string(p.kind));
    switch (p.kind) {
    case GraphKind::constant_complete: break;
    case GraphKind::T_complete_random:
        g["T"] = p.T;
        g["density"] = p.density;
        break;
    case GraphKind::cT_cycle:
        g["c"] = p.c;
        g["T"] = p.T;
        g["density"] = p.density;
        break;
    case GraphKind::eventually_connected_sparse:
        g["quiet_max"] = p.quiet_max;
        g["burst_len"] = p.burst_len;
        g["density"] = p.density;
        break;
    case GraphKind::star_alternation:
        if (p.hub) g["hub"] = p.hub->value;
        g["lead_idle"] = p.lead_idle;
        break;
    case GraphKind::kw_vs_kuw:
        if (p.outsider) g["outsider"] = p.outsider->value;
        g["t0"] = p.t0;
        break;
    }
    g["seed"] = s.graph_seed();
    out["graph"] = g;

    const ProtocolParams& a = s.params;
    nlohmann::ordered_json alg;
    alg["name"] = std::string(to_string(a.algorithm));
    switch (a.algorithm) {
    case Algorithm::A1: break;
    case Algorithm::A2: alg["T"] = a.T; break;
    case Algorithm::A3:
        alg["T"] = a.T;
        alg["c"] = a.c;
        break;
    case Algorithm::A4:
        alg["N"] = a.N;
        alg["eta"] = a.eta;
        if (a.ell_override) alg["ell"] = *a.ell_override;
        break;
    case Algorithm::A5: alg["n"] = a.n_exact; break;
    }
    out["algorithm"] = alg;
    out["horizon"] = s.horizon;
    out["seed"] = s.master_seed;
    out["terminate_on_detect"] = s.terminate_on_detect;
    return out;
}

} // namespace dynsync
