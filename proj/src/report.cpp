#include "dynsync/report.hpp"

#include <cstdio>

#include "dynsync/scenario_file.hpp"

namespace dynsync {

using ojson = nlohmann::ordered_json;

namespace {

ojson ids(const IdSet& s) {
    ojson a = ojson::array();
    for (NodeId id : s) a.push_back(id.value);
    return a;
}

ojson exponents(const EstimatorVector& v) {
    ojson a = ojson::array();
    for (RoundedExp e : v.entries) a.push_back(e.exponent);
    return a;
}

ojson state_json(const NodeState& s, Algorithm a) {
    ojson j;
    j["r"] = s.r;
    j["synch"] = s.synch;
    if (a == Algorithm::A3 || a == Algorithm::A5) j["ho"] = ids(s.ho);
    if (a == Algorithm::A5) j["ok"] = ids(s.ok);
    if (a == Algorithm::A4) {
        j["y"] = exponents(s.y);
        j["n_hat"] = s.n_hat;
    }
    return j;
}

ojson message_json(const Message& m) {
    ojson j;
    std::visit(
        [&j](const auto& msg) {
            using M = std::decay_t<decltype(msg)>;
            if constexpr (std::is_same_v<M, NullMessage>) {
                j["type"] = "null";
            } else {
                j["type"] = std::is_same_v<M, CounterMessage>  ? "A1"
                            : std::is_same_v<M, DetectMessage> ? "A2"
                            : std::is_same_v<M, HeardOfMessage> ? "A3"
                            : std::is_same_v<M, SketchMessage>  ? "A4"
                                                                : "A5";
                j["r"] = msg.r;
            }
            if constexpr (std::is_same_v<M, HeardOfMessage>) j["ho"] = ids(msg.ho);
            if constexpr (std::is_same_v<M, SketchMessage>) j["y"] = exponents(msg.y);
            if constexpr (std::is_same_v<M, ReadyMessage>) {
                j["ho"] = ids(msg.ho);
                j["ok"] = ids(msg.ok);
            }
        },
        m);
    return j;
}

ojson edge_list(const Digraph& g, const Trace* only_active_from, Round t) {
    ojson a = ojson::array();
    for (auto [u, v] : g.edges()) {
        if (only_active_from && !only_active_from->active(only_active_from->index_of(u), t)) continue;
        a.push_back(ojson::array({u.value, v.value}));
    }
    return a;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

std::string fixed6(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

std::string number(double x) {
    // Integral values print without a fraction.
    if (x == static_cast<double>(static_cast<long long>(x))) return std::to_string(static_cast<long long>(x));
    return fixed6(x);
}

std::string run_status(const RunSummary& r) {
    if (!r.error.empty()) return "error";
    Status worst = Status::holds;
    for (const Verdict& v : r.verdicts) {
        if (v.status == Status::violated) return "violated";
        if (v.status == Status::inconclusive) worst = Status::inconclusive;
    }
    return std::string(to_string(worst));
}

} // namespace

ojson trace_to_json(const Trace& trace) {
    const Algorithm a = trace.scenario().params.algorithm;
    ojson doc;
    doc["scenario"] = scenario_to_json(trace.scenario());
    ojson rounds = ojson::array();
    for (Round t = 1; t <= trace.horizon(); ++t) {
        const RoundRecord& rec = trace.round(t);
        ojson r;
        r["t"] = t;
        r["edges"] = edge_list(rec.graph, nullptr, t);
        r["active_edges"] = edge_list(rec.graph, &trace, t);
        ojson nodes = ojson::array();
        for (std::size_t i = 0; i < rec.nodes.size(); ++i) {
            const NodeRound& nr = rec.nodes[i];
            ojson n;
            n["id"] = trace.node_ids()[i].value;
            n["active"] = nr.active;
            if (nr.before) n["before"] = state_json(*nr.before, a);
            n["sent"] = message_json(nr.sent);
            if (nr.after) n["after"] = state_json(*nr.after, a);
            n["msg_bytes"] = nr.msg_bytes;
            nodes.push_back(std::move(n));
        }
        r["nodes"] = std::move(nodes);
        rounds.push_back(std::move(r));
    }
    doc["rounds"] = std::move(rounds);
    return doc;
}

std::string trace_json_string(const Trace& trace) { return trace_to_json(trace).dump(1); }

void write_trace_csv(const Trace& trace, std::ostream& out) {
    const Algorithm a = trace.scenario().params.algorithm;
    out << kTraceCsvHeader << '\n';
    for (Round t = 1; t <= trace.horizon(); ++t) {
        const RoundRecord& rec = trace.round(t);
        for (std::size_t i = 0; i < rec.nodes.size(); ++i) {
            const NodeRound& nr = rec.nodes[i];
            out << t << ',' << trace.node_ids()[i].value << ',';
            if (nr.after) {
                const NodeState& s = *nr.after;
                out << s.r << ',' << (s.synch ? 1 : 0) << ',';
                if (a == Algorithm::A3 || a == Algorithm::A5) out << s.ho.size();
                out << ',';
                if (a == Algorithm::A5) out << s.ok.size();
                out << ',';
                if (a == Algorithm::A4) out << fixed6(s.n_hat);
                out << ',';
            } else {
                out << ",,,,,";
            }
            out << nr.msg_bytes << '\n';
        }
    }
}

ojson verdict_to_json(const Verdict& v) {
    ojson j;
    j["property"] = v.property;
    j["status"] = std::string(to_string(v.status));
    if (v.witness) {
        ojson w;
        w["round"] = v.witness->round;
        if (v.witness->node) w["node"] = v.witness->node->value;
        if (v.witness->other) w["other"] = v.witness->other->value;
        w["detail"] = v.witness->detail;
        j["witness"] = w;
    }
    ojson m = ojson::object();
    for (const auto& [k, x] : v.measured) m[k] = x;
    j["measured"] = m;
    if (!v.note.empty()) j["note"] = v.note;
    return j;
}

void write_verdicts_csv(std::span<const Verdict> verdicts, std::ostream& out) {
    out << kVerdictCsvHeader << '\n';
    for (const Verdict& v : verdicts) {
        std::string measured;
        for (const auto& [k, x] : v.measured) {
            if (!measured.empty()) measured += ';';
            measured += k + "=" + number(x);
        }
        out << csv_field(v.property) << ',' << to_string(v.status) << ',';
        if (v.witness) {
            out << v.witness->round << ',';
            if (v.witness->node) out << v.witness->node->value;
            out << ',';
            if (v.witness->other) out << v.witness->other->value;
        } else {
            out << ",,";
        }
        std::string note = v.note;
        if (v.witness && !v.witness->detail.empty()) note = note.empty() ? v.witness->detail : note + "; " + v.witness->detail;
        out << ',' << csv_field(measured) << ',' << csv_field(note) << '\n';
    }
}

double failure_fraction(std::span<const RunSummary> runs) {
    if (runs.empty()) return 0.0;
    std::size_t failures = 0;
    for (const RunSummary& r : runs) failures += r.failed() ? 1 : 0;
    return static_cast<double>(failures) / static_cast<double>(runs.size());
}

void write_batch_csv(std::span<const RunSummary> runs, std::ostream& out) {
    out << kBatchCsvHeader << '\n';
    std::size_t failures = 0;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const RunSummary& r = runs[i];
        out << i << ',' << r.seed << ',';
        if (r.t_synch) out << *r.t_synch;
        out << ',';
        if (r.common_detection) out << *r.common_detection;
        out << ',' << (r.simultaneous ? 1 : 0) << ',' << r.max_msg_bytes << ',' << run_status(r) << ','
            << (r.failed() ? 1 : 0) << '\n';
        failures += r.failed() ? 1 : 0;
    }
    out << "failure_fraction," << fixed6(failure_fraction(runs)) << ',' << failures << ',' << runs.size() << '\n';
}

} // namespace dynsync
