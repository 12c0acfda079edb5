#include "dynsync/engine.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

#include "dynsync/rng.hpp"

namespace dynsync {

Round Scenario::s_max() const {
    Round m = 0;
    for (const auto& [id, s] : starts) m = std::max(m, s);
    return m;
}

std::uint64_t Scenario::graph_seed() const { return graph.seed ? *graph.seed : graph_seed_for(master_seed); }

DynamicGraphSource Scenario::graph_source() const { return DynamicGraphSource(nodes, graph.params, graph_seed()); }

void Scenario::validate() const {
    auto fail = [](const std::string& what) { throw std::invalid_argument("scenario: " + what); };
    if (nodes.empty()) fail("no nodes");
    if (nodes.size() > kMaxNodes) fail("at most " + std::to_string(kMaxNodes) + " nodes");
    if (!std::is_sorted(nodes.begin(), nodes.end()) || std::adjacent_find(nodes.begin(), nodes.end()) != nodes.end()) {
        fail("node ids must be distinct and sorted");
    }
    if (starts.size() != nodes.size()) fail("every node needs exactly one start round");
    for (NodeId id : nodes) {
        auto it = starts.find(id);
        if (it == starts.end()) fail("node " + std::to_string(id.value) + " has no start round");
        if (it->second < 1) fail("start round of node " + std::to_string(id.value) + " must be >= 1");
    }
    if (horizon < s_max()) fail("horizon " + std::to_string(horizon) + " is below s_max " + std::to_string(s_max()));
    params.validate();
    if (params.algorithm == Algorithm::A3 && nodes.size() >= 2 && params.c >= static_cast<int>(nodes.size())) {
        fail("A3 needs c < n");
    }
    (void)graph_source();
}

bool equivalent(const Scenario& a, const Scenario& b) {
    Scenario x = a;
    Scenario y = b;
    x.graph.seed = a.graph_seed();
    y.graph.seed = b.graph_seed();
    return x == y;
}

Trace::Trace(Scenario scenario, std::vector<RoundRecord> rounds)
    : scenario_(std::move(scenario)), rounds_(std::move(rounds)) {
    starts_.reserve(scenario_.nodes.size());
    for (NodeId id : scenario_.nodes) starts_.push_back(scenario_.starts.at(id));
}

std::size_t Trace::index_of(NodeId id) const {
    auto it = std::lower_bound(scenario_.nodes.begin(), scenario_.nodes.end(), id);
    if (it == scenario_.nodes.end() || *it != id) throw std::out_of_range("trace: unknown node");
    return static_cast<std::size_t>(it - scenario_.nodes.begin());
}

const RoundRecord& Trace::round(Round t) const {
    if (t < 1 || t > static_cast<Round>(rounds_.size())) throw std::out_of_range("trace: round out of range");
    return rounds_[static_cast<std::size_t>(t - 1)];
}

const NodeState* Trace::state_at(std::size_t node, Round t) const {
    if (t < starts_[node] || t < 1) return nullptr;
    const auto H = static_cast<Round>(rounds_.size());
    if (t <= H) {
        const auto& rec = rounds_[static_cast<std::size_t>(t - 1)].nodes[node];
        return rec.before ? &*rec.before : nullptr;
    }
    if (t == H + 1 && H >= 1) {
        const auto& rec = rounds_.back().nodes[node];
        return rec.after ? &*rec.after : nullptr;
    }
    return nullptr;
}

std::vector<Message> Trace::inbox(std::size_t node, Round t) const {
    const RoundRecord& rec = round(t);
    std::vector<Message> out;
    for (Mask m = rec.graph.in_mask(node); m != 0; m &= m - 1) {
        out.push_back(rec.nodes[static_cast<std::size_t>(std::countr_zero(m))].sent);
    }
    return out;
}

std::vector<std::uint8_t> Trace::inbox_transcript(std::size_t node, Round t_end) const {
    std::vector<std::uint8_t> bytes;
    for (Round t = 1; t <= t_end; ++t) {
        const auto msgs = inbox(node, t);
        put_varint(msgs.size(), bytes);
        for (const Message& m : msgs) {
            const auto enc = encode(m);
            put_varint(enc.size(), bytes);
            bytes.insert(bytes.end(), enc.begin(), enc.end());
        }
    }
    return bytes;
}

std::vector<std::pair<NodeId, NodeId>> Trace::active_edges(Round t) const {
    std::vector<std::pair<NodeId, NodeId>> out;
    for (auto [u, v] : round(t).graph.edges()) {
        if (active(index_of(u), t)) out.emplace_back(u, v);
    }
    return out;
}

Digraph Trace::active_subgraph(Round t) const {
    const RoundRecord& rec = round(t);
    Digraph g(scenario_.nodes);
    for (std::size_t u = 0; u < node_count(); ++u) {
        if (!active(u, t)) continue;
        for (Mask m = rec.graph.out_mask(u); m != 0; m &= m - 1) {
            g.add_edge_at(u, static_cast<std::size_t>(std::countr_zero(m)));
        }
    }
    return g;
}

std::size_t Trace::max_msg_bytes() const {
    std::size_t best = 0;
    for (const auto& rec : rounds_) {
        for (const auto& nr : rec.nodes) {
            if (nr.active) best = std::max(best, nr.msg_bytes);
        }
    }
    return best;
}

Trace run(const Scenario& scenario) {
    scenario.validate();
    const DynamicGraphSource source = scenario.graph_source();
    const std::size_t n = scenario.nodes.size();
    const ProtocolParams& params = scenario.params;

    std::vector<std::optional<NodeState>> state(n);
    std::vector<Round> start(n);
    for (std::size_t i = 0; i < n; ++i) start[i] = scenario.starts.at(scenario.nodes[i]);

    std::vector<RoundRecord> rounds;
    rounds.reserve(static_cast<std::size_t>(scenario.horizon));
    for (Round t = 1; t <= scenario.horizon; ++t) {
        RoundRecord rec;
        rec.t = t;
        rec.graph = source.at(t);
        rec.nodes.resize(n);

        // Phase 1: start signals and emissions.
        for (std::size_t i = 0; i < n; ++i) {
            NodeRound& nr = rec.nodes[i];
            if (t == start[i]) {
                RngStream rng = rng_stream_for(scenario.master_seed, scenario.nodes[i]);
                state[i] = init(scenario.nodes[i], t, params, rng);
            }
            nr.active = state[i].has_value();
            if (nr.active) {
                nr.before = state[i];
                nr.sent = emit(*state[i], params);
            } else {
                nr.sent = NullMessage{};
            }
            nr.msg_bytes = encoded_size(nr.sent);
        }

        // Phase 2: delivery along G(t) and local steps.
        for (std::size_t i = 0; i < n; ++i) {
            NodeRound& nr = rec.nodes[i];
            if (!nr.active) continue;
            if (scenario.terminate_on_detect && state[i]->synch) {
                nr.after = state[i];
                continue;
            }
            std::vector<Message> inbox;
            for (Mask m = rec.graph.in_mask(i); m != 0; m &= m - 1) {
                inbox.push_back(rec.nodes[static_cast<std::size_t>(std::countr_zero(m))].sent);
            }
            state[i] = step(*state[i], inbox, params);
            nr.after = state[i];
        }
        rounds.push_back(std::move(rec));
    }
    return Trace(scenario, std::move(rounds));
}

} // namespace dynsync
