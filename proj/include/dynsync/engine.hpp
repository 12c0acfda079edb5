#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "dynsync/adversary.hpp"
#include "dynsync/digraph.hpp"
#include "dynsync/protocol.hpp"

namespace dynsync {

struct GraphSpec {
    AdversaryParams params;
    // Pinned generator seed. When absent the seed is derived from the
    // scenario's master seed through the graph domain.
    std::optional<std::uint64_t> seed;

    friend bool operator==(const GraphSpec&, const GraphSpec&) = default;
};

struct Scenario {
    std::vector<NodeId> nodes;
    std::map<NodeId, Round> starts;
    GraphSpec graph;
    ProtocolParams params;
    Round horizon = 1;
    std::uint64_t master_seed = 0;
    // Terminating variant: a node's state is frozen after it detects.
    bool terminate_on_detect = false;

    Round s_max() const;
    std::uint64_t graph_seed() const;
    DynamicGraphSource graph_source() const;
    // Throws std::invalid_argument naming the broken invariant.
    void validate() const;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

// Same execution: equal after resolving the graph seed.
bool equivalent(const Scenario& a, const Scenario& b);

struct NodeRound {
    bool active = false;
    std::optional<NodeState> before;  // value at the beginning of the round
    Message sent;                     // Null when passive
    std::optional<NodeState> after;   // value at the end of the round
    std::size_t msg_bytes = 0;
};

struct RoundRecord {
    Round t = 0;
    Digraph graph;
    std::vector<NodeRound> nodes;  // indexed like Trace::node_ids()
};

// Full record of one execution. Everything the verifier needs.
class Trace {
public:
    Trace(Scenario scenario, std::vector<RoundRecord> rounds);

    const Scenario& scenario() const { return scenario_; }
    const std::vector<NodeId>& node_ids() const { return scenario_.nodes; }
    std::size_t node_count() const { return scenario_.nodes.size(); }
    std::size_t index_of(NodeId id) const;
    Round horizon() const { return scenario_.horizon; }
    Round start_of(std::size_t node) const { return starts_[node]; }
    Round s_max() const { return scenario_.s_max(); }

    const RoundRecord& round(Round t) const;
    const Digraph& graph(Round t) const { return round(t).graph; }
    bool active(std::size_t node, Round t) const { return t >= starts_[node]; }

    // x_u(t): value at the beginning of round t, for t in [s_u, H+1];
    // H+1 is the state after the last simulated round. nullptr otherwise.
    const NodeState* state_at(std::size_t node, Round t) const;

    // Messages received by `node` in round t, in node order of its in-neighbours.
    std::vector<Message> inbox(std::size_t node, Round t) const;
    // Concatenated canonical bytes of inboxes over rounds 1..t_end.
    std::vector<std::uint8_t> inbox_transcript(std::size_t node, Round t_end) const;

    // G*(t): edges of G(t) whose source is active at t.
    std::vector<std::pair<NodeId, NodeId>> active_edges(Round t) const;
    // G*(t) as a Digraph. Passive nodes keep their self-loop.
    Digraph active_subgraph(Round t) const;

    std::size_t max_msg_bytes() const;

private:
    Scenario scenario_;
    std::vector<RoundRecord> rounds_;
    std::vector<Round> starts_;
};

Trace run(const Scenario& scenario);

} // namespace dynsync
