#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "dynsync/node_id.hpp"

namespace dynsync {

// Row bitmask over node positions. Caps a graph at 64 nodes.
using Mask = std::uint64_t;
inline constexpr std::size_t kMaxNodes = 64;
// Exhaustive subset enumeration is only attempted up to this size.
inline constexpr std::size_t kMaxEnumerationNodes = 24;

// Directed graph over a fixed, ordered node set. Every node carries a
// self-loop; the self-loops can never be removed.
class Digraph {
public:
    Digraph() = default;
    // Self-loops only (the identity graph I).
    explicit Digraph(std::vector<NodeId> nodes);

    static Digraph identity(std::vector<NodeId> nodes) { return Digraph(std::move(nodes)); }
    static Digraph complete(std::vector<NodeId> nodes);
    // Edges hub -> every node.
    static Digraph out_star(std::vector<NodeId> nodes, NodeId hub);

    std::size_t size() const { return nodes_.size(); }
    std::span<const NodeId> nodes() const { return nodes_; }
    const std::vector<NodeId>& node_vector() const { return nodes_; }
    bool has_node(NodeId id) const;
    std::size_t index_of(NodeId id) const;

    void add_edge(NodeId src, NodeId dst);
    void add_edge_at(std::size_t src, std::size_t dst);
    bool has_edge(NodeId src, NodeId dst) const;
    bool has_edge_at(std::size_t src, std::size_t dst) const { return (out_[src] >> dst) & 1U; }

    Mask out_mask(std::size_t i) const { return out_[i]; }
    Mask in_mask(std::size_t i) const { return in_[i]; }
    Mask all_mask() const;

    IdSet in_neighbors(NodeId u) const;
    IdSet out_neighbors(NodeId u) const;
    std::vector<std::pair<NodeId, NodeId>> edges() const;
    std::size_t edge_count() const;

    bool is_complete() const;
    Digraph transpose() const;

    friend bool operator==(const Digraph&, const Digraph&) = default;

private:
    IdSet from_mask(Mask m) const;

    std::vector<NodeId> nodes_;
    std::vector<Mask> out_;
    std::vector<Mask> in_;
};

// Edge (u,v) iff some w has (u,w) in g and (w,v) in h.
Digraph product(const Digraph& g, const Digraph& h);

// Def. of c in-connectivity: for every non-empty proper subset S,
// |In(S) \ S| >= min(c, |V \ S|). Exhaustive over subsets.
bool is_c_in_connected(const Digraph& g, int c);
bool is_c_out_connected(const Digraph& g, int c);

bool is_strongly_connected(const Digraph& g);

} // namespace dynsync
