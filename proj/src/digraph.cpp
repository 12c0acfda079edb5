#include "dynsync/digraph.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

namespace dynsync {

IdSet make_id_set(std::vector<NodeId> ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

IdSet set_union(const IdSet& a, const IdSet& b) {
    IdSet out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool contains(const IdSet& s, NodeId id) { return std::binary_search(s.begin(), s.end(), id); }

Digraph::Digraph(std::vector<NodeId> nodes) : nodes_(make_id_set(std::move(nodes))) {
    if (nodes_.size() > kMaxNodes) {
        throw std::invalid_argument("digraph: at most " + std::to_string(kMaxNodes) + " nodes supported");
    }
    out_.resize(nodes_.size());
    in_.resize(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        out_[i] = Mask{1} << i;
        in_[i] = Mask{1} << i;
    }
}

Digraph Digraph::complete(std::vector<NodeId> nodes) {
    Digraph g(std::move(nodes));
    const Mask all = g.all_mask();
    std::fill(g.out_.begin(), g.out_.end(), all);
    std::fill(g.in_.begin(), g.in_.end(), all);
    return g;
}

Digraph Digraph::out_star(std::vector<NodeId> nodes, NodeId hub) {
    Digraph g(std::move(nodes));
    const std::size_t h = g.index_of(hub);
    for (std::size_t v = 0; v < g.size(); ++v) g.add_edge_at(h, v);
    return g;
}

Mask Digraph::all_mask() const {
    return nodes_.size() == kMaxNodes ? ~Mask{0} : (Mask{1} << nodes_.size()) - 1;
}

bool Digraph::has_node(NodeId id) const { return std::binary_search(nodes_.begin(), nodes_.end(), id); }

std::size_t Digraph::index_of(NodeId id) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id);
    if (it == nodes_.end() || *it != id) {
        throw std::out_of_range("digraph: unknown node " + std::to_string(id.value));
    }
    return static_cast<std::size_t>(it - nodes_.begin());
}

void Digraph::add_edge(NodeId src, NodeId dst) { add_edge_at(index_of(src), index_of(dst)); }

void Digraph::add_edge_at(std::size_t src, std::size_t dst) {
    out_[src] |= Mask{1} << dst;
    in_[dst] |= Mask{1} << src;
}

bool Digraph::has_edge(NodeId src, NodeId dst) const { return has_edge_at(index_of(src), index_of(dst)); }

IdSet Digraph::from_mask(Mask m) const {
    IdSet out;
    while (m != 0) {
        out.push_back(nodes_[static_cast<std::size_t>(std::countr_zero(m))]);
        m &= m - 1;
    }
    return out;
}

IdSet Digraph::in_neighbors(NodeId u) const { return from_mask(in_[index_of(u)]); }
IdSet Digraph::out_neighbors(NodeId u) const { return from_mask(out_[index_of(u)]); }

std::vector<std::pair<NodeId, NodeId>> Digraph::edges() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    for (std::size_t u = 0; u < size(); ++u) {
        for (NodeId v : from_mask(out_[u])) out.emplace_back(nodes_[u], v);
    }
    return out;
}

std::size_t Digraph::edge_count() const {
    std::size_t count = 0;
    for (Mask m : out_) count += static_cast<std::size_t>(std::popcount(m));
    return count;
}

bool Digraph::is_complete() const {
    const Mask all = all_mask();
    return std::all_of(out_.begin(), out_.end(), [all](Mask m) { return m == all; });
}

Digraph Digraph::transpose() const {
    Digraph t = *this;
    std::swap(t.out_, t.in_);
    return t;
}

Digraph product(const Digraph& g, const Digraph& h) {
    if (g.node_vector() != h.node_vector()) throw std::invalid_argument("product: node sets differ");
    Digraph out(g.node_vector());
    for (std::size_t u = 0; u < g.size(); ++u) {
        Mask reach = 0;
        Mask via = g.out_mask(u);
        while (via != 0) {
            reach |= h.out_mask(static_cast<std::size_t>(std::countr_zero(via)));
            via &= via - 1;
        }
        while (reach != 0) {
            out.add_edge_at(u, static_cast<std::size_t>(std::countr_zero(reach)));
            reach &= reach - 1;
        }
    }
    return out;
}

namespace {

void check_connectivity_args(const Digraph& g, int c) {
    const auto n = static_cast<int>(g.size());
    if (n < 2) throw std::invalid_argument("c-connectivity: graph needs at least two nodes");
    if (c < 1 || c >= n) throw std::invalid_argument("c-connectivity: c must satisfy 1 <= c < n");
    if (g.size() > kMaxEnumerationNodes) {
        throw std::invalid_argument("c-connectivity: subset enumeration limited to " +
                                    std::to_string(kMaxEnumerationNodes) + " nodes");
    }
}

// Shared subset sweep; `neighbours(i)` gives the relevant neighbourhood of node i.
template <typename Neighbours>
bool sweep_subsets(const Digraph& g, int c, Neighbours neighbours) {
    const std::size_t n = g.size();
    const Mask all = g.all_mask();
    // S = V is skipped: its bound min(c, 0) = 0 is vacuous.
    for (Mask s = 1; s < all; ++s) {
        Mask gamma = 0;
        Mask rest = s;
        while (rest != 0) {
            gamma |= neighbours(static_cast<std::size_t>(std::countr_zero(rest)));
            rest &= rest - 1;
        }
        const int outside = std::popcount(gamma & ~s);
        const int complement = static_cast<int>(n) - std::popcount(s);
        if (outside < std::min(c, complement)) return false;
    }
    return true;
}

Mask reach_from(const Digraph& g, std::size_t start, bool forward) {
    Mask seen = Mask{1} << start;
    Mask frontier = seen;
    while (frontier != 0) {
        Mask next = 0;
        while (frontier != 0) {
            const auto i = static_cast<std::size_t>(std::countr_zero(frontier));
            next |= forward ? g.out_mask(i) : g.in_mask(i);
            frontier &= frontier - 1;
        }
        frontier = next & ~seen;
        seen |= next;
    }
    return seen;
}

} // namespace

bool is_c_in_connected(const Digraph& g, int c) {
    check_connectivity_args(g, c);
    return sweep_subsets(g, c, [&g](std::size_t i) { return g.in_mask(i); });
}

bool is_c_out_connected(const Digraph& g, int c) {
    check_connectivity_args(g, c);
    return sweep_subsets(g, c, [&g](std::size_t i) { return g.out_mask(i); });
}

bool is_strongly_connected(const Digraph& g) {
    if (g.size() <= 1) return true;
    const Mask all = g.all_mask();
    return reach_from(g, 0, true) == all && reach_from(g, 0, false) == all;
}

} // namespace dynsync
