#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <vector>

namespace dynsync {

// Opaque node identifier. Only equality and ordering are meaningful.
struct NodeId {
    std::uint32_t value = 0;

    friend constexpr auto operator<=>(NodeId, NodeId) = default;
};

// Round index. Rounds are numbered from 1.
using Round = std::int64_t;

// Sorted, duplicate-free set of identifiers (HO / OK sets, node sets).
using IdSet = std::vector<NodeId>;

IdSet make_id_set(std::vector<NodeId> ids);
IdSet set_union(const IdSet& a, const IdSet& b);
bool contains(const IdSet& s, NodeId id);

} // namespace dynsync

template <>
struct std::hash<dynsync::NodeId> {
    std::size_t operator()(dynsync::NodeId id) const noexcept { return std::hash<std::uint32_t>{}(id.value); }
};
