#pragma once

#include <cstdint>
#include <random>

#include "dynsync/node_id.hpp"

namespace dynsync {

using RngStream = std::mt19937_64;

// Domain tags keep the graph, protocol, schedule and batch streams apart.
enum class SeedDomain : std::uint64_t {
    protocol = 0x70726f746f636f6cULL,
    graph = 0x6772617068000000ULL,
    schedule = 0x7363686564756c65ULL,
    batch = 0x6261746368000000ULL,
};

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) {
    return mix64(mix64(mix64(mix64(base) ^ a) ^ b) ^ c);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, SeedDomain d, std::uint64_t a = 0, std::uint64_t b = 0) {
    return derive_seed(base, static_cast<std::uint64_t>(d), a, b);
}

// Private stream of one node. Depends only on (master seed, node id).
inline RngStream rng_stream_for(std::uint64_t master_seed, NodeId node) {
    return RngStream(derive_seed(master_seed, SeedDomain::protocol, node.value));
}

// Seed of the graph generator when the scenario does not pin one.
inline std::uint64_t graph_seed_for(std::uint64_t master_seed) {
    return derive_seed(master_seed, SeedDomain::graph);
}

// Uniform double in (0, 1], 53 bits. Fixed arithmetic so draws are
// reproducible independent of the standard library's distributions.
inline double uniform_open_closed(RngStream& rng) {
    return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
}

} // namespace dynsync
