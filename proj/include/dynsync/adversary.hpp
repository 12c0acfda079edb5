#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dynsync/digraph.hpp"

namespace dynsync {

enum class GraphKind {
    constant_complete,
    T_complete_random,
    cT_cycle,
    eventually_connected_sparse,
    star_alternation,
    kw_vs_kuw,
};

std::string_view to_string(GraphKind kind);
GraphKind graph_kind_from_string(std::string_view name);

// Parameters of an adversary. Each kind reads only its own fields.
//
//  constant_complete            K_V every round.
//  T_complete_random  T, density
//      Random digraph per round, then extra edges so that every window of T
//      consecutive rounds has a complete product. T = 1 gives K_V.
//  cT_cycle           c, T, density
//      One round in every T (random phase) is the c-th power of a random
//      Hamiltonian cycle, which is c in-connected; remaining rounds carry
//      random noise edges. Every T-window is therefore c in-connected.
//  eventually_connected_sparse  quiet_max, burst_len, density
//      Time is cut into blocks of quiet_max + burst_len rounds. Each block
//      starts with a random quiet stretch of 0..quiet_max rounds (self-loops
//      plus noise) followed by burst_len rounds that are each a random
//      Hamiltonian cycle. Guarantee: every block holds at least burst_len
//      strongly connected rounds, so the sequence is eventually strongly
//      connected.
//  star_alternation   hub, lead_idle
//      lead_idle self-loop-only rounds, then S, S^T, S, ... where S has
//      edges hub -> leaf.
//  kw_vs_kuw          outsider, t0
//      Complete over V \ {outsider} (outsider keeps only its self-loop) for
//      rounds <= t0, complete over V afterwards.
struct AdversaryParams {
    GraphKind kind = GraphKind::constant_complete;
    int T = 1;
    int c = 1;
    double density = 0.0;
    int quiet_max = 4;
    int burst_len = 1;
    std::optional<NodeId> hub;
    int lead_idle = 0;
    std::optional<NodeId> outsider;
    Round t0 = 1;

    friend bool operator==(const AdversaryParams&, const AdversaryParams&) = default;
};

// Oblivious dynamic-graph source: G(t) is a pure function of
// (node set, parameters, seed, t). Nothing is materialised ahead of time.
class DynamicGraphSource {
public:
    DynamicGraphSource(std::vector<NodeId> nodes, AdversaryParams params, std::uint64_t seed);

    Digraph at(Round t) const;

    const std::vector<NodeId>& nodes() const { return nodes_; }
    const AdversaryParams& params() const { return params_; }
    std::uint64_t seed() const { return seed_; }

private:
    Digraph random_digraph(Round t, double density) const;
    Digraph random_cycle_power(Round t, int power) const;
    Digraph t_complete_round(Round t) const;
    Digraph ct_cycle_round(Round t) const;
    Digraph eventually_connected_round(Round t) const;
    Digraph star_round(Round t) const;
    Digraph kw_round(Round t) const;

    std::vector<NodeId> nodes_;
    AdversaryParams params_;
    std::uint64_t seed_;
    int ct_phase_ = 0;
};

Digraph generate(const std::vector<NodeId>& nodes, const AdversaryParams& params, std::uint64_t seed, Round t);

// G(t) o G(t+1) o ... o G(t_end).
Digraph cumulative(const DynamicGraphSource& src, Round t, Round t_end);

enum class WindowClass { T_complete, cT_in_connected };

struct ConnectivityClass {
    WindowClass kind = WindowClass::T_complete;
    int c = 1;
    int T = 1;

    friend bool operator==(const ConnectivityClass&, const ConnectivityClass&) = default;
};

std::string describe(const ConnectivityClass& cls);

// Finite-horizon certificate: every window starting at 1..horizon-T+1 was
// checked; nothing is claimed past the horizon.
struct Certification {
    bool certified = false;
    Round horizon = 0;
    Round windows_checked = 0;
    std::optional<Round> first_failing_window;
};

Certification certify_window(const DynamicGraphSource& src, const ConnectivityClass& cls, Round horizon);

// Same check over an already materialised sequence; graphs[0] is G(1).
Certification certify_sequence(const std::vector<Digraph>& graphs, const ConnectivityClass& cls);

} // namespace dynsync
