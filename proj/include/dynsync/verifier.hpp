#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dynsync/engine.hpp"

namespace dynsync {

enum class Status { holds, violated, inconclusive };

std::string_view to_string(Status s);

struct Witness {
    Round round = 0;
    std::optional<NodeId> node;
    std::optional<NodeId> other;
    std::string detail;
};

// Result of one property check. A violated verdict always has a witness.
struct Verdict {
    std::string property;
    Status status = Status::inconclusive;
    std::optional<Witness> witness;
    std::map<std::string, double> measured;
    std::string note;
};

// Smallest t_synch >= s_max from which all counters are equal and advance
// by one every round up to the end of the trace. Needs a suffix of at least
// two observed values; nullopt means inconclusive at the horizon.
std::optional<Round> find_t_synch(const Trace& trace);
Verdict check_synchronization(const Trace& trace);

// Round during which each node's synch flag first became true.
std::vector<std::optional<Round>> detection_rounds(const Trace& trace);

// No detection before t_synch; every node eventually detects.
Verdict check_detection(const Trace& trace, std::optional<Round> t_synch);
// All synch flags agree at every round in which both nodes are active.
Verdict check_simultaneity(const Trace& trace);

// Is there a dynamic path v = v_t, ..., v_{t_end+1} = u with
// (v_k, v_{k+1}) in G(k) and some v_k passive at round k?
bool broken_path_exists(const Trace& trace, NodeId v, NodeId u, Round t, Round t_end);

enum class LemmaCheck {
    L2a,  // broken path ending at u over [t, t'-1]  =>  r_u(t') <= t' - t - 1
    L2b,  // otherwise r_u(t') <= r_v(t) + t' - t for v in In_u(t : t'-1)
    L3,   // r_u(t) >= t - s_max, with equality when a last starter reaches u
    L4,   // |HO_u(t)| >= min((1-c) + (c/T)(r_u(t)+1), n) on (c,T) graphs
};

std::string_view to_string(LemmaCheck l);

struct LemmaOptions {
    Round interval_cap = 12;
    bool full_sweep = false;
};

Verdict check_lemma_bounds(const Trace& trace, LemmaCheck which, const LemmaOptions& options = {});

// At each node's detection round its heard-of set equals the node set.
Verdict check_counting(const Trace& trace);

enum class BoundTheorem {
    T2,  // A2: every node detects during round s_max + T - 1
    T3,  // A3: common detection round < s_max + ceil(T(n-1)/c) + T
    T4,  // A4: common detection round <= s_max + 2n
    C1,  // A2 with T = N on strongly connected rounds: detection by s_max + N - 1
};

std::string_view to_string(BoundTheorem b);

Verdict check_bound_theorem(const Trace& trace, BoundTheorem which);

// holds = 0, violated = 1, inconclusive = 2; the worst verdict wins.
int exit_code(std::span<const Verdict> verdicts);

} // namespace dynsync
