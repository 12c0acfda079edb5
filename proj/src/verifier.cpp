#include "dynsync/verifier.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace dynsync {

std::string_view to_string(Status s) {
    switch (s) {
    case Status::holds: return "holds";
    case Status::violated: return "violated";
    case Status::inconclusive: return "inconclusive";
    }
    return "?";
}

std::string_view to_string(LemmaCheck l) {
    switch (l) {
    case LemmaCheck::L2a: return "lemma_L2a";
    case LemmaCheck::L2b: return "lemma_L2b";
    case LemmaCheck::L3: return "lemma_L3";
    case LemmaCheck::L4: return "lemma_L4";
    }
    return "?";
}

std::string_view to_string(BoundTheorem b) {
    switch (b) {
    case BoundTheorem::T2: return "bound_T2";
    case BoundTheorem::T3: return "bound_T3";
    case BoundTheorem::T4: return "bound_T4";
    case BoundTheorem::C1: return "bound_C1";
    }
    return "?";
}

namespace {

Verdict make(std::string_view name) {
    Verdict v;
    v.property = std::string(name);
    return v;
}

Verdict& violate(Verdict& v, Round t, std::optional<NodeId> node, std::string detail,
                 std::optional<NodeId> other = std::nullopt) {
    v.status = Status::violated;
    v.witness = Witness{t, node, other, std::move(detail)};
    return v;
}

std::uint64_t r_at(const Trace& trace, std::size_t u, Round t) {
    const NodeState* s = trace.state_at(u, t);
    if (s == nullptr) throw std::logic_error("verifier: counter read outside the active range");
    return s->r;
}

bool synch_at(const Trace& trace, std::size_t u, Round t) {
    const NodeState* s = trace.state_at(u, t);
    return s != nullptr && s->synch;
}

Mask active_mask(const Trace& trace, Round t) {
    Mask m = 0;
    for (std::size_t u = 0; u < trace.node_count(); ++u) {
        if (trace.active(u, t)) m |= Mask{1} << u;
    }
    return m;
}

Mask out_of(const Digraph& g, Mask from) {
    Mask out = 0;
    for (; from != 0; from &= from - 1) out |= g.out_mask(static_cast<std::size_t>(std::countr_zero(from)));
    return out;
}

// in_cum[u] <- union of in_cum[w] over w in In_u(G).
void extend_in_sets(std::vector<Mask>& in_cum, const Digraph& g) {
    std::vector<Mask> next(in_cum.size(), 0);
    for (std::size_t u = 0; u < in_cum.size(); ++u) {
        for (Mask m = g.in_mask(u); m != 0; m &= m - 1) next[u] |= in_cum[static_cast<std::size_t>(std::countr_zero(m))];
    }
    in_cum = std::move(next);
}

struct Detections {
    std::vector<std::optional<Round>> rounds;
    bool all = true;
    bool equal = true;
    Round common = 0;
};

Detections collect_detections(const Trace& trace) {
    Detections d;
    d.rounds = detection_rounds(trace);
    std::optional<Round> first;
    for (const auto& r : d.rounds) {
        if (!r) {
            d.all = false;
            continue;
        }
        if (!first) first = r;
        else if (*first != *r) d.equal = false;
    }
    if (first) d.common = *first;
    return d;
}

} // namespace

std::optional<Round> find_t_synch(const Trace& trace) {
    const Round H = trace.horizon();
    const Round s_max = trace.s_max();
    const std::size_t n = trace.node_count();
    auto good = [&](Round t) {
        const std::uint64_t r0 = r_at(trace, 0, t);
        for (std::size_t u = 0; u < n; ++u) {
            const std::uint64_t r = r_at(trace, u, t);
            if (r != r0 || r_at(trace, u, t + 1) != r + 1) return false;
        }
        return true;
    };
    if (s_max > H) return std::nullopt;
    std::optional<Round> result;
    for (Round t = H; t >= s_max; --t) {
        if (!good(t)) break;
        result = t;
    }
    return result;
}

Verdict check_synchronization(const Trace& trace) {
    Verdict v = make("synchronization");
    if (auto t = find_t_synch(trace)) {
        v.status = Status::holds;
        v.measured["t_synch"] = static_cast<double>(*t);
        v.measured["s_max"] = static_cast<double>(trace.s_max());
    } else {
        v.status = Status::inconclusive;
        v.note = "counters not synchronized by horizon " + std::to_string(trace.horizon());
    }
    return v;
}

std::vector<std::optional<Round>> detection_rounds(const Trace& trace) {
    std::vector<std::optional<Round>> out(trace.node_count());
    for (std::size_t u = 0; u < trace.node_count(); ++u) {
        for (Round t = std::max<Round>(1, trace.start_of(u)); t <= trace.horizon(); ++t) {
            const auto& after = trace.round(t).nodes[u].after;
            if (after && after->synch) {
                out[u] = t;
                break;
            }
        }
    }
    return out;
}

Verdict check_detection(const Trace& trace, std::optional<Round> t_synch) {
    Verdict v = make("detection");
    const Round H = trace.horizon();
    if (t_synch) v.measured["t_synch"] = static_cast<double>(*t_synch);

    bool pending = false;
    // Condition 3.
    for (std::size_t u = 0; u < trace.node_count(); ++u) {
        for (Round t = trace.start_of(u); t <= H + 1; ++t) {
            if (!synch_at(trace, u, t)) continue;
            if (t_synch && t >= *t_synch) break;
            if (!t_synch && t == H + 1) {
                pending = true;
                break;
            }
            return violate(v, t, trace.node_ids()[u], "synch is true before counters are synchronized");
        }
    }
    // Condition 4, up to the horizon.
    std::size_t detected = 0;
    for (std::size_t u = 0; u < trace.node_count(); ++u) {
        if (synch_at(trace, u, H + 1)) ++detected;
    }
    v.measured["nodes_detected"] = static_cast<double>(detected);
    if (detected < trace.node_count() || pending || !t_synch) {
        v.status = Status::inconclusive;
        v.note = "not every node has detected by horizon " + std::to_string(H);
        return v;
    }
    v.status = Status::holds;
    return v;
}

Verdict check_simultaneity(const Trace& trace) {
    Verdict v = make("simultaneity");
    const Round H = trace.horizon();
    const std::size_t n = trace.node_count();
    for (Round t = 1; t <= H + 1; ++t) {
        std::optional<std::size_t> ref;
        for (std::size_t u = 0; u < n; ++u) {
            if (trace.state_at(u, t) == nullptr) continue;
            if (!ref) {
                ref = u;
            } else if (synch_at(trace, u, t) != synch_at(trace, *ref, t)) {
                return violate(v, t, trace.node_ids()[*ref], "synch flags differ", trace.node_ids()[u]);
            }
        }
    }
    const Detections d = collect_detections(trace);
    v.status = Status::holds;
    if (d.all && d.equal && n > 0) v.measured["detection_round"] = static_cast<double>(d.common);
    return v;
}

bool broken_path_exists(const Trace& trace, NodeId v, NodeId u, Round t, Round t_end) {
    if (t < 1 || t > t_end || t_end > trace.horizon()) throw std::out_of_range("broken_path_exists: bad interval");
    const std::size_t vi = trace.index_of(v);
    const std::size_t ui = trace.index_of(u);
    Mask clean = Mask{1} << vi;
    Mask broken = 0;
    for (Round k = t; k <= t_end; ++k) {
        const Digraph& g = trace.graph(k);
        const Mask act = active_mask(trace, k);
        const Mask next_broken = out_of(g, broken) | out_of(g, clean & ~act);
        clean = out_of(g, clean & act);
        broken = next_broken;
    }
    return (broken >> ui) & 1U;
}

Verdict check_lemma_bounds(const Trace& trace, LemmaCheck which, const LemmaOptions& options) {
    Verdict v = make(to_string(which));
    const Round H = trace.horizon();
    const std::size_t n = trace.node_count();
    const Mask all = n == kMaxNodes ? ~Mask{0} : (Mask{1} << n) - 1;
    std::size_t checked = 0;

    if (which == LemmaCheck::L2a || which == LemmaCheck::L2b) {
        const Round cap = options.full_sweep ? H : options.interval_cap;
        for (Round t = 1; t <= H; ++t) {
            Mask clean = all;
            Mask broken = 0;
            std::vector<Mask> in_cum(n);
            for (std::size_t u = 0; u < n; ++u) in_cum[u] = Mask{1} << u;
            for (Round tp = t + 1; tp <= std::min(t + cap, H + 1); ++tp) {
                const Round k = tp - 1;
                const Digraph& g = trace.graph(k);
                const Mask act = active_mask(trace, k);
                const Mask next_broken = out_of(g, broken) | out_of(g, clean & ~act);
                clean = out_of(g, clean & act);
                broken = next_broken;
                extend_in_sets(in_cum, g);
                for (std::size_t u = 0; u < n; ++u) {
                    if (trace.start_of(u) > tp) continue;
                    const auto ru = static_cast<Round>(r_at(trace, u, tp));
                    const bool has_broken = (broken >> u) & 1U;
                    if (which == LemmaCheck::L2a && has_broken) {
                        ++checked;
                        if (ru > tp - t - 1) {
                            v.measured["t"] = static_cast<double>(t);
                            return violate(v, tp, trace.node_ids()[u],
                                           "r = " + std::to_string(ru) + " exceeds " + std::to_string(tp - t - 1) +
                                               " after a broken path from round " + std::to_string(t));
                        }
                    } else if (which == LemmaCheck::L2b && !has_broken) {
                        for (Mask m = in_cum[u]; m != 0; m &= m - 1) {
                            const auto vi = static_cast<std::size_t>(std::countr_zero(m));
                            ++checked;
                            const NodeState* sv = trace.state_at(vi, t);
                            if (sv == nullptr) {
                                return violate(v, tp, trace.node_ids()[u], "in-neighbour passive without broken path",
                                               trace.node_ids()[vi]);
                            }
                            if (ru > static_cast<Round>(sv->r) + tp - t) {
                                v.measured["t"] = static_cast<double>(t);
                                return violate(v, tp, trace.node_ids()[u],
                                               "r exceeds relay bound from round " + std::to_string(t),
                                               trace.node_ids()[vi]);
                            }
                        }
                    }
                }
            }
        }
    } else if (which == LemmaCheck::L3) {
        const Round s_max = trace.s_max();
        Mask last_starters = 0;
        for (std::size_t u = 0; u < n; ++u) {
            if (trace.start_of(u) == s_max) last_starters |= Mask{1} << u;
        }
        std::vector<Mask> in_cum(n);
        for (std::size_t u = 0; u < n; ++u) in_cum[u] = Mask{1} << u;
        std::size_t equality_cases = 0;
        for (Round t = s_max; t <= H + 1; ++t) {
            if (t > s_max) extend_in_sets(in_cum, trace.graph(t - 1));
            for (std::size_t u = 0; u < n; ++u) {
                const auto ru = static_cast<Round>(r_at(trace, u, t));
                ++checked;
                if (ru < t - s_max) {
                    return violate(v, t, trace.node_ids()[u], "r below t - s_max");
                }
                if (t >= s_max + 1 && (in_cum[u] & last_starters) != 0) {
                    ++equality_cases;
                    if (ru != t - s_max) {
                        return violate(v, t, trace.node_ids()[u], "equality case r = t - s_max fails");
                    }
                }
            }
        }
        v.measured["equality_cases"] = static_cast<double>(equality_cases);
    } else {
        const ProtocolParams& p = trace.scenario().params;
        if (p.algorithm != Algorithm::A3) {
            v.status = Status::inconclusive;
            v.note = "heard-of bound applies to A3 traces only";
            return v;
        }
        std::vector<Digraph> graphs;
        for (Round t = 1; t <= H; ++t) graphs.push_back(trace.graph(t));
        if (H < p.T || !certify_sequence(graphs, ConnectivityClass{WindowClass::cT_in_connected, p.c, p.T}).certified) {
            v.status = Status::inconclusive;
            v.note = "trace graphs are not certified (c,T) in-connected";
            return v;
        }
        const auto c = static_cast<std::int64_t>(p.c);
        const auto T = static_cast<std::int64_t>(p.T);
        const auto nn = static_cast<std::int64_t>(n);
        for (std::size_t u = 0; u < n; ++u) {
            for (Round t = trace.start_of(u); t <= H + 1; ++t) {
                const NodeState* s = trace.state_at(u, t);
                const auto r = static_cast<std::int64_t>(s->r);
                // |HO| >= min((1-c) + c(r+1)/T, n), scaled by T.
                const std::int64_t bound = std::min((1 - c) * T + c * (r + 1), nn * T);
                ++checked;
                if (static_cast<std::int64_t>(s->ho.size()) * T < bound) {
                    return violate(v, t, trace.node_ids()[u], "|HO| = " + std::to_string(s->ho.size()) + " too small");
                }
            }
        }
    }
    v.status = Status::holds;
    v.measured["instances"] = static_cast<double>(checked);
    return v;
}

Verdict check_counting(const Trace& trace) {
    Verdict v = make("counting");
    const auto det = detection_rounds(trace);
    const IdSet& everyone = trace.node_ids();
    for (std::size_t u = 0; u < trace.node_count(); ++u) {
        if (!det[u]) {
            v.status = Status::inconclusive;
            v.note = "node " + std::to_string(everyone[u].value) + " has not detected by the horizon";
            return v;
        }
        const auto& after = trace.round(*det[u]).nodes[u].after;
        if (after->ho != everyone) {
            return violate(v, *det[u], everyone[u],
                           "heard-of set has " + std::to_string(after->ho.size()) + " of " +
                               std::to_string(everyone.size()) + " nodes at detection");
        }
    }
    v.status = Status::holds;
    return v;
}

Verdict check_bound_theorem(const Trace& trace, BoundTheorem which) {
    Verdict v = make(to_string(which));
    const ProtocolParams& p = trace.scenario().params;
    const Round s_max = trace.s_max();
    const auto n = static_cast<Round>(trace.node_count());
    const Round H = trace.horizon();

    Algorithm expected = Algorithm::A2;
    Round deadline = 0;      // latest admissible detection round
    bool exact = false;      // detection must happen exactly at the deadline
    switch (which) {
    case BoundTheorem::T2:
        deadline = s_max + p.T - 1;
        exact = true;
        break;
    case BoundTheorem::T3:
        expected = Algorithm::A3;
        deadline = s_max + (p.T * (n - 1) + p.c - 1) / p.c + p.T - 1;
        break;
    case BoundTheorem::T4:
        expected = Algorithm::A4;
        deadline = s_max + 2 * n;
        break;
    case BoundTheorem::C1: deadline = s_max + p.T - 1; break;
    }
    if (p.algorithm != expected) {
        v.status = Status::inconclusive;
        v.note = std::string(to_string(which)) + " does not apply to " + std::string(to_string(p.algorithm));
        return v;
    }
    v.measured["s_max"] = static_cast<double>(s_max);
    v.measured["deadline"] = static_cast<double>(deadline);
    if (which == BoundTheorem::T2) v.measured["flag_visible"] = static_cast<double>(deadline + 1);

    if (which == BoundTheorem::C1) {
        for (Round t = 1; t <= H; ++t) {
            if (!is_strongly_connected(trace.graph(t))) {
                v.status = Status::inconclusive;
                v.note = "round " + std::to_string(t) + " is not strongly connected";
                return v;
            }
        }
    }

    const Detections d = collect_detections(trace);
    for (std::size_t u = 0; u < d.rounds.size(); ++u) {
        const auto& r = d.rounds[u];
        if (r && (*r > deadline || (exact && *r != deadline))) {
            return violate(v, *r, trace.node_ids()[u],
                           "detected in round " + std::to_string(*r) + ", expected " + (exact ? "" : "<= ") +
                               std::to_string(deadline));
        }
        if (!r && H >= deadline) {
            return violate(v, deadline, trace.node_ids()[u], "no detection by round " + std::to_string(deadline));
        }
    }
    if (!d.all) {
        v.status = Status::inconclusive;
        v.note = "horizon ends before the deadline";
        return v;
    }
    if (!d.equal) {
        std::size_t other = 0;
        while (d.rounds[other] == d.rounds[0]) ++other;
        return violate(v, std::min(*d.rounds[0], *d.rounds[other]), trace.node_ids()[0], "detection rounds differ",
                       trace.node_ids()[other]);
    }
    v.measured["detection_round"] = static_cast<double>(d.common);
    const Verdict det = check_detection(trace, find_t_synch(trace));
    if (det.status == Status::violated) {
        v.status = Status::violated;
        v.witness = det.witness;
        v.note = "premature detection";
        return v;
    }
    v.status = Status::holds;
    return v;
}

int exit_code(std::span<const Verdict> verdicts) {
    int code = 0;
    for (const Verdict& v : verdicts) {
        if (v.status == Status::violated) return 1;
        if (v.status == Status::inconclusive) code = 2;
    }
    return code;
}

} // namespace dynsync
