#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dynsync/verifier.hpp"
#include "scenarios.hpp"

using namespace dynsync;
using fixture::scenario;
using fixture::set_starts;

namespace {

std::vector<RoundRecord> copy_rounds(const Trace& tr) {
    std::vector<RoundRecord> out;
    for (Round t = 1; t <= tr.horizon(); ++t) out.push_back(tr.round(t));
    return out;
}

Scenario a3_cycle(std::uint32_t n, int c, int T, Round horizon, std::uint64_t seed) {
    Scenario s = scenario(n, Algorithm::A3, GraphKind::cT_cycle, horizon, seed);
    s.params.c = c;
    s.params.T = T;
    s.graph.params.c = c;
    s.graph.params.T = T;
    s.graph.params.density = 0.05;
    return s;
}

// Rewrites x_u(t) consistently in both records that carry it.
template <typename Edit>
void edit_state(std::vector<RoundRecord>& rounds, std::size_t node, Round t, Edit edit) {
    const auto i = static_cast<std::size_t>(t - 1);
    if (i < rounds.size()) edit(*rounds[i].nodes[node].before);
    edit(*rounds[i - 1].nodes[node].after);
}

void set_counter(std::vector<RoundRecord>& rounds, std::size_t node, Round t, std::uint64_t r) {
    edit_state(rounds, node, t, [r](NodeState& s) { s.r = r; });
}

bool flags_differ(const Trace& tr, const Witness& w) {
    const NodeState* a = tr.state_at(tr.index_of(*w.node), w.round);
    const NodeState* b = tr.state_at(tr.index_of(*w.other), w.round);
    return a && b && a->synch != b->synch;
}

} // namespace

TEST_CASE("find_t_synch examples") {
    const Trace all_at_one = run(scenario(4, Algorithm::A1, GraphKind::constant_complete, 10));
    CHECK(find_t_synch(all_at_one) == Round{1});

    Scenario two = scenario(2, Algorithm::A1, GraphKind::constant_complete, 8);
    set_starts(two, {1, 3});
    CHECK(find_t_synch(run(two)) == Round{3});
    CHECK(check_synchronization(run(two)).status == Status::holds);

    Scenario isolated = scenario(2, Algorithm::A1, GraphKind::star_alternation, 20);
    isolated.graph.params.lead_idle = 1000;
    set_starts(isolated, {1, 4});
    const Trace tr = run(isolated);
    CHECK_FALSE(find_t_synch(tr).has_value());
    CHECK(check_synchronization(tr).status == Status::inconclusive);
}

TEST_CASE("t_synch needs the whole suffix") {
    // Counters agree on round s_max but a later null resets one of them.
    Scenario s = scenario(3, Algorithm::A1, GraphKind::eventually_connected_sparse, 30, 5);
    s.graph.params.quiet_max = 3;
    set_starts(s, {1, 2, 2});
    const Trace tr = run(s);
    const auto t = find_t_synch(tr);
    REQUIRE(t.has_value());
    for (Round k = *t; k <= tr.horizon(); ++k) {
        for (std::size_t u = 0; u < 3; ++u) {
            CHECK(tr.state_at(u, k)->r == tr.state_at(0, k)->r);
            CHECK(tr.state_at(u, k + 1)->r == tr.state_at(u, k)->r + 1);
        }
    }
    if (*t > tr.s_max()) {
        bool broken = false;
        for (std::size_t u = 0; u < 3; ++u) {
            broken = broken || tr.state_at(u, *t - 1)->r != tr.state_at(0, *t - 1)->r ||
                     tr.state_at(u, *t)->r != tr.state_at(u, *t - 1)->r + 1;
        }
        CHECK(broken);
    }
}

TEST_CASE("detection on T-complete A2 traces holds") {
    Scenario s = scenario(5, Algorithm::A2, GraphKind::T_complete_random, 30, 3);
    s.params.T = 3;
    s.graph.params.T = 3;
    s.graph.params.density = 0.2;
    set_starts(s, {2, 5, 1, 7, 3});
    const Trace tr = run(s);
    const Verdict det = check_detection(tr, find_t_synch(tr));
    CHECK(det.status == Status::holds);
    const Verdict sim = check_simultaneity(tr);
    CHECK(sim.status == Status::holds);
    CHECK(sim.measured.at("detection_round") == 9.0);
    CHECK(check_bound_theorem(tr, BoundTheorem::T2).status == Status::holds);
}

TEST_CASE("A2 with T=1 on 2-complete graphs detects prematurely") {
    // Search small schedules for a premature detection.
    std::optional<Verdict> found;
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 200 && !found; ++trial) {
        Scenario s = scenario(4, Algorithm::A2, GraphKind::T_complete_random, 20, static_cast<std::uint64_t>(trial));
        s.params.T = 1;
        s.graph.params.T = 2;
        s.graph.params.density = 0.1;
        set_starts(s, fixture::random_starts(4, 6, rng));
        const Trace tr = run(s);
        const Verdict v = check_detection(tr, find_t_synch(tr));
        if (v.status == Status::violated) {
            found = v;
            REQUIRE(v.witness.has_value());
            // The witness re-evaluates: the flag is up before t_synch.
            const auto t_synch = find_t_synch(tr);
            CHECK(tr.state_at(tr.index_of(*v.witness->node), v.witness->round)->synch);
            CHECK((!t_synch || v.witness->round < *t_synch));
            CHECK(check_bound_theorem(tr, BoundTheorem::T2).status == Status::violated);
        }
    }
    CHECK(found.has_value());
}

TEST_CASE("no detection by the horizon is inconclusive") {
    Scenario s = scenario(3, Algorithm::A2, GraphKind::constant_complete, 4);
    s.params.T = 10;
    const Trace tr = run(s);
    CHECK(check_detection(tr, find_t_synch(tr)).status == Status::inconclusive);
    CHECK(check_bound_theorem(tr, BoundTheorem::T2).status == Status::inconclusive);
    CHECK(check_simultaneity(tr).status == Status::holds);
}

TEST_CASE("bound theorem examples") {
    Scenario s = scenario(4, Algorithm::A2, GraphKind::constant_complete, 20);
    s.params.T = 3;
    set_starts(s, {1, 5, 3, 2});
    const Trace tr = run(s);
    for (const auto& d : detection_rounds(tr)) CHECK(d == Round{7});
    const Verdict t2 = check_bound_theorem(tr, BoundTheorem::T2);
    CHECK(t2.status == Status::holds);
    CHECK(t2.measured.at("detection_round") == 7.0);
    CHECK(t2.measured.at("flag_visible") == 8.0);
    CHECK(check_detection(tr, find_t_synch(tr)).status == Status::holds);
    CHECK(check_bound_theorem(tr, BoundTheorem::T3).status == Status::inconclusive);

    Scenario c = a3_cycle(5, 1, 1, 30, 6);
    set_starts(c, {1, 4, 2, 3, 4});
    const Trace tc = run(c);
    const Verdict t3 = check_bound_theorem(tc, BoundTheorem::T3);
    CHECK(t3.status == Status::holds);
    CHECK(t3.measured.at("detection_round") < 4 + 4 + 1);
    CHECK(check_simultaneity(tc).status == Status::holds);
    CHECK(check_counting(tc).status == Status::holds);
}

TEST_CASE("C1 needs strongly connected rounds") {
    Scenario s = scenario(5, Algorithm::A2, GraphKind::cT_cycle, 30, 2);
    s.params.T = 5;
    set_starts(s, {1, 3, 2, 6, 4});
    CHECK(check_bound_theorem(run(s), BoundTheorem::C1).status == Status::holds);

    s.graph.params.kind = GraphKind::eventually_connected_sparse;
    CHECK(check_bound_theorem(run(s), BoundTheorem::C1).status == Status::inconclusive);
}

TEST_CASE("bound check catches a late detection") {
    // A3 on a graph that is only (1,3) connected, checked with T = 1.
    Scenario s = a3_cycle(6, 1, 3, 60, 4);
    s.params.T = 1;
    const Trace tr = run(s);
    const Verdict v = check_bound_theorem(tr, BoundTheorem::T3);
    CHECK(v.status != Status::holds);
    if (v.status == Status::violated) CHECK(v.witness.has_value());
}

TEST_CASE("simultaneity can fail for A5 on the star alternation") {
    Scenario s = scenario(4, Algorithm::A5, GraphKind::star_alternation, 20);
    s.params.n_exact = 4;
    const Trace tr = run(s);
    const auto det = detection_rounds(tr);
    CHECK(det[0] == Round{4});
    for (std::size_t u = 1; u < 4; ++u) CHECK(det[u] == Round{5});
    const Verdict v = check_simultaneity(tr);
    REQUIRE(v.status == Status::violated);
    REQUIRE(v.witness.has_value());
    CHECK(v.witness->round == 5);
    CHECK(flags_differ(tr, *v.witness));
    CHECK(check_detection(tr, find_t_synch(tr)).status == Status::holds);
}

TEST_CASE("broken path examples") {
    Scenario all = scenario(4, Algorithm::A1, GraphKind::constant_complete, 8);
    const Trace tr = run(all);
    for (std::uint32_t v = 1; v <= 4; ++v)
        for (std::uint32_t u = 1; u <= 4; ++u) CHECK_FALSE(broken_path_exists(tr, NodeId{v}, NodeId{u}, 1, 7));

    Scenario late = scenario(3, Algorithm::A1, GraphKind::constant_complete, 8);
    set_starts(late, {1, 3, 1});
    const Trace tl = run(late);
    CHECK(broken_path_exists(tl, NodeId{2}, NodeId{1}, 1, 1));
    CHECK(broken_path_exists(tl, NodeId{2}, NodeId{3}, 2, 2));
    CHECK_FALSE(broken_path_exists(tl, NodeId{2}, NodeId{1}, 3, 3));
    CHECK_FALSE(broken_path_exists(tl, NodeId{1}, NodeId{3}, 3, 6));
    CHECK_THROWS_AS(broken_path_exists(tl, NodeId{1}, NodeId{3}, 4, 3), std::out_of_range);
    CHECK_THROWS_AS(broken_path_exists(tl, NodeId{1}, NodeId{3}, 1, 9), std::out_of_range);
}

TEST_CASE("broken paths agree with exhaustive enumeration") {
    std::mt19937_64 rng(21);
    int positives = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto n = static_cast<std::uint32_t>(2 + trial % 4);
        Scenario s = scenario(n, Algorithm::A1, GraphKind::eventually_connected_sparse, 12,
                              static_cast<std::uint64_t>(trial));
        s.graph.params.density = 0.25;
        set_starts(s, fixture::random_starts(n, 8, rng));
        const Trace tr = run(s);
        for (Round t = 1; t <= 6; ++t) {
            for (Round len = 1; len <= 6; ++len) {
                const Round t_end = t + len - 1;
                for (NodeId v : tr.node_ids()) {
                    for (NodeId u : tr.node_ids()) {
                        const bool expected = oracle::broken_path_by_enumeration(tr, v, u, t, t_end);
                        positives += expected ? 1 : 0;
                        CHECK(broken_path_exists(tr, v, u, t, t_end) == expected);
                    }
                }
            }
        }
    }
    CHECK(positives > 100);
}

TEST_CASE("lemma bounds hold on in-class traces") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        Scenario s = a3_cycle(5, 1 + trial % 2, 2, 30, static_cast<std::uint64_t>(trial));
        set_starts(s, fixture::random_starts(5, 6, rng));
        const Trace tr = run(s);
        for (auto l : {LemmaCheck::L2a, LemmaCheck::L2b, LemmaCheck::L3, LemmaCheck::L4}) {
            const Verdict v = check_lemma_bounds(tr, l);
            CHECK_MESSAGE(v.status == Status::holds, to_string(l), " ", v.note);
        }
        CHECK(check_lemma_bounds(tr, LemmaCheck::L3).measured.at("equality_cases") > 0);
    }
}

TEST_CASE("full sweep agrees with the capped sweep on short traces") {
    Scenario s = scenario(4, Algorithm::A1, GraphKind::eventually_connected_sparse, 10, 2);
    s.graph.params.density = 0.2;
    set_starts(s, {1, 3, 5, 2});
    const Trace tr = run(s);
    LemmaOptions full;
    full.full_sweep = true;
    for (auto l : {LemmaCheck::L2a, LemmaCheck::L2b}) {
        const Verdict a = check_lemma_bounds(tr, l);
        const Verdict b = check_lemma_bounds(tr, l, full);
        CHECK(a.status == Status::holds);
        CHECK(b.status == Status::holds);
        CHECK(a.measured.at("instances") == b.measured.at("instances"));
    }
}

TEST_CASE("L4 is inconclusive off its class") {
    Scenario s = scenario(4, Algorithm::A1, GraphKind::constant_complete, 10);
    CHECK(check_lemma_bounds(run(s), LemmaCheck::L4).status == Status::inconclusive);
    Scenario a3 = a3_cycle(5, 1, 1, 20, 1);
    a3.graph.params.kind = GraphKind::eventually_connected_sparse;
    CHECK(check_lemma_bounds(run(a3), LemmaCheck::L4).status == Status::inconclusive);
}

TEST_CASE("corrupted traces are caught") {
    Scenario s = scenario(4, Algorithm::A3, GraphKind::constant_complete, 12);
    set_starts(s, {1, 2, 4, 3});
    const Trace good = run(s);
    for (auto l : {LemmaCheck::L2a, LemmaCheck::L2b, LemmaCheck::L3, LemmaCheck::L4}) {
        CHECK(check_lemma_bounds(good, l).status == Status::holds);
    }

    SUBCASE("counter inflated") {
        auto rounds = copy_rounds(good);
        set_counter(rounds, 1, 8, good.state_at(1, 8)->r + 5);
        const Trace bad(s, rounds);
        const Verdict v = check_lemma_bounds(bad, LemmaCheck::L2b);
        REQUIRE(v.status == Status::violated);
        CHECK(v.witness->node == NodeId{2});
        CHECK(v.witness->round == 8);
        CHECK(check_lemma_bounds(bad, LemmaCheck::L3).status == Status::violated);
        CHECK(find_t_synch(bad) != find_t_synch(good));
    }
    SUBCASE("counter deflated") {
        auto rounds = copy_rounds(good);
        set_counter(rounds, 0, 11, 0);
        const Trace bad(s, rounds);
        const Verdict v = check_lemma_bounds(bad, LemmaCheck::L3);
        REQUIRE(v.status == Status::violated);
        CHECK(v.witness->round == 11);
        CHECK(v.witness->node == NodeId{1});
    }
    SUBCASE("counter survives a null") {
        auto rounds = copy_rounds(good);
        set_counter(rounds, 0, 3, 2);  // nodes 3 and 4 were passive in round 2
        const Trace bad(s, rounds);
        const Verdict v = check_lemma_bounds(bad, LemmaCheck::L2a);
        REQUIRE(v.status == Status::violated);
        CHECK(v.witness->round == 3);
    }
    SUBCASE("heard-of set shrunk") {
        auto rounds = copy_rounds(good);
        edit_state(rounds, 2, 12, [](NodeState& st) { st.ho = {NodeId{3}}; });
        const Trace bad(s, rounds);
        CHECK(check_lemma_bounds(bad, LemmaCheck::L4).status == Status::violated);
    }
    SUBCASE("premature flag") {
        auto rounds = copy_rounds(good);
        edit_state(rounds, 0, 3, [](NodeState& st) { st.synch = true; });
        const Trace bad(s, rounds);
        const Verdict v = check_detection(bad, find_t_synch(bad));
        REQUIRE(v.status == Status::violated);
        CHECK(v.witness->round == 3);
        CHECK(check_simultaneity(bad).status == Status::violated);
    }
}

TEST_CASE("counting") {
    Scenario s = a3_cycle(6, 1, 1, 40, 3);
    set_starts(s, {1, 2, 3, 1, 2, 3});
    const Trace tr = run(s);
    CHECK(check_counting(tr).status == Status::holds);
    for (const auto& d : detection_rounds(tr)) REQUIRE(d.has_value());

    Scenario one = scenario(1, Algorithm::A3, GraphKind::constant_complete, 5);
    CHECK(check_counting(run(one)).status == Status::holds);

    Scenario truncated = a3_cycle(6, 1, 1, 4, 3);
    set_starts(truncated, {1, 2, 3, 1, 2, 3});
    CHECK(check_counting(run(truncated)).status == Status::inconclusive);
}

TEST_CASE("hierarchy consistency on positive traces") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        Scenario s = a3_cycle(6, 2, 2, 40, static_cast<std::uint64_t>(trial));
        set_starts(s, fixture::random_starts(6, 10, rng));
        const Trace tr = run(s);
        const Verdict det = check_detection(tr, find_t_synch(tr));
        const Verdict sim = check_simultaneity(tr);
        CHECK(det.status == Status::holds);
        CHECK(sim.status == Status::holds);
        const auto rounds = detection_rounds(tr);
        for (const auto& r : rounds) CHECK(r == rounds.front());
        CHECK(sim.measured.count("detection_round") == 1);
    }
}

TEST_CASE("exit code mapping") {
    Verdict h;
    h.status = Status::holds;
    Verdict i;
    i.status = Status::inconclusive;
    Verdict v;
    v.status = Status::violated;
    CHECK(exit_code(std::vector<Verdict>{}) == 0);
    CHECK(exit_code(std::vector<Verdict>{h, h}) == 0);
    CHECK(exit_code(std::vector<Verdict>{h, i}) == 2);
    CHECK(exit_code(std::vector<Verdict>{i, v, h}) == 1);
}
