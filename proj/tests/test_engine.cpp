#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "dynsync/batch.hpp"
#include "dynsync/engine.hpp"
#include "dynsync/report.hpp"
#include "dynsync/rng.hpp"
#include "scenarios.hpp"

using namespace dynsync;
using fixture::scenario;
using fixture::set_starts;

namespace {

std::vector<std::uint64_t> counters_at(const Trace& tr, Round t) {
    std::vector<std::uint64_t> out;
    for (std::size_t i = 0; i < tr.node_count(); ++i) {
        const NodeState* s = tr.state_at(i, t);
        out.push_back(s ? s->r : ~0ULL);
    }
    return out;
}

} // namespace

TEST_CASE("single node counts rounds") {
    Scenario s = scenario(1, Algorithm::A1, GraphKind::constant_complete, 5);
    const Trace tr = run(s);
    for (Round t = 1; t <= 6; ++t) CHECK(tr.state_at(0, t)->r == static_cast<std::uint64_t>(t - 1));
}

TEST_CASE("two nodes with staggered starts") {
    Scenario s = scenario(2, Algorithm::A1, GraphKind::constant_complete, 8);
    set_starts(s, {1, 3});
    const Trace tr = run(s);
    CHECK(tr.state_at(1, 2) == nullptr);
    CHECK(tr.state_at(0, 1)->r == 0);
    CHECK(tr.state_at(0, 2)->r == 0);
    CHECK(tr.state_at(0, 3)->r == 0);
    for (Round t = 3; t <= 9; ++t) {
        CHECK(counters_at(tr, t) == std::vector<std::uint64_t>{static_cast<std::uint64_t>(t - 3),
                                                               static_cast<std::uint64_t>(t - 3)});
    }
    CHECK(is_null(tr.round(2).nodes[1].sent));
    CHECK_FALSE(is_null(tr.round(3).nodes[1].sent));
    CHECK_FALSE(tr.round(2).nodes[1].active);
    CHECK_FALSE(tr.round(2).nodes[1].before.has_value());
    CHECK_FALSE(tr.round(2).nodes[1].after.has_value());
    CHECK(tr.round(1).nodes[1].msg_bytes == 1);
    CHECK(tr.round(1).nodes[0].msg_bytes == 2);
}

TEST_CASE("activation emits in the start round") {
    Scenario s = scenario(3, Algorithm::A3, GraphKind::constant_complete, 6);
    set_starts(s, {1, 2, 4});
    const Trace tr = run(s);
    const auto& rec = tr.round(4).nodes[2];
    CHECK(rec.active);
    CHECK(rec.before->r == 0);
    CHECK(rec.before->ho == IdSet{NodeId{3}});
    CHECK(std::get<HeardOfMessage>(rec.sent) == HeardOfMessage{0, {NodeId{3}}});
}

TEST_CASE("state_at bounds") {
    Scenario s = scenario(2, Algorithm::A1, GraphKind::constant_complete, 4);
    set_starts(s, {1, 2});
    const Trace tr = run(s);
    CHECK(tr.state_at(0, 0) == nullptr);
    CHECK(tr.state_at(1, 1) == nullptr);
    CHECK(tr.state_at(1, 2) != nullptr);
    CHECK(tr.state_at(0, 5) != nullptr);
    CHECK(tr.state_at(0, 6) == nullptr);
    CHECK(tr.state_at(0, 5)->r == tr.round(4).nodes[0].after->r);
    CHECK_THROWS_AS(tr.round(5), std::out_of_range);
    CHECK_THROWS_AS(tr.index_of(NodeId{7}), std::out_of_range);
}

TEST_CASE("scenario validation") {
    Scenario s = scenario(3, Algorithm::A1, GraphKind::constant_complete, 4);
    set_starts(s, {1, 2, 5});
    CHECK_THROWS_AS(run(s), std::invalid_argument);
    s.horizon = 5;
    CHECK_NOTHROW(run(s));
    s.starts.erase(NodeId{2});
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = scenario(3, Algorithm::A3, GraphKind::constant_complete, 4);
    s.params.c = 3;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = scenario(3, Algorithm::A1, GraphKind::constant_complete, 4);
    s.starts[NodeId{1}] = 0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = scenario(3, Algorithm::A1, GraphKind::kw_vs_kuw, 4);
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("replay is deterministic") {
    for (auto alg : {Algorithm::A1, Algorithm::A3, Algorithm::A4, Algorithm::A5}) {
        Scenario s = scenario(5, alg, GraphKind::eventually_connected_sparse, 30, 9);
        s.params.n_exact = 5;
        s.params.ell_override = 64;
        s.graph.params.density = 0.1;
        set_starts(s, {1, 4, 2, 7, 3});
        CHECK(trace_json_string(run(s)) == trace_json_string(run(s)));
    }
}

TEST_CASE("node streams") {
    RngStream a1 = rng_stream_for(5, NodeId{1});
    RngStream a2 = rng_stream_for(5, NodeId{1});
    for (int i = 0; i < 64; ++i) CHECK(a1() == a2());

    std::set<std::vector<std::uint64_t>> prefixes;
    for (std::uint32_t id = 0; id < 1000; ++id) {
        RngStream r = rng_stream_for(5, NodeId{id});
        std::vector<std::uint64_t> prefix;
        for (int i = 0; i < 64; ++i) prefix.push_back(r());
        prefixes.insert(prefix);
    }
    CHECK(prefixes.size() == 1000);

    RngStream other = rng_stream_for(6, NodeId{1});
    RngStream base = rng_stream_for(5, NodeId{1});
    CHECK(other() != base());
}

TEST_CASE("graph sequence does not depend on protocol streams") {
    Scenario s = scenario(6, Algorithm::A4, GraphKind::T_complete_random, 20, 1);
    s.graph.params.T = 3;
    s.graph.params.density = 0.2;
    s.params.N = 12;
    s.params.ell_override = 32;
    s.graph.seed = 777;
    Scenario reseeded = s;
    reseeded.master_seed = 2;
    const Trace a = run(s);
    const Trace b = run(reseeded);
    bool protocol_differs = false;
    for (Round t = 1; t <= 20; ++t) {
        CHECK(a.graph(t) == b.graph(t));
        protocol_differs = protocol_differs || !(a.round(t).nodes[0].sent == b.round(t).nodes[0].sent);
    }
    CHECK(protocol_differs);

    // Without a pinned graph seed the graph follows the master seed.
    s.graph.seed.reset();
    reseeded.graph.seed.reset();
    bool graph_differs = false;
    const Trace c = run(s);
    const Trace d = run(reseeded);
    for (Round t = 1; t <= 20; ++t) graph_differs = graph_differs || !(c.graph(t) == d.graph(t));
    CHECK(graph_differs);
}

TEST_CASE("self-delivery and communication closure") {
    Scenario s = scenario(6, Algorithm::A3, GraphKind::cT_cycle, 25, 4);
    s.graph.params.T = 2;
    s.graph.params.density = 0.1;
    set_starts(s, {1, 3, 5, 2, 8, 4});
    const Trace tr = run(s);
    for (Round t = 1; t <= tr.horizon(); ++t) {
        for (std::size_t i = 0; i < tr.node_count(); ++i) {
            if (!tr.active(i, t)) continue;
            const auto inbox = tr.inbox(i, t);
            // Own message of this round is in the inbox.
            CHECK(std::find(inbox.begin(), inbox.end(), tr.round(t).nodes[i].sent) != inbox.end());
            // Replaying the step on the recorded inbox reproduces the recorded state.
            CHECK(step(*tr.round(t).nodes[i].before, inbox, s.params) == *tr.round(t).nodes[i].after);
            if (t > tr.start_of(i)) CHECK(*tr.round(t).nodes[i].before == *tr.round(t - 1).nodes[i].after);
        }
    }
}

TEST_CASE("active edges leave only active sources") {
    Scenario s = scenario(4, Algorithm::A1, GraphKind::constant_complete, 6);
    set_starts(s, {1, 3, 3, 5});
    const Trace tr = run(s);
    for (Round t = 1; t <= 6; ++t) {
        const auto edges = tr.active_edges(t);
        const Digraph g = tr.active_subgraph(t);
        for (auto [u, v] : edges) {
            CHECK(tr.graph(t).has_edge(u, v));
            CHECK(tr.active(tr.index_of(u), t));
            CHECK(g.has_edge(u, v));
        }
        std::size_t expected = 0;
        for (std::size_t i = 0; i < 4; ++i) expected += tr.active(i, t) ? 4 : 0;
        CHECK(edges.size() == expected);
    }
}

TEST_CASE("passive nodes only matter through their nulls") {
    // Removing a passive node's out-edges and handing its nulls to the
    // receivers directly changes nothing.
    Scenario s = scenario(5, Algorithm::A1, GraphKind::eventually_connected_sparse, 20, 3);
    s.graph.params.density = 0.3;
    set_starts(s, {1, 6, 2, 9, 4});
    const Trace tr = run(s);
    std::vector<std::optional<NodeState>> state(5);
    for (Round t = 1; t <= tr.horizon(); ++t) {
        const Digraph g = tr.graph(t);
        for (std::size_t i = 0; i < 5; ++i) {
            if (t == tr.start_of(i)) state[i] = *tr.round(t).nodes[i].before;
        }
        std::vector<std::optional<NodeState>> next = state;
        for (std::size_t u = 0; u < 5; ++u) {
            if (!state[u]) continue;
            std::vector<Message> inbox;
            bool null_seen = false;
            for (std::size_t v = 0; v < 5; ++v) {
                if (!g.has_edge_at(v, u)) continue;
                if (state[v]) {
                    inbox.push_back(emit(*state[v], s.params));
                } else {
                    null_seen = true;
                }
            }
            if (null_seen) inbox.push_back(NullMessage{});
            next[u] = step(*state[u], inbox, s.params);
            CHECK(*next[u] == *tr.round(t).nodes[u].after);
        }
        state = next;
    }
}

TEST_CASE("terminating variant freezes detected nodes") {
    Scenario s = scenario(4, Algorithm::A2, GraphKind::constant_complete, 15);
    s.params.T = 2;
    s.terminate_on_detect = true;
    set_starts(s, {1, 2, 3, 4});
    const Trace tr = run(s);
    for (std::size_t i = 0; i < 4; ++i) {
        const NodeState* frozen = nullptr;
        for (Round t = tr.start_of(i); t <= tr.horizon(); ++t) {
            const NodeState& after = *tr.round(t).nodes[i].after;
            if (frozen) CHECK(after == *frozen);
            if (!frozen && after.synch) frozen = &after;
        }
        CHECK(frozen != nullptr);
    }
}

TEST_CASE("inbox transcript") {
    Scenario s = scenario(3, Algorithm::A1, GraphKind::constant_complete, 3);
    set_starts(s, {1, 2, 2});
    const Trace tr = run(s);
    const auto bytes = tr.inbox_transcript(0, 2);
    // Round 1: 3 messages [A1 0], null, null. Round 2: [A1 0] x3.
    const std::vector<std::uint8_t> expected = {3, 2, 1, 0, 1, 0, 1, 0, 3, 2, 1, 0, 2, 1, 0, 2, 1, 0};
    CHECK(bytes == expected);
}

TEST_CASE("batch equals sequential runs") {
    Scenario base = scenario(5, Algorithm::A4, GraphKind::cT_cycle, 25, 11);
    base.params.N = 10;
    base.params.ell_override = 200;
    set_starts(base, {1, 2, 3, 4, 5});
    const auto runs = expand_seeds(base, 12);
    CHECK(runs.size() == 12);
    std::set<std::uint64_t> seeds;
    for (const Scenario& r : runs) seeds.insert(r.master_seed);
    CHECK(seeds.size() == 12);

    CheckPlan plan;
    plan.checks = {"synchronization", "detection", "simultaneity", "bound"};
    const auto parallel = batch(runs, plan, 4);
    const auto sequential = batch(runs, plan, 1);
    REQUIRE(parallel.size() == 12);
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const RunSummary single = run_and_summarize(runs[i], plan);
        for (const RunSummary* r : {&parallel[i], &sequential[i]}) {
            CHECK(r->seed == single.seed);
            CHECK(r->t_synch == single.t_synch);
            CHECK(r->detection_rounds == single.detection_rounds);
            CHECK(r->simultaneous == single.simultaneous);
            CHECK(r->max_msg_bytes == single.max_msg_bytes);
            CHECK(r->failed() == single.failed());
            REQUIRE(r->verdicts.size() == single.verdicts.size());
            for (std::size_t k = 0; k < single.verdicts.size(); ++k) {
                CHECK(r->verdicts[k].status == single.verdicts[k].status);
            }
        }
    }
    CHECK(batch({}, plan, 4).empty());
}

TEST_CASE("batch records per-run errors and carries on") {
    Scenario good = scenario(3, Algorithm::A1, GraphKind::constant_complete, 10);
    Scenario bad = good;
    bad.horizon = 0;
    const std::vector<Scenario> runs = {good, bad, good};
    CheckPlan plan;
    plan.checks = {"synchronization"};
    const auto out = batch(runs, plan, 2);
    REQUIRE(out.size() == 3);
    CHECK(out[0].error.empty());
    CHECK_FALSE(out[1].error.empty());
    CHECK(out[1].failed());
    CHECK_FALSE(out[2].failed());
}
