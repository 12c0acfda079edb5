#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/strong_components.hpp>

#include "dynsync/digraph.hpp"
#include "oracles.hpp"

using namespace dynsync;
using oracle::ids;

namespace {

bool boost_strongly_connected(const Digraph& g) {
    using BG = boost::adjacency_list<boost::vecS, boost::vecS, boost::directedS>;
    BG bg(g.size());
    for (auto [a, b] : g.edges()) boost::add_edge(g.index_of(a), g.index_of(b), bg);
    std::vector<int> comp(g.size());
    return boost::strong_components(bg, comp.data()) == 1;
}

Digraph star(std::uint32_t n, std::uint32_t hub) {
    return Digraph::out_star(ids(n), NodeId{hub});
}

} // namespace

TEST_CASE("identity and complete graphs") {
    const Digraph i(ids(4));
    CHECK(i.edge_count() == 4);
    for (NodeId u : i.nodes()) CHECK(i.has_edge(u, u));
    CHECK(Digraph::complete(ids(4)).is_complete());
    CHECK_FALSE(i.is_complete());
    CHECK(Digraph(ids(1)).is_complete());
}

TEST_CASE("edges must stay inside the node set") {
    Digraph g(ids(3));
    CHECK_THROWS_AS(g.add_edge(NodeId{1}, NodeId{9}), std::out_of_range);
    CHECK_THROWS_AS(g.in_neighbors(NodeId{9}), std::out_of_range);
    CHECK_THROWS_AS(Digraph(ids(65)), std::invalid_argument);
}

TEST_CASE("product examples") {
    const Digraph i(ids(5));
    CHECK(product(i, i) == i);

    for (std::uint32_t n : {1U, 2U, 5U, 9U}) {
        const Digraph k = Digraph::complete(ids(n));
        CHECK(product(k, k) == k);
    }

    SUBCASE("directed 4-cycle squared reaches the next two nodes") {
        const Digraph c = oracle::cycle(4);
        const Digraph c2 = product(c, c);
        CHECK(oracle::edge_set(c2) == oracle::product(c, c));
        for (std::uint32_t u = 1; u <= 4; ++u) {
            const std::uint32_t next = u % 4 + 1;
            const std::uint32_t next2 = next % 4 + 1;
            CHECK(c2.out_neighbors(NodeId{u}) == make_id_set({NodeId{u}, NodeId{next}, NodeId{next2}}));
        }
        CHECK(c2.edge_count() == 12);
    }

    CHECK_THROWS_AS(product(Digraph(ids(3)), Digraph(ids(4))), std::invalid_argument);
    CHECK_THROWS_AS(product(Digraph(ids(3)), Digraph(ids(3, 2))), std::invalid_argument);
}

TEST_CASE("product agrees with two-hop enumeration") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const auto n = static_cast<std::uint32_t>(1 + trial % 8);
        const Digraph g = oracle::random_digraph(n, 0.3, rng);
        const Digraph h = oracle::random_digraph(n, 0.3, rng);
        CHECK(oracle::edge_set(product(g, h)) == oracle::product(g, h));
    }
}

TEST_CASE("product is associative and keeps self-loops") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 300; ++trial) {
        const auto n = static_cast<std::uint32_t>(1 + trial % 8);
        const Digraph a = oracle::random_digraph(n, 0.25, rng);
        const Digraph b = oracle::random_digraph(n, 0.25, rng);
        const Digraph c = oracle::random_digraph(n, 0.25, rng);
        const Digraph left = product(product(a, b), c);
        CHECK(left == product(a, product(b, c)));
        for (NodeId u : left.nodes()) CHECK(left.has_edge(u, u));
    }
}

TEST_CASE("complete graphs absorb") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        const auto n = static_cast<std::uint32_t>(1 + trial % 8);
        const Digraph k = Digraph::complete(ids(n));
        const Digraph h = oracle::random_digraph(n, 0.2, rng);
        CHECK(product(k, h).is_complete());
        CHECK(product(h, k).is_complete());
    }
}

TEST_CASE("in_neighbors examples") {
    const Digraph i(ids(4));
    for (NodeId u : i.nodes()) CHECK(i.in_neighbors(u) == IdSet{u});
    const Digraph k = Digraph::complete(ids(4));
    for (NodeId u : k.nodes()) CHECK(k.in_neighbors(u) == ids(4));
    const Digraph s = star(5, 2);
    CHECK(s.in_neighbors(NodeId{4}) == make_id_set({NodeId{2}, NodeId{4}}));
    CHECK(s.in_neighbors(NodeId{2}) == IdSet{NodeId{2}});
    CHECK(s.transpose().in_neighbors(NodeId{2}) == ids(5));
}

TEST_CASE("c in-connectivity examples") {
    for (std::uint32_t n = 2; n <= 7; ++n) {
        CHECK(is_c_in_connected(Digraph::complete(ids(n)), static_cast<int>(n) - 1));
        CHECK(is_c_out_connected(Digraph::complete(ids(n)), static_cast<int>(n) - 1));
        CHECK(is_c_in_connected(oracle::cycle(n), 1));
        CHECK(is_c_out_connected(oracle::cycle(n), 1));
    }
    CHECK_FALSE(is_c_in_connected(Digraph(ids(2)), 1));
    CHECK_FALSE(is_c_out_connected(Digraph(ids(2)), 1));

    // (n-1) in-connected only when complete.
    Digraph almost(ids(4));
    for (std::uint32_t a = 1; a <= 4; ++a)
        for (std::uint32_t b = 1; b <= 4; ++b)
            if (!(a == 1 && b == 2)) almost.add_edge(NodeId{a}, NodeId{b});
    CHECK_FALSE(is_c_in_connected(almost, 3));
    CHECK(is_c_in_connected(almost, 2));
}

TEST_CASE("c in-connectivity parameter checks") {
    CHECK_THROWS_AS(is_c_in_connected(Digraph(ids(1)), 1), std::invalid_argument);
    CHECK_THROWS_AS(is_c_in_connected(Digraph(ids(4)), 0), std::invalid_argument);
    CHECK_THROWS_AS(is_c_in_connected(Digraph(ids(4)), 4), std::invalid_argument);
    CHECK_THROWS_AS(is_c_out_connected(Digraph(ids(4)), 4), std::invalid_argument);
}

TEST_CASE("in- and out-connectivity agree with the literal definition") {
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 300; ++trial) {
        const auto n = static_cast<std::uint32_t>(2 + trial % 6);
        const double p = std::uniform_real_distribution<double>(0.1, 0.8)(rng);
        const Digraph g = oracle::random_digraph(n, p, rng);
        for (int c = 1; c < static_cast<int>(n); ++c) {
            CHECK(is_c_in_connected(g, c) == oracle::c_in_connected(g, c));
            CHECK(is_c_out_connected(g, c) == oracle::c_out_connected(g, c));
        }
    }
}

TEST_CASE("1 in-connected iff strongly connected, cross-checked with Boost") {
    std::mt19937_64 rng(15);
    int connected = 0;
    for (int trial = 0; trial < 400; ++trial) {
        const auto n = static_cast<std::uint32_t>(2 + trial % 9);
        const double p = std::uniform_real_distribution<double>(0.05, 0.5)(rng);
        const Digraph g = oracle::random_digraph(n, p, rng);
        const bool sc = boost_strongly_connected(g);
        connected += sc ? 1 : 0;
        CHECK(is_strongly_connected(g) == sc);
        CHECK(is_c_in_connected(g, 1) == sc);
    }
    // Both outcomes were exercised.
    CHECK(connected > 20);
    CHECK(connected < 380);
}

TEST_CASE("transpose swaps edge direction") {
    std::mt19937_64 rng(16);
    const Digraph g = oracle::random_digraph(6, 0.4, rng);
    const Digraph t = g.transpose();
    for (auto [a, b] : g.edges()) CHECK(t.has_edge(b, a));
    CHECK(t.edge_count() == g.edge_count());
    CHECK(t.transpose() == g);
}
