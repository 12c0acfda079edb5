#include "dynsync/adversary.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <random>
#include <stdexcept>

#include "dynsync/rng.hpp"

namespace dynsync {

namespace {

// Sub-stream tags within the graph seed.
constexpr std::uint64_t kBaseTag = 1;
constexpr std::uint64_t kRepairTag = 2;
constexpr std::uint64_t kCycleTag = 3;
constexpr std::uint64_t kBlockTag = 4;
constexpr std::uint64_t kPhaseTag = 5;

RngStream round_rng(std::uint64_t seed, std::uint64_t tag, Round t) {
    return RngStream(derive_seed(seed, tag, static_cast<std::uint64_t>(t)));
}

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("adversary: ") + what);
}

} // namespace

std::string_view to_string(GraphKind kind) {
    switch (kind) {
    case GraphKind::constant_complete: return "constant_complete";
    case GraphKind::T_complete_random: return "T_complete_random";
    case GraphKind::cT_cycle: return "cT_cycle";
    case GraphKind::eventually_connected_sparse: return "eventually_connected_sparse";
    case GraphKind::star_alternation: return "star_alternation";
    case GraphKind::kw_vs_kuw: return "kw_vs_kuw";
    }
    return "?";
}

GraphKind graph_kind_from_string(std::string_view name) {
    for (auto k : {GraphKind::constant_complete, GraphKind::T_complete_random, GraphKind::cT_cycle,
                   GraphKind::eventually_connected_sparse, GraphKind::star_alternation, GraphKind::kw_vs_kuw}) {
        if (to_string(k) == name) return k;
    }
    throw std::invalid_argument("unknown graph kind '" + std::string(name) + "'");
}

DynamicGraphSource::DynamicGraphSource(std::vector<NodeId> nodes, AdversaryParams params, std::uint64_t seed)
    : nodes_(make_id_set(std::move(nodes))), params_(std::move(params)), seed_(seed) {
    require(!nodes_.empty(), "empty node set");
    require(nodes_.size() <= kMaxNodes, "too many nodes");
    require(params_.density >= 0.0 && params_.density <= 1.0, "density must lie in [0, 1]");
    const auto n = static_cast<int>(nodes_.size());
    switch (params_.kind) {
    case GraphKind::constant_complete: break;
    case GraphKind::T_complete_random: require(params_.T >= 1, "T must be >= 1"); break;
    case GraphKind::cT_cycle:
        require(params_.T >= 1, "T must be >= 1");
        require(params_.c >= 1, "c must be >= 1");
        require(n == 1 || params_.c < n, "c must be < n");
        ct_phase_ = static_cast<int>(derive_seed(seed_, kPhaseTag) % static_cast<std::uint64_t>(params_.T));
        break;
    case GraphKind::eventually_connected_sparse:
        require(params_.quiet_max >= 0, "quiet_max must be >= 0");
        require(params_.burst_len >= 1, "burst_len must be >= 1");
        break;
    case GraphKind::star_alternation:
        require(params_.lead_idle >= 0, "lead_idle must be >= 0");
        if (!params_.hub) params_.hub = nodes_.front();
        require(contains(nodes_, *params_.hub), "hub is not a node");
        break;
    case GraphKind::kw_vs_kuw:
        require(params_.outsider.has_value(), "kw_vs_kuw needs an outsider node");
        require(contains(nodes_, *params_.outsider), "outsider is not a node");
        require(params_.t0 >= 0, "t0 must be >= 0");
        break;
    }
}

Digraph DynamicGraphSource::at(Round t) const {
    if (t < 1) throw std::invalid_argument("adversary: rounds start at 1");
    switch (params_.kind) {
    case GraphKind::constant_complete: return Digraph::complete(nodes_);
    case GraphKind::T_complete_random: return t_complete_round(t);
    case GraphKind::cT_cycle: return ct_cycle_round(t);
    case GraphKind::eventually_connected_sparse: return eventually_connected_round(t);
    case GraphKind::star_alternation: return star_round(t);
    case GraphKind::kw_vs_kuw: return kw_round(t);
    }
    throw std::logic_error("adversary: unhandled kind");
}

Digraph DynamicGraphSource::random_digraph(Round t, double density) const {
    Digraph g(nodes_);
    if (density <= 0.0) return g;
    auto rng = round_rng(seed_, kBaseTag, t);
    for (std::size_t u = 0; u < g.size(); ++u) {
        for (std::size_t v = 0; v < g.size(); ++v) {
            if (u != v && uniform_open_closed(rng) <= density) g.add_edge_at(u, v);
        }
    }
    return g;
}

Digraph DynamicGraphSource::random_cycle_power(Round t, int power) const {
    Digraph g(nodes_);
    const std::size_t n = g.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto rng = round_rng(seed_, kCycleTag, t);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i = 0; i < n; ++i) {
        for (int j = 1; j <= power; ++j) {
            g.add_edge_at(order[i], order[(i + static_cast<std::size_t>(j)) % n]);
        }
    }
    return g;
}

// G(t) = base(t) plus repair edges making base(t-T+1) o ... o base(t-1) o G(t)
// complete. Real rounds contain their base graph, and products are monotone
// in the edge sets, so every real window is complete as well.
Digraph DynamicGraphSource::t_complete_round(Round t) const {
    const int T = params_.T;
    if (T == 1) return Digraph::complete(nodes_);
    Digraph g = random_digraph(t, params_.density);
    if (t < T) return g;

    Digraph prefix(nodes_);
    for (Round s = t - T + 1; s < t; ++s) prefix = product(prefix, random_digraph(s, params_.density));

    auto rng = round_rng(seed_, kRepairTag, t);
    const Mask all = g.all_mask();
    for (std::size_t u = 0; u < g.size(); ++u) {
        const Mask relays = prefix.out_mask(u);
        Mask reach = 0;
        for (Mask m = relays; m != 0; m &= m - 1) reach |= g.out_mask(static_cast<std::size_t>(std::countr_zero(m)));
        Mask missing = all & ~reach;
        std::vector<std::size_t> relay_list;
        for (Mask m = relays; m != 0; m &= m - 1) relay_list.push_back(static_cast<std::size_t>(std::countr_zero(m)));
        std::uniform_int_distribution<std::size_t> pick(0, relay_list.size() - 1);
        for (; missing != 0; missing &= missing - 1) {
            const auto v = static_cast<std::size_t>(std::countr_zero(missing));
            g.add_edge_at(relay_list[pick(rng)], v);
        }
    }
    return g;
}

Digraph DynamicGraphSource::ct_cycle_round(Round t) const {
    Digraph noise = random_digraph(t, params_.density);
    if (nodes_.size() < 2) return noise;
    if ((t - 1) % params_.T != ct_phase_) return noise;
    Digraph g = random_cycle_power(t, params_.c);
    for (auto [u, v] : noise.edges()) g.add_edge(u, v);
    return g;
}

Digraph DynamicGraphSource::eventually_connected_round(Round t) const {
    const Round period = params_.quiet_max + params_.burst_len;
    const Round block = (t - 1) / period;
    const Round offset = (t - 1) % period;
    auto block_rng = round_rng(seed_, kBlockTag, block);
    std::uniform_int_distribution<int> quiet(0, params_.quiet_max);
    const int quiet_len = quiet(block_rng);
    Digraph g = random_digraph(t, params_.density);
    if (offset >= quiet_len && offset < quiet_len + params_.burst_len && nodes_.size() > 1) {
        for (auto [u, v] : random_cycle_power(t, 1).edges()) g.add_edge(u, v);
    }
    return g;
}

Digraph DynamicGraphSource::star_round(Round t) const {
    if (t <= params_.lead_idle) return Digraph(nodes_);
    Digraph s = Digraph::out_star(nodes_, *params_.hub);
    return (t - params_.lead_idle) % 2 == 1 ? s : s.transpose();
}

Digraph DynamicGraphSource::kw_round(Round t) const {
    if (t > params_.t0) return Digraph::complete(nodes_);
    Digraph g(nodes_);
    const std::size_t out = g.index_of(*params_.outsider);
    for (std::size_t u = 0; u < g.size(); ++u) {
        for (std::size_t v = 0; v < g.size(); ++v) {
            if (u != out && v != out) g.add_edge_at(u, v);
        }
    }
    return g;
}

Digraph generate(const std::vector<NodeId>& nodes, const AdversaryParams& params, std::uint64_t seed, Round t) {
    return DynamicGraphSource(nodes, params, seed).at(t);
}

Digraph cumulative(const DynamicGraphSource& src, Round t, Round t_end) {
    if (t < 1 || t > t_end) throw std::invalid_argument("cumulative: need 1 <= t <= t_end");
    Digraph acc = src.at(t);
    for (Round s = t + 1; s <= t_end; ++s) acc = product(acc, src.at(s));
    return acc;
}

std::string describe(const ConnectivityClass& cls) {
    if (cls.kind == WindowClass::T_complete) return std::to_string(cls.T) + "-complete";
    return "(" + std::to_string(cls.c) + "," + std::to_string(cls.T) + ") in-connected";
}

namespace {

bool window_ok(const Digraph& g, const ConnectivityClass& cls) {
    if (cls.kind == WindowClass::T_complete) return g.is_complete();
    if (g.size() < 2) return true;
    return is_c_in_connected(g, cls.c);
}

template <typename GraphAt>
Certification certify_impl(GraphAt graph_at, const ConnectivityClass& cls, Round horizon) {
    if (cls.T < 1) throw std::invalid_argument("certify: T must be >= 1");
    if (horizon < cls.T) throw std::invalid_argument("certify: horizon must be >= T");
    Certification cert;
    cert.horizon = horizon;
    for (Round t = 1; t + cls.T - 1 <= horizon; ++t) {
        Digraph acc = graph_at(t);
        for (Round s = t + 1; s <= t + cls.T - 1; ++s) acc = product(acc, graph_at(s));
        ++cert.windows_checked;
        if (!window_ok(acc, cls)) {
            cert.first_failing_window = t;
            return cert;
        }
    }
    cert.certified = true;
    return cert;
}

} // namespace

Certification certify_window(const DynamicGraphSource& src, const ConnectivityClass& cls, Round horizon) {
    if (cls.kind == WindowClass::cT_in_connected && src.nodes().size() >= 2) {
        if (cls.c < 1 || cls.c >= static_cast<int>(src.nodes().size())) {
            throw std::invalid_argument("certify: c must satisfy 1 <= c < n");
        }
    }
    // Materialise once; windows overlap.
    std::vector<Digraph> graphs;
    graphs.reserve(static_cast<std::size_t>(std::max<Round>(horizon, 0)));
    for (Round t = 1; t <= horizon; ++t) graphs.push_back(src.at(t));
    return certify_impl([&](Round t) -> const Digraph& { return graphs[static_cast<std::size_t>(t - 1)]; }, cls,
                        horizon);
}

Certification certify_sequence(const std::vector<Digraph>& graphs, const ConnectivityClass& cls) {
    return certify_impl([&](Round t) -> const Digraph& { return graphs[static_cast<std::size_t>(t - 1)]; }, cls,
                        static_cast<Round>(graphs.size()));
}

} // namespace dynsync
