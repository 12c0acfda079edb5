#include "dynsync/protocol.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace dynsync {

std::string_view to_string(Algorithm a) {
    switch (a) {
    case Algorithm::A1: return "A1";
    case Algorithm::A2: return "A2";
    case Algorithm::A3: return "A3";
    case Algorithm::A4: return "A4";
    case Algorithm::A5: return "A5";
    }
    return "?";
}

Algorithm algorithm_from_string(std::string_view name) {
    for (auto a : {Algorithm::A1, Algorithm::A2, Algorithm::A3, Algorithm::A4, Algorithm::A5}) {
        if (to_string(a) == name) return a;
    }
    throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

void ProtocolParams::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(std::string("protocol params: ") + what);
    };
    switch (algorithm) {
    case Algorithm::A1: break;
    case Algorithm::A2: require(T >= 1, "T must be >= 1"); break;
    case Algorithm::A3:
        require(T >= 1, "T must be >= 1");
        require(c >= 1, "c must be >= 1");
        break;
    case Algorithm::A4:
        require(N >= 1, "N must be >= 1");
        require(eta > 0.0 && eta <= 0.5, "eta must lie in (0, 1/2]");
        require(!ell_override || *ell_override >= 1, "ell must be >= 1");
        break;
    case Algorithm::A5: require(n_exact >= 1, "n must be >= 1"); break;
    }
}

int ProtocolParams::ell() const { return ell_override ? *ell_override : ell_of(N, eta); }

NodeState init(NodeId self, Round start, const ProtocolParams& params, RngStream& rng) {
    params.validate();
    NodeState s;
    s.self = self;
    s.active_since = start;
    switch (params.algorithm) {
    case Algorithm::A1:
    case Algorithm::A2: break;
    case Algorithm::A3: s.ho = {self}; break;
    case Algorithm::A4: s.y = sample_vector(params.ell(), params.N, params.eta, rng); break;
    case Algorithm::A5: s.ho = {self}; break;
    }
    return s;
}

Message emit(const NodeState& s, const ProtocolParams& params) {
    switch (params.algorithm) {
    case Algorithm::A1: return CounterMessage{s.r};
    case Algorithm::A2: return DetectMessage{s.r};
    case Algorithm::A3: return HeardOfMessage{s.r, s.ho};
    case Algorithm::A4: return SketchMessage{s.r, s.y};
    case Algorithm::A5: return ReadyMessage{s.r, s.ho, s.ok};
    }
    throw std::logic_error("emit: unhandled algorithm");
}

std::int64_t heard_of_threshold(std::uint64_t r, int c, int T) {
    const auto num = static_cast<std::int64_t>(c) * (static_cast<std::int64_t>(r) + 1);
    const auto ceil_div = (num + T - 1) / T;
    return ceil_div - c;
}

namespace {

std::size_t expected_index(Algorithm a) { return static_cast<std::size_t>(a) + 1; }

std::uint64_t r_of(const Message& m) {
    return std::visit(
        [](const auto& msg) -> std::uint64_t {
            if constexpr (std::is_same_v<std::decay_t<decltype(msg)>, NullMessage>) {
                return 0;
            } else {
                return msg.r;
            }
        },
        m);
}

} // namespace

NodeState step(const NodeState& state, std::span<const Message> received, const ProtocolParams& params) {
    if (received.empty()) throw std::invalid_argument("step: empty inbox (self-loop message missing)");
    const std::size_t want = expected_index(params.algorithm);
    bool saw_null = false;
    std::uint64_t min_r = std::numeric_limits<std::uint64_t>::max();
    for (const Message& m : received) {
        if (is_null(m)) {
            saw_null = true;
        } else if (m.index() != want) {
            throw std::invalid_argument("step: message variant does not match the configured algorithm");
        } else {
            min_r = std::min(min_r, r_of(m));
        }
    }

    NodeState next = state;
    if (saw_null) {
        next.r = 0;
    } else {
        next.r = 1 + min_r;
    }

    switch (params.algorithm) {
    case Algorithm::A1: break;
    case Algorithm::A2:
        if (next.r >= static_cast<std::uint64_t>(params.T)) next.synch = true;
        break;
    case Algorithm::A3: {
        IdSet ho;
        for (const Message& m : received) {
            if (const auto* h = std::get_if<HeardOfMessage>(&m)) ho = set_union(ho, h->ho);
        }
        next.ho = std::move(ho);
        if (static_cast<std::int64_t>(next.ho.size()) <= heard_of_threshold(next.r, params.c, params.T)) {
            next.synch = true;
        }
        break;
    }
    case Algorithm::A4: {
        bool first = true;
        for (const Message& m : received) {
            if (const auto* sk = std::get_if<SketchMessage>(&m)) {
                if (first) {
                    next.y = sk->y;
                    first = false;
                } else {
                    pointwise_min_into(next.y, sk->y);
                }
            }
        }
        // An inbox of nulls only leaves y untouched; the own message is
        // never null for an active node.
        next.n_hat = estimate(next.y);
        if (3.0 * next.n_hat < 2.0 * static_cast<double>(next.r)) next.synch = true;
        break;
    }
    case Algorithm::A5: {
        IdSet ho;
        IdSet ok;
        for (const Message& m : received) {
            if (const auto* rm = std::get_if<ReadyMessage>(&m)) {
                ho = set_union(ho, rm->ho);
                ok = set_union(ok, rm->ok);
            }
        }
        next.ho = std::move(ho);
        next.ok = std::move(ok);
        const auto n = static_cast<std::size_t>(params.n_exact);
        if (next.ho.size() == n) next.ok = set_union(next.ok, IdSet{state.self});
        if (next.ok.size() == n) next.synch = true;
        break;
    }
    }
    return next;
}

namespace {

void put_set(const IdSet& s, std::vector<std::uint8_t>& out) {
    put_varint(s.size(), out);
    for (NodeId id : s) put_varint(id.value, out);
}

IdSet get_set(std::span<const std::uint8_t> in, std::size_t& pos) {
    const std::uint64_t count = get_varint(in, pos);
    if (count > in.size() - pos) throw std::invalid_argument("decode: truncated set");
    IdSet s;
    s.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        const std::uint64_t v = get_varint(in, pos);
        if (v > std::numeric_limits<std::uint32_t>::max()) throw std::invalid_argument("decode: id out of range");
        s.push_back(NodeId{static_cast<std::uint32_t>(v)});
    }
    if (!std::is_sorted(s.begin(), s.end()) || std::adjacent_find(s.begin(), s.end()) != s.end()) {
        throw std::invalid_argument("decode: set not in canonical order");
    }
    return s;
}

} // namespace

std::vector<std::uint8_t> encode(const Message& m) {
    std::vector<std::uint8_t> out;
    out.push_back(static_cast<std::uint8_t>(m.index()));
    std::visit(
        [&out](const auto& msg) {
            using M = std::decay_t<decltype(msg)>;
            if constexpr (!std::is_same_v<M, NullMessage>) put_varint(msg.r, out);
            if constexpr (std::is_same_v<M, HeardOfMessage>) put_set(msg.ho, out);
            if constexpr (std::is_same_v<M, SketchMessage>) encode_vector(msg.y, out);
            if constexpr (std::is_same_v<M, ReadyMessage>) {
                put_set(msg.ho, out);
                put_set(msg.ok, out);
            }
        },
        m);
    return out;
}

std::size_t encoded_size(const Message& m) { return encode(m).size(); }

Message decode(std::span<const std::uint8_t> bytes) {
    if (bytes.empty()) throw std::invalid_argument("decode: empty input");
    std::size_t pos = 1;
    Message m;
    switch (bytes[0]) {
    case 0: m = NullMessage{}; break;
    case 1: m = CounterMessage{get_varint(bytes, pos)}; break;
    case 2: m = DetectMessage{get_varint(bytes, pos)}; break;
    case 3: {
        HeardOfMessage h;
        h.r = get_varint(bytes, pos);
        h.ho = get_set(bytes, pos);
        m = std::move(h);
        break;
    }
    case 4: {
        SketchMessage s;
        s.r = get_varint(bytes, pos);
        s.y = decode_vector(bytes, pos);
        m = std::move(s);
        break;
    }
    case 5: {
        ReadyMessage rm;
        rm.r = get_varint(bytes, pos);
        rm.ho = get_set(bytes, pos);
        rm.ok = get_set(bytes, pos);
        m = std::move(rm);
        break;
    }
    default: throw std::invalid_argument("decode: unknown message tag");
    }
    if (pos != bytes.size()) throw std::invalid_argument("decode: trailing bytes");
    return m;
}

} // namespace dynsync
