#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "dynsync/node_id.hpp"
#include "dynsync/randvar.hpp"
#include "dynsync/rng.hpp"

namespace dynsync {

// A1: counters only (eventual synchronization).
// A2: counters + detection at r >= T (T-complete graphs).
// A3: counters + heard-of sets ((c,T) in-connected graphs).
// A4: counters + min-of-exponentials size estimate (randomized, bound N).
// A5: counters + heard-of and ready sets (exact size n known).
enum class Algorithm { A1, A2, A3, A4, A5 };

std::string_view to_string(Algorithm a);
Algorithm algorithm_from_string(std::string_view name);

struct ProtocolParams {
    Algorithm algorithm = Algorithm::A1;
    int T = 1;       // A2, A3
    int c = 1;       // A3
    int N = 1;       // A4: upper bound on n
    double eta = 0.25;  // A4
    int n_exact = 1;    // A5
    std::optional<int> ell_override;  // A4; non-conforming when set

    // Throws std::invalid_argument when a required parameter is out of range.
    void validate() const;
    // Estimator length for A4.
    int ell() const;

    friend bool operator==(const ProtocolParams&, const ProtocolParams&) = default;
};

struct NullMessage {
    friend bool operator==(const NullMessage&, const NullMessage&) = default;
};
struct CounterMessage {  // A1
    std::uint64_t r = 0;
    friend bool operator==(const CounterMessage&, const CounterMessage&) = default;
};
struct DetectMessage {  // A2
    std::uint64_t r = 0;
    friend bool operator==(const DetectMessage&, const DetectMessage&) = default;
};
struct HeardOfMessage {  // A3
    std::uint64_t r = 0;
    IdSet ho;
    friend bool operator==(const HeardOfMessage&, const HeardOfMessage&) = default;
};
struct SketchMessage {  // A4
    std::uint64_t r = 0;
    EstimatorVector y;
    friend bool operator==(const SketchMessage&, const SketchMessage&) = default;
};
struct ReadyMessage {  // A5
    std::uint64_t r = 0;
    IdSet ho;
    IdSet ok;
    friend bool operator==(const ReadyMessage&, const ReadyMessage&) = default;
};

using Message = std::variant<NullMessage, CounterMessage, DetectMessage, HeardOfMessage, SketchMessage, ReadyMessage>;

inline bool is_null(const Message& m) { return std::holds_alternative<NullMessage>(m); }

struct NodeState {
    NodeId self;
    Round active_since = 0;
    std::uint64_t r = 0;
    bool synch = false;
    IdSet ho;            // A3, A5
    IdSet ok;            // A5
    EstimatorVector y;   // A4
    double n_hat = 0.0;  // A4

    friend bool operator==(const NodeState&, const NodeState&) = default;
};

// Local state set up on the start signal at the beginning of round `start`.
// Only A4 consumes randomness.
NodeState init(NodeId self, Round start, const ProtocolParams& params, RngStream& rng);

Message emit(const NodeState& state, const ProtocolParams& params);

// One round of the state machine. `received` holds one message per
// in-neighbour, the node's own message included.
NodeState step(const NodeState& state, std::span<const Message> received, const ProtocolParams& params);

// Detection threshold of A3: ceil(c (r+1) / T) - c, in integers.
std::int64_t heard_of_threshold(std::uint64_t r, int c, int T);

// Canonical serialization: tag byte (0 = null, 1..5 = A1..A5), r as
// LEB128, sets as LEB128 count followed by LEB128 ids in increasing
// order, estimator vectors as in encode_vector.
std::vector<std::uint8_t> encode(const Message& m);
std::size_t encoded_size(const Message& m);
Message decode(std::span<const std::uint8_t> bytes);

} // namespace dynsync
