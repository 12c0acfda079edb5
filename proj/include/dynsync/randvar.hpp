#pragma once

#include <cstddef>
#include <cstdint>
#include <compare>
#include <span>
#include <vector>

#include "dynsync/rng.hpp"

namespace dynsync {

// Base of the geometric grid on which estimator entries live.
inline constexpr double kGridRatio = 13.0 / 12.0;

// A grid value (13/12)^exponent. Ordering is exponent ordering, which
// agrees with the ordering of the real values.
struct RoundedExp {
    std::int32_t exponent = 0;

    double value() const;
    // Largest grid point <= x. x must be positive.
    static RoundedExp round_down(double x);

    friend constexpr auto operator<=>(RoundedExp, RoundedExp) = default;
};

// Exponent bounds of the restricted range [eta/(4 ell N), ln(4 ell N / eta)]:
// lo is the smallest grid point >= the lower bound, hi the largest grid
// point <= the upper bound.
struct GridRange {
    std::int32_t lo = 0;
    std::int32_t hi = 0;

    std::size_t size() const { return static_cast<std::size_t>(hi - lo + 1); }
};

GridRange grid_range(int ell, int N, double eta);

// ceil(243 * (ln(4 N^2) - ln eta)).
int ell_of(int N, double eta);

// Rate-1 exponential draw by inverse CDF of a (0,1] uniform.
double draw_exponential(RngStream& rng);

// Clamp into the range, round down to the grid, then keep the exponent
// inside [lo, hi].
RoundedExp restrict_to_grid(double x, const GridRange& range);

struct EstimatorVector {
    std::vector<RoundedExp> entries;

    std::size_t size() const { return entries.size(); }
    friend bool operator==(const EstimatorVector&, const EstimatorVector&) = default;
};

EstimatorVector sample_vector(int ell, int N, double eta, RngStream& rng);

// ell / sum of entry values.
double estimate(const EstimatorVector& v);

EstimatorVector pointwise_min(const EstimatorVector& a, const EstimatorVector& b);
void pointwise_min_into(EstimatorVector& acc, const EstimatorVector& b);

// Wire form: unsigned LEB128 length, then one little-endian int16 per entry.
inline constexpr std::size_t kExponentWireBytes = 2;
void encode_vector(const EstimatorVector& v, std::vector<std::uint8_t>& out);
EstimatorVector decode_vector(std::span<const std::uint8_t> in, std::size_t& pos);

// LEB128 helpers shared with the message codec.
void put_varint(std::uint64_t value, std::vector<std::uint8_t>& out);
std::uint64_t get_varint(std::span<const std::uint8_t> in, std::size_t& pos);

} // namespace dynsync
