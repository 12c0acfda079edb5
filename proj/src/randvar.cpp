#include "dynsync/randvar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dynsync {

namespace {

const double kLogRatio = std::log(kGridRatio);

double grid_value(std::int32_t k) { return std::pow(kGridRatio, static_cast<double>(k)); }

} // namespace

double RoundedExp::value() const { return grid_value(exponent); }

RoundedExp RoundedExp::round_down(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument("round_down: value must be positive and finite");
    auto k = static_cast<std::int32_t>(std::floor(std::log(x) / kLogRatio));
    // Repair floating error at grid points.
    while (grid_value(k) > x) --k;
    while (grid_value(k + 1) <= x) ++k;
    return RoundedExp{k};
}

int ell_of(int N, double eta) {
    if (N < 1) throw std::invalid_argument("ell_of: N must be >= 1");
    if (!(eta > 0.0 && eta <= 0.5)) throw std::invalid_argument("ell_of: eta must lie in (0, 1/2]");
    const long double n = N;
    const long double v = 243.0L * (std::log(4.0L * n * n) - std::log(static_cast<long double>(eta)));
    return static_cast<int>(std::ceil(v));
}

GridRange grid_range(int ell, int N, double eta) {
    if (ell < 1 || N < 1) throw std::invalid_argument("grid_range: ell and N must be >= 1");
    if (!(eta > 0.0 && eta <= 0.5)) throw std::invalid_argument("grid_range: eta must lie in (0, 1/2]");
    const double scale = 4.0 * ell * N;
    const double lo = eta / scale;
    const double hi = std::log(scale / eta);
    GridRange r;
    r.lo = RoundedExp::round_down(lo).exponent;
    if (grid_value(r.lo) < lo) ++r.lo;
    r.hi = RoundedExp::round_down(hi).exponent;
    if (r.hi < r.lo) throw std::invalid_argument("grid_range: empty range");
    return r;
}

double draw_exponential(RngStream& rng) { return -std::log(uniform_open_closed(rng)); }

RoundedExp restrict_to_grid(double x, const GridRange& range) {
    const double lo = grid_value(range.lo);
    const double hi = grid_value(range.hi);
    const double clamped = std::clamp(x, lo, hi);
    RoundedExp r = RoundedExp::round_down(clamped);
    r.exponent = std::clamp(r.exponent, range.lo, range.hi);
    return r;
}

EstimatorVector sample_vector(int ell, int N, double eta, RngStream& rng) {
    const GridRange range = grid_range(ell, N, eta);
    EstimatorVector v;
    v.entries.reserve(static_cast<std::size_t>(ell));
    for (int i = 0; i < ell; ++i) v.entries.push_back(restrict_to_grid(draw_exponential(rng), range));
    return v;
}

double estimate(const EstimatorVector& v) {
    if (v.entries.empty()) throw std::invalid_argument("estimate: empty vector");
    double sum = 0.0;
    for (RoundedExp e : v.entries) sum += e.value();
    return static_cast<double>(v.entries.size()) / sum;
}

void pointwise_min_into(EstimatorVector& acc, const EstimatorVector& b) {
    if (acc.size() != b.size()) throw std::invalid_argument("pointwise_min: length mismatch");
    for (std::size_t i = 0; i < acc.size(); ++i) acc.entries[i] = std::min(acc.entries[i], b.entries[i]);
}

EstimatorVector pointwise_min(const EstimatorVector& a, const EstimatorVector& b) {
    EstimatorVector out = a;
    pointwise_min_into(out, b);
    return out;
}

void put_varint(std::uint64_t value, std::vector<std::uint8_t>& out) {
    while (value >= 0x80) {
        out.push_back(static_cast<std::uint8_t>(value | 0x80));
        value >>= 7;
    }
    out.push_back(static_cast<std::uint8_t>(value));
}

std::uint64_t get_varint(std::span<const std::uint8_t> in, std::size_t& pos) {
    std::uint64_t value = 0;
    for (int shift = 0; shift < 64; shift += 7) {
        if (pos >= in.size()) throw std::invalid_argument("varint: truncated input");
        const std::uint8_t byte = in[pos++];
        value |= static_cast<std::uint64_t>(byte & 0x7f) << shift;
        if ((byte & 0x80) == 0) return value;
    }
    throw std::invalid_argument("varint: too long");
}

void encode_vector(const EstimatorVector& v, std::vector<std::uint8_t>& out) {
    put_varint(v.size(), out);
    for (RoundedExp e : v.entries) {
        if (e.exponent < std::numeric_limits<std::int16_t>::min() ||
            e.exponent > std::numeric_limits<std::int16_t>::max()) {
            throw std::out_of_range("encode_vector: exponent does not fit the wire width");
        }
        const auto bits = static_cast<std::uint16_t>(static_cast<std::int16_t>(e.exponent));
        out.push_back(static_cast<std::uint8_t>(bits & 0xff));
        out.push_back(static_cast<std::uint8_t>(bits >> 8));
    }
}

EstimatorVector decode_vector(std::span<const std::uint8_t> in, std::size_t& pos) {
    const std::uint64_t len = get_varint(in, pos);
    if (len > (in.size() - pos) / kExponentWireBytes) throw std::invalid_argument("decode_vector: truncated input");
    EstimatorVector v;
    v.entries.reserve(len);
    for (std::uint64_t i = 0; i < len; ++i) {
        const auto bits = static_cast<std::uint16_t>(in[pos] | (in[pos + 1] << 8));
        pos += 2;
        v.entries.push_back(RoundedExp{static_cast<std::int16_t>(bits)});
    }
    return v;
}

} // namespace dynsync
