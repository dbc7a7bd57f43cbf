#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>

#include "sensec/errors.hpp"

// Arithmetic in GF(p) for the 80-bit Generalized Mersenne prime
// p = 2^80 - 2^64 - 2^32 - 1. The prime's shape makes 2^80 congruent to
// 2^64 + 2^32 + 1, so reduction is limb rearrangement instead of division.

namespace sensec::gf80 {

using uint128 = unsigned __int128;

inline constexpr uint128 MASK_80 = (uint128{1} << 80) - 1;
// 2^80 mod p
inline constexpr uint128 FOLD_80 = (uint128{1} << 64) + (uint128{1} << 32) + 1;
inline constexpr uint128 P = (uint128{1} << 80) - FOLD_80;

// An element of GF(p), kept fully reduced at every API boundary.
struct FieldElement {
    uint128 v = 0;  // invariant: v < P

    friend constexpr bool operator==(const FieldElement&, const FieldElement&) = default;
};

constexpr FieldElement fe_from_u64(std::uint64_t x) { return FieldElement{x}; }

// A sensor identity, valid when 0 < value < 2^16.
struct NodeId {
    std::uint16_t value = 0;

    friend constexpr auto operator<=>(const NodeId&, const NodeId&) = default;
};

constexpr bool node_id_valid(std::uint32_t id) { return id > 0 && id < 65536; }

inline NodeId make_node_id(std::uint32_t id) {
    if (!node_id_valid(id)) throw InvalidId(id);
    return NodeId{static_cast<std::uint16_t>(id)};
}

constexpr FieldElement add(FieldElement a, FieldElement b) {
    uint128 s = a.v + b.v;
    if (s >= P) s -= P;
    return FieldElement{s};
}

constexpr FieldElement sub(FieldElement a, FieldElement b) {
    uint128 s = a.v + P - b.v;
    if (s >= P) s -= P;
    return FieldElement{s};
}

// Reduce r < 2^96 by the limb split r = r5 * 2^80 + s: the high 16-bit limb
// folds back as r5 * (2^64 + 2^32 + 1). One 80-bit addition and at most two
// conditional subtractions; s + t < 3p by the bounds on both parts.
constexpr FieldElement reduce96(uint128 r) {
    const uint128 r5 = r >> 80;
    const uint128 t = (r5 << 64) + (r5 << 32) + r5;
    uint128 v = (r & MASK_80) + t;
    if (v >= P) v -= P;
    if (v >= P) v -= P;
    return FieldElement{v};
}

// id * a as a 16 x 80 -> 96-bit product followed by the fast reduction.
// This is the only multiplication shape the node-side hot path needs.
constexpr FieldElement mul_small(NodeId id, FieldElement a) {
    return reduce96(uint128{id.value} * a.v);
}

// Reduce an arbitrary 128-bit value: fold the bits above 2^80 three times
// (128 -> ~112 -> ~96 -> ~81 bits), then at most two subtractions.
constexpr FieldElement reduce_wide(uint128 r) {
    for (int i = 0; i < 3; ++i) {
        const uint128 hi = r >> 80;
        r = (r & MASK_80) + (hi << 64) + (hi << 32) + hi;
    }
    if (r >= P) r -= P;
    if (r >= P) r -= P;
    return FieldElement{r};
}

// General multiplication, used by the interpolation oracle and tests only.
// Splitting b at 40 bits keeps every partial product below 2^120.
constexpr FieldElement mul(FieldElement a, FieldElement b) {
    const uint128 b_lo = b.v & ((uint128{1} << 40) - 1);
    const uint128 b_hi = b.v >> 40;
    const FieldElement hi = reduce_wide(a.v * b_hi);
    const FieldElement hi_shifted = reduce_wide(hi.v << 40);
    const FieldElement lo = reduce_wide(a.v * b_lo);
    return add(hi_shifted, lo);
}

constexpr FieldElement pow(FieldElement base, uint128 exponent) {
    FieldElement acc{1};
    FieldElement b = base;
    while (exponent != 0) {
        if (exponent & 1) acc = mul(acc, b);
        b = mul(b, b);
        exponent >>= 1;
    }
    return acc;
}

// Inverse by Fermat: a^(p-2). Throws on zero.
inline FieldElement inv(FieldElement a) {
    if (a.v == 0) throw ZeroInverse();
    return pow(a, P - 2);
}

// Horner evaluation of sum(coeffs[i] * x^i) with coefficients ordered
// highest degree first. Only short-by-long multiplies and additions appear
// on this path.
inline FieldElement horner_eval(std::span<const FieldElement> coeffs_high_first, NodeId x) {
    if (coeffs_high_first.empty()) throw EmptyPolynomial();
    FieldElement acc = coeffs_high_first.front();
    for (std::size_t i = 1; i < coeffs_high_first.size(); ++i) {
        acc = add(mul_small(x, acc), coeffs_high_first[i]);
    }
    return acc;
}

// Canonical 10-byte little-endian encoding; the byte order matches the
// 16-bit limb decomposition the reduction is defined on.
using Encoded = std::array<std::uint8_t, 10>;

constexpr Encoded encode(FieldElement a) {
    Encoded out{};
    for (int i = 0; i < 10; ++i) out[i] = static_cast<std::uint8_t>(a.v >> (8 * i));
    return out;
}

// Rejects encodings of values >= p (and any length other than 10 bytes).
constexpr std::optional<FieldElement> decode(std::span<const std::uint8_t> bytes) {
    if (bytes.size() != 10) return std::nullopt;
    uint128 v = 0;
    for (int i = 9; i >= 0; --i) v = (v << 8) | bytes[static_cast<std::size_t>(i)];
    if (v >= P) return std::nullopt;
    return FieldElement{v};
}

}  // namespace sensec::gf80
