#pragma once

// Arbitrary-precision oracle used by tests only. Everything here goes through
// boost::multiprecision so none of the library's limb tricks are on the
// checking path.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "sensec/gf80.hpp"

namespace oracle {

using BigInt = boost::multiprecision::cpp_int;

inline const BigInt P = (BigInt(1) << 80) - (BigInt(1) << 64) - (BigInt(1) << 32) - 1;

inline BigInt to_big(sensec::gf80::uint128 v) {
    const BigInt hi = static_cast<std::uint64_t>(v >> 64);
    const BigInt lo = static_cast<std::uint64_t>(v);
    return (hi << 64) | lo;
}

inline BigInt to_big(sensec::gf80::FieldElement a) { return to_big(a.v); }

inline sensec::gf80::uint128 to_u128(const BigInt& b) {
    const auto hi = static_cast<std::uint64_t>(b >> 64);
    const auto lo = static_cast<std::uint64_t>(b & BigInt(~std::uint64_t{0}));
    return (sensec::gf80::uint128{hi} << 64) | lo;
}

inline sensec::gf80::FieldElement to_fe(const BigInt& b) {
    return sensec::gf80::FieldElement{to_u128(b % P)};
}

// Uniform element of GF(p) by rejection on 80-bit draws.
template <typename Rng>
sensec::gf80::FieldElement random_fe(Rng& rng) {
    for (;;) {
        sensec::gf80::uint128 v = rng();
        v = (v << 16) | (rng() & 0xffff);
        if (v < sensec::gf80::P) return sensec::gf80::FieldElement{v};
    }
}

template <typename Rng>
sensec::gf80::NodeId random_id(Rng& rng) {
    return sensec::gf80::NodeId{static_cast<std::uint16_t>(1 + rng() % 65535)};
}

// Naive power-sum evaluation of sum(coeffs[i] * x^i), constant term first.
inline BigInt eval_poly(std::span<const sensec::gf80::FieldElement> coeffs_const_first,
                        std::uint16_t x) {
    BigInt acc = 0;
    BigInt xp = 1;
    for (const auto& c : coeffs_const_first) {
        acc = (acc + to_big(c) * xp) % P;
        xp = (xp * x) % P;
    }
    return acc;
}

}  // namespace oracle
