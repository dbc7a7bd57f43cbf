#pragma once

#include <cstdint>
#include <limits>
#include <span>

#include "sensec/gf80.hpp"
#include "sensec/serpent.hpp"

namespace sensec {

// Deterministic byte stream: Serpent in counter mode over an incrementing
// block index, keyed by up to 32 seed bytes. One seed, one stream — used for
// CA coefficient generation, sending keys, and simulator randomness so that
// every run is replayable.
class SerpentStream {
public:
    explicit SerpentStream(std::span<const std::uint8_t> seed)
        : cipher_(seed.empty() ? std::span<const std::uint8_t>(ZERO_SEED)
                               : seed.subspan(0, std::min<std::size_t>(seed.size(), 32))) {}

    explicit SerpentStream(std::uint64_t seed_value) : cipher_(u64_bytes(seed_value)) {}

    std::uint8_t next_byte() {
        if (pos_ == buf_.size()) refill();
        return buf_[pos_++];
    }

    void fill(std::span<std::uint8_t> out) {
        for (auto& b : out) b = next_byte();
    }

    std::uint64_t next_u64() {
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t{next_byte()} << (8 * i);
        return v;
    }

    // Unbiased integer in [0, n).
    std::uint64_t uniform_below(std::uint64_t n) {
        if (n <= 1) return 0;
        const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
        const std::uint64_t rem = (max % n + 1) % n;  // 2^64 mod n
        for (;;) {
            const std::uint64_t r = next_u64();
            if (rem == 0 || r <= max - rem) return r % n;
        }
    }

    double uniform_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform element of GF(p) by rejection sampling on 10-byte draws.
    gf80::FieldElement uniform_field_element() {
        for (;;) {
            gf80::Encoded bytes{};
            fill(bytes);
            if (auto fe = gf80::decode(bytes)) return *fe;
        }
    }

    gf80::NodeId uniform_node_id() {
        return gf80::NodeId{static_cast<std::uint16_t>(1 + uniform_below(65535))};
    }

private:
    static constexpr std::array<std::uint8_t, 1> ZERO_SEED{0};

    static std::array<std::uint8_t, 8> u64_bytes(std::uint64_t v) {
        std::array<std::uint8_t, 8> out{};
        for (int i = 0; i < 8; ++i) out[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v >> (8 * i));
        return out;
    }

    void refill() {
        serpent::Block ctr{};
        for (int i = 0; i < 8; ++i) ctr[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(counter_ >> (8 * i));
        buf_ = cipher_.encrypt(ctr);
        ++counter_;
        pos_ = 0;
    }

    serpent::Serpent cipher_;
    serpent::Block buf_{};
    std::uint64_t counter_ = 0;
    std::size_t pos_ = serpent::BLOCK_SIZE;
};

// Cheap integer mixer for deriving independent sub-seeds from one master
// seed (splitmix64 finalizer).
constexpr std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace sensec
