#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "sensec/errors.hpp"

// Serpent block cipher with a configurable round count. The architecture
// runs it at 16 rounds; the full 32-round variant is kept so the S-boxes,
// linear transform, and key schedule can be validated against published
// known-answer vectors. Keys shorter than 256 bits are extended by the
// cipher's short-key rule (append a single 1 bit, then zeros), so an 80-bit
// sending key maps to a well-defined 256-bit key.
//
// The round function uses only XOR, AND, OR, NOT, fixed shifts and fixed
// rotations plus 4-bit S-box lookups; there are no data-dependent rotations.

namespace sensec::serpent {

using Block = std::array<std::uint8_t, 16>;

inline constexpr std::size_t BLOCK_SIZE = 16;
inline constexpr std::size_t MAX_KEY_BYTES = 32;

namespace detail {

inline constexpr std::uint32_t PHI = 0x9e3779b9;

inline constexpr std::uint8_t SBOX[8][16] = {
    {3, 8, 15, 1, 10, 6, 5, 11, 14, 13, 4, 2, 7, 0, 9, 12},
    {15, 12, 2, 7, 9, 0, 5, 10, 1, 11, 14, 8, 6, 13, 3, 4},
    {8, 6, 7, 9, 3, 12, 10, 15, 13, 1, 14, 4, 0, 11, 5, 2},
    {0, 15, 11, 8, 12, 9, 6, 3, 13, 1, 2, 4, 10, 7, 5, 14},
    {1, 15, 8, 3, 12, 0, 11, 6, 2, 5, 4, 10, 9, 14, 7, 13},
    {15, 5, 2, 11, 4, 10, 9, 12, 0, 3, 14, 8, 13, 6, 7, 1},
    {7, 2, 12, 5, 8, 4, 6, 11, 14, 9, 1, 15, 13, 3, 10, 0},
    {1, 13, 15, 0, 14, 8, 2, 11, 7, 4, 12, 10, 9, 3, 5, 6},
};

constexpr std::array<std::array<std::uint8_t, 16>, 8> make_inverse_sboxes() {
    std::array<std::array<std::uint8_t, 16>, 8> inv{};
    for (int b = 0; b < 8; ++b)
        for (int v = 0; v < 16; ++v) inv[b][SBOX[b][v]] = static_cast<std::uint8_t>(v);
    return inv;
}

inline constexpr auto INV_SBOX = make_inverse_sboxes();

constexpr std::uint32_t rotl(std::uint32_t v, int n) { return (v << n) | (v >> (32 - n)); }
constexpr std::uint32_t rotr(std::uint32_t v, int n) { return (v >> n) | (v << (32 - n)); }

using State = std::array<std::uint32_t, 4>;

// Bitsliced S-box: bit position b of the four state words forms one 4-bit
// S-box input, word 0 holding the least significant bit.
inline void apply_sbox(const std::uint8_t box[16], State& x) {
    State r{};
    for (int bit = 0; bit < 32; ++bit) {
        const unsigned nib = ((x[0] >> bit) & 1u) | (((x[1] >> bit) & 1u) << 1) |
                             (((x[2] >> bit) & 1u) << 2) | (((x[3] >> bit) & 1u) << 3);
        const unsigned y = box[nib];
        r[0] |= (y & 1u) << bit;
        r[1] |= ((y >> 1) & 1u) << bit;
        r[2] |= ((y >> 2) & 1u) << bit;
        r[3] |= ((y >> 3) & 1u) << bit;
    }
    x = r;
}

inline void linear_transform(State& x) {
    x[0] = rotl(x[0], 13);
    x[2] = rotl(x[2], 3);
    x[1] ^= x[0] ^ x[2];
    x[3] ^= x[2] ^ (x[0] << 3);
    x[1] = rotl(x[1], 1);
    x[3] = rotl(x[3], 7);
    x[0] ^= x[1] ^ x[3];
    x[2] ^= x[3] ^ (x[1] << 7);
    x[0] = rotl(x[0], 5);
    x[2] = rotl(x[2], 22);
}

inline void inverse_linear_transform(State& x) {
    x[2] = rotr(x[2], 22);
    x[0] = rotr(x[0], 5);
    x[2] ^= x[3] ^ (x[1] << 7);
    x[0] ^= x[1] ^ x[3];
    x[3] = rotr(x[3], 7);
    x[1] = rotr(x[1], 1);
    x[3] ^= x[2] ^ (x[0] << 3);
    x[1] ^= x[0] ^ x[2];
    x[2] = rotr(x[2], 3);
    x[0] = rotr(x[0], 13);
}

inline std::uint32_t load_le32(const std::uint8_t* p) {
    return std::uint32_t{p[0]} | (std::uint32_t{p[1]} << 8) | (std::uint32_t{p[2]} << 16) |
           (std::uint32_t{p[3]} << 24);
}

inline void store_le32(std::uint8_t* p, std::uint32_t v) {
    p[0] = static_cast<std::uint8_t>(v);
    p[1] = static_cast<std::uint8_t>(v >> 8);
    p[2] = static_cast<std::uint8_t>(v >> 16);
    p[3] = static_cast<std::uint8_t>(v >> 24);
}

}  // namespace detail

class Serpent {
public:
    // key: 1..32 bytes; rounds: 16 (architecture mode) or 32 (reference mode).
    Serpent(std::span<const std::uint8_t> key, int rounds = 16) : rounds_(rounds) {
        if (rounds != 16 && rounds != 32) throw Error("serpent: rounds must be 16 or 32");
        if (key.empty() || key.size() > MAX_KEY_BYTES)
            throw Error("serpent: key must be 1..32 bytes");

        // Short-key rule: append one 1 bit, then zeros, up to 256 bits.
        std::array<std::uint8_t, MAX_KEY_BYTES> padded{};
        for (std::size_t i = 0; i < key.size(); ++i) padded[i] = key[i];
        if (key.size() < MAX_KEY_BYTES) padded[key.size()] = 0x01;

        const int subkey_count = rounds_ + 1;
        const int prekey_words = 4 * subkey_count;
        std::vector<std::uint32_t> w(static_cast<std::size_t>(8 + prekey_words));
        for (int i = 0; i < 8; ++i) w[static_cast<std::size_t>(i)] = detail::load_le32(padded.data() + 4 * i);
        for (int i = 0; i < prekey_words; ++i) {
            const std::size_t j = static_cast<std::size_t>(8 + i);
            w[j] = detail::rotl(w[j - 8] ^ w[j - 5] ^ w[j - 3] ^ w[j - 1] ^ detail::PHI ^
                                    static_cast<std::uint32_t>(i),
                                11);
        }

        subkeys_.resize(static_cast<std::size_t>(subkey_count));
        for (int i = 0; i < subkey_count; ++i) {
            detail::State k{w[static_cast<std::size_t>(8 + 4 * i)], w[static_cast<std::size_t>(9 + 4 * i)],
                            w[static_cast<std::size_t>(10 + 4 * i)], w[static_cast<std::size_t>(11 + 4 * i)]};
            detail::apply_sbox(detail::SBOX[(35 - i) % 8], k);
            subkeys_[static_cast<std::size_t>(i)] = k;
        }
    }

    int rounds() const { return rounds_; }

    Block encrypt(const Block& in) const {
        detail::State x = load(in);
        for (int i = 0; i < rounds_ - 1; ++i) {
            mix(x, i);
            detail::apply_sbox(detail::SBOX[i % 8], x);
            detail::linear_transform(x);
        }
        mix(x, rounds_ - 1);
        detail::apply_sbox(detail::SBOX[(rounds_ - 1) % 8], x);
        mix(x, rounds_);
        return store(x);
    }

    Block decrypt(const Block& in) const {
        detail::State x = load(in);
        mix(x, rounds_);
        detail::apply_sbox(detail::INV_SBOX[static_cast<std::size_t>((rounds_ - 1) % 8)].data(), x);
        mix(x, rounds_ - 1);
        for (int i = rounds_ - 2; i >= 0; --i) {
            detail::inverse_linear_transform(x);
            detail::apply_sbox(detail::INV_SBOX[static_cast<std::size_t>(i % 8)].data(), x);
            mix(x, i);
        }
        return store(x);
    }

private:
    static detail::State load(const Block& b) {
        return {detail::load_le32(b.data()), detail::load_le32(b.data() + 4),
                detail::load_le32(b.data() + 8), detail::load_le32(b.data() + 12)};
    }

    static Block store(const detail::State& x) {
        Block b{};
        for (int i = 0; i < 4; ++i) detail::store_le32(b.data() + 4 * i, x[static_cast<std::size_t>(i)]);
        return b;
    }

    void mix(detail::State& x, int subkey) const {
        const auto& k = subkeys_[static_cast<std::size_t>(subkey)];
        for (int i = 0; i < 4; ++i) x[static_cast<std::size_t>(i)] ^= k[static_cast<std::size_t>(i)];
    }

    int rounds_;
    std::vector<detail::State> subkeys_;
};

}  // namespace sensec::serpent
