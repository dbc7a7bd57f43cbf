#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sensec/errors.hpp"
#include "sensec/gf80.hpp"
#include "sensec/serpent.hpp"

// Authenticated message sealing: counter-mode encryption with a split
// counter register and a truncated CBC-MAC, sharing one 80-bit key.
//
// Wire layout, all multi-byte fields big-endian:
//
//   [sender:2][msg_type:1][clen:2] [s:2][ciphertext:N][mac:4]
//   `------ link header (5) -----'
//
// The link header carries the sender identity, message type, and ciphertext
// length for stream framing; the security overhead on top of the plaintext
// is exactly 6 bytes: the 2-byte message counter and the 4-byte MAC. The
// MAC covers sender || msg_type || s || ciphertext.

namespace sensec::secmsg {

using serpent::Block;
using Key80 = std::array<std::uint8_t, 10>;

inline constexpr std::size_t LINK_HEADER_SIZE = 5;
inline constexpr std::size_t SECURITY_OVERHEAD = 6;
inline constexpr std::size_t MAC_SIZE = 4;
inline constexpr std::size_t MAX_PAYLOAD = 65535;

enum class MsgType : std::uint8_t {
    DATA = 0x01,
    KEY_REQUEST = 0x02,
    KEY_REPLY = 0x03,
};

struct Frame {
    gf80::NodeId sender;
    MsgType msg_type = MsgType::DATA;
    std::uint16_t s = 0;
    std::vector<std::uint8_t> ciphertext;
    std::array<std::uint8_t, MAC_SIZE> mac{};

    std::size_t wire_size() const {
        return LINK_HEADER_SIZE + 2 + ciphertext.size() + MAC_SIZE;
    }

    std::vector<std::uint8_t> to_bytes() const {
        std::vector<std::uint8_t> out;
        out.reserve(wire_size());
        out.push_back(static_cast<std::uint8_t>(sender.value >> 8));
        out.push_back(static_cast<std::uint8_t>(sender.value));
        out.push_back(static_cast<std::uint8_t>(msg_type));
        out.push_back(static_cast<std::uint8_t>(ciphertext.size() >> 8));
        out.push_back(static_cast<std::uint8_t>(ciphertext.size()));
        out.push_back(static_cast<std::uint8_t>(s >> 8));
        out.push_back(static_cast<std::uint8_t>(s));
        out.insert(out.end(), ciphertext.begin(), ciphertext.end());
        out.insert(out.end(), mac.begin(), mac.end());
        return out;
    }

    // The message type byte is carried through unvalidated: it is covered by
    // the MAC, so tampering surfaces as BadMac rather than a parse error, and
    // unknown-but-authentic types are dropped after verification.
    static std::optional<Frame> parse(std::span<const std::uint8_t> bytes) {
        if (bytes.size() < LINK_HEADER_SIZE + SECURITY_OVERHEAD) return std::nullopt;
        const std::uint16_t sender = static_cast<std::uint16_t>((bytes[0] << 8) | bytes[1]);
        if (!gf80::node_id_valid(sender)) return std::nullopt;
        const std::size_t clen = static_cast<std::size_t>((bytes[3] << 8) | bytes[4]);
        if (bytes.size() != LINK_HEADER_SIZE + 2 + clen + MAC_SIZE) return std::nullopt;
        Frame f;
        f.sender = gf80::NodeId{sender};
        f.msg_type = static_cast<MsgType>(bytes[2]);
        f.s = static_cast<std::uint16_t>((bytes[5] << 8) | bytes[6]);
        f.ciphertext.assign(bytes.begin() + 7, bytes.begin() + 7 + static_cast<std::ptrdiff_t>(clen));
        std::copy(bytes.end() - MAC_SIZE, bytes.end(), f.mac.begin());
        return f;
    }

    friend bool operator==(const Frame&, const Frame&) = default;
};

// Per-sending-key counter: s increments once per message; the block index
// within a message restarts at zero.
struct CounterState {
    std::uint16_t s = 0;
};

// 16-byte counter register: s in the two high bytes, the block index as a
// zero-padded 112-bit big-endian integer below it.
inline Block counter_block(std::uint16_t s, std::uint64_t block_index) {
    Block b{};
    b[0] = static_cast<std::uint8_t>(s >> 8);
    b[1] = static_cast<std::uint8_t>(s);
    for (int i = 0; i < 8; ++i)
        b[static_cast<std::size_t>(15 - i)] = static_cast<std::uint8_t>(block_index >> (8 * i));
    return b;
}

// XOR with the keystream E_K(counter_block(s, j)); encrypts and decrypts,
// output length equals input length.
inline std::vector<std::uint8_t> ctr_crypt(const serpent::Serpent& cipher, std::uint16_t s,
                                           std::span<const std::uint8_t> data) {
    std::vector<std::uint8_t> out(data.size());
    std::uint64_t block_index = 0;
    std::size_t off = 0;
    while (off < data.size()) {
        const Block ks = cipher.encrypt(counter_block(s, block_index++));
        const std::size_t n = std::min(serpent::BLOCK_SIZE, data.size() - off);
        for (std::size_t i = 0; i < n; ++i) out[off + i] = data[off + i] ^ ks[i];
        off += n;
    }
    return out;
}

// CBC-MAC with zero IV, zero padding to a block multiple, tag truncated to
// the first 4 bytes of the final block. Empty input MACs as one zero block.
inline std::array<std::uint8_t, MAC_SIZE> cbc_mac(const serpent::Serpent& cipher,
                                                  std::span<const std::uint8_t> data) {
    const std::size_t blocks = data.empty() ? 1 : (data.size() + 15) / 16;
    Block acc{};
    for (std::size_t b = 0; b < blocks; ++b) {
        for (std::size_t i = 0; i < serpent::BLOCK_SIZE; ++i) {
            const std::size_t pos = b * 16 + i;
            acc[i] ^= pos < data.size() ? data[pos] : 0;
        }
        acc = cipher.encrypt(acc);
    }
    std::array<std::uint8_t, MAC_SIZE> tag{};
    std::copy_n(acc.begin(), MAC_SIZE, tag.begin());
    return tag;
}

namespace detail {

inline std::vector<std::uint8_t> mac_input(gf80::NodeId sender, MsgType type, std::uint16_t s,
                                           std::span<const std::uint8_t> ciphertext) {
    std::vector<std::uint8_t> buf;
    buf.reserve(5 + ciphertext.size());
    buf.push_back(static_cast<std::uint8_t>(sender.value >> 8));
    buf.push_back(static_cast<std::uint8_t>(sender.value));
    buf.push_back(static_cast<std::uint8_t>(type));
    buf.push_back(static_cast<std::uint8_t>(s >> 8));
    buf.push_back(static_cast<std::uint8_t>(s));
    buf.insert(buf.end(), ciphertext.begin(), ciphertext.end());
    return buf;
}

}  // namespace detail

// Encrypt-then-MAC under one key: bump the counter, encrypt in counter
// mode, MAC the header fields and ciphertext. Throws CounterExhausted when
// the 16-bit counter would wrap; the owner must roll its key.
inline Frame seal(const serpent::Serpent& cipher, gf80::NodeId sender, MsgType type,
                  CounterState& state, std::span<const std::uint8_t> payload) {
    if (payload.size() > MAX_PAYLOAD) throw Error("payload exceeds 2^16 - 1 bytes");
    if (state.s == 0xffff) throw CounterExhausted();
    state.s = static_cast<std::uint16_t>(state.s + 1);
    Frame f;
    f.sender = sender;
    f.msg_type = type;
    f.s = state.s;
    f.ciphertext = ctr_crypt(cipher, f.s, payload);
    f.mac = cbc_mac(cipher, detail::mac_input(sender, type, f.s, f.ciphertext));
    return f;
}

enum class OpenStatus : std::uint8_t {
    ok,
    bad_mac,  // unknown key, corruption, or forgery
    replay,   // valid tag but counter not beyond last_seen_s
};

struct OpenResult {
    OpenStatus status = OpenStatus::bad_mac;
    std::vector<std::uint8_t> payload;

    explicit operator bool() const { return status == OpenStatus::ok; }
};

// Verify-then-decrypt. A frame is accepted iff the tag matches under
// `cipher` and its counter is strictly beyond `last_seen_s`; the caller
// updates its last-seen counter with frame.s on success.
inline OpenResult open(const serpent::Serpent& cipher, const Frame& frame,
                       std::uint16_t last_seen_s) {
    const auto expect =
        cbc_mac(cipher, detail::mac_input(frame.sender, frame.msg_type, frame.s, frame.ciphertext));
    if (expect != frame.mac) return {OpenStatus::bad_mac, {}};
    if (frame.s <= last_seen_s) return {OpenStatus::replay, {}};
    return {OpenStatus::ok, ctr_crypt(cipher, frame.s, frame.ciphertext)};
}

}  // namespace sensec::secmsg
