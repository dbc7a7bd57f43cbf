#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <span>
#include <unordered_set>
#include <vector>

#include "sensec/errors.hpp"
#include "sensec/keydist.hpp"
#include "sensec/rng.hpp"
#include "sensec/secmsg.hpp"

// Per-node sending-cluster protocol. Every node broadcasts under its own
// randomly generated sending key; a receiver that cannot authenticate a
// frame derives the pairwise secret for the sender and runs the two-message
// exchange (KEY_REQUEST carrying its own key, answered by KEY_REPLY), so a
// fresh neighbour pair reaches mutual key knowledge in exactly two frames.
// Known-sender keys live in a 20-entry table evicted oldest-first.

namespace sensec::cluster {

using gf80::NodeId;
using secmsg::Frame;
using secmsg::Key80;
using secmsg::MsgType;

struct NeighborEntry {
    NodeId id;
    Key80 key;
    serpent::Serpent cipher;
    std::uint16_t last_seen_s = 0;
    std::uint64_t inserted_at = 0;

    NeighborEntry(NodeId id_, const Key80& key_, std::uint64_t seq)
        : id(id_), key(key_), cipher(key_, 16), inserted_at(seq) {}
};

class NeighborTable {
public:
    static constexpr std::size_t CAPACITY = 20;

    std::size_t size() const { return entries_.size(); }
    const std::vector<NeighborEntry>& entries() const { return entries_; }

    NeighborEntry* find(NodeId id) {
        for (auto& e : entries_)
            if (e.id.value == id.value) return &e;
        return nullptr;
    }
    const NeighborEntry* find(NodeId id) const {
        return const_cast<NeighborTable*>(this)->find(id);
    }

    struct InstallResult {
        bool changed = false;            // false: identical key was already installed
        std::optional<NodeId> evicted;   // entry displaced by capacity
    };

    // Re-installing the identical key is a no-op so an echoed exchange
    // cannot reset the replay window. A different key replaces the entry
    // and restarts counter tracking. On overflow the entry with the
    // smallest insertion sequence goes first.
    InstallResult install(NodeId id, const Key80& key) {
        if (auto* existing = find(id)) {
            if (existing->key == key) return {};
            erase(id);
        }
        InstallResult result;
        result.changed = true;
        if (entries_.size() == CAPACITY) {
            result.evicted = entries_.front().id;
            entries_.erase(entries_.begin());
        }
        entries_.emplace_back(id, key, next_seq_++);
        return result;
    }

private:
    void erase(NodeId id) {
        for (auto it = entries_.begin(); it != entries_.end(); ++it) {
            if (it->id.value == id.value) {
                entries_.erase(it);
                return;
            }
        }
    }

    std::vector<NeighborEntry> entries_;  // insertion order, front = oldest
    std::uint64_t next_seq_ = 0;
};

struct Delivery {
    NodeId from;
    std::uint16_t s = 0;
    std::vector<std::uint8_t> payload;
    bool duplicate = false;  // payload digest seen before
    bool via_retry = false;  // decrypted from the pending cache after a key install
};

struct NodeEvent {
    enum class Kind : std::uint8_t {
        key_request_sent,
        key_reply_sent,
        key_installed,  // a: 1 = from request, 2 = from reply; peer rekeyed when b = 1
        neighbor_evicted,
        replay_rejected,  // a: frame counter
        bad_mac,
        cached_pending,
        dropped_cached,
        dropped_malformed,
        rollover,          // a: new key generation
        exchange_sealed,   // a: counter used under the pairwise scope
    };
    Kind kind;
    std::uint16_t peer = 0;
    std::uint32_t a = 0;
    std::uint32_t b = 0;
};

struct Outbound {
    enum class Origin : std::uint8_t { app_data, rebroadcast, key_request, key_reply };
    Frame frame;
    Origin origin = Origin::app_data;
    std::vector<std::uint8_t> payload;  // plaintext carried by the frame
    std::uint32_t key_generation = 0;   // generation of the sending key used (own-key frames)
};

struct RxOutcome {
    std::vector<Outbound> responses;
    std::vector<Delivery> deliveries;
    std::vector<NodeEvent> events;
};

struct TxResult {
    Outbound out;
    std::vector<NodeEvent> events;
};

class Node {
public:
    // Fresh node: uniformly random sending key from the seeded stream,
    // counter at zero, empty neighbour table.
    Node(keydist::NodeShare share, std::span<const std::uint8_t> seed)
        : share_(std::move(share)), id_(share_.id), rng_(seed) {
        roll_sending_key();
        generation_ = 0;
    }

    NodeId id() const { return id_; }
    const keydist::NodeShare& share() const { return share_; }
    const Key80& sending_key() const { return sending_key_; }
    std::uint16_t counter() const { return counter_.s; }
    std::uint32_t key_generation() const { return generation_; }
    const NeighborTable& table() const { return table_; }
    NeighborTable& table() { return table_; }

    std::vector<std::pair<NodeId, Key80>> neighbor_keys() const {
        std::vector<std::pair<NodeId, Key80>> out;
        for (const auto& e : table_.entries()) out.emplace_back(e.id, e.key);
        return out;
    }

    // Application broadcast under the node's own sending key. A counter at
    // its limit rolls the key first (fresh key, counter restart); neighbours
    // re-key through the normal unknown-key path.
    TxResult send_data(std::span<const std::uint8_t> payload) {
        if (payload.empty()) throw Error("empty payload");
        TxResult result;
        result.out = seal_own(MsgType::DATA, payload, Outbound::Origin::app_data, result.events);
        mark_seen(digest(payload));
        return result;
    }

    // Radio input dispatch.
    RxOutcome on_frame(const Frame& frame) {
        RxOutcome out;
        if (!gf80::node_id_valid(frame.sender.value) || frame.sender.value == id_.value) {
            out.events.push_back({NodeEvent::Kind::dropped_malformed, frame.sender.value});
            return out;
        }
        switch (frame.msg_type) {
            case MsgType::DATA:
                handle_data(frame, out);
                break;
            case MsgType::KEY_REQUEST:
                handle_key_request(frame, out);
                break;
            case MsgType::KEY_REPLY:
                handle_key_reply(frame, out);
                break;
            default:
                out.events.push_back({NodeEvent::Kind::dropped_malformed, frame.sender.value});
                break;
        }
        return out;
    }

    static std::uint64_t digest(std::span<const std::uint8_t> data) {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (auto b : data) {
            h ^= b;
            h *= 0x100000001b3ULL;
        }
        return h;
    }

private:
    static constexpr int REQUEST_RETRY_MISSES = 2;
    static constexpr std::size_t PENDING_PER_SENDER = 4;
    static constexpr std::size_t PENDING_SENDERS = 32;
    static constexpr std::size_t REQUEST_STATE_CAP = 256;

    struct RequestState {
        bool outstanding = false;
        int misses = 0;
    };

    struct PendingQueue {
        std::deque<Frame> frames;
        std::uint64_t last_touch = 0;
    };

    void roll_sending_key() {
        rng_.fill(sending_key_);
        own_cipher_.emplace(sending_key_, 16);
        counter_ = secmsg::CounterState{};
        ++generation_;
    }

    Outbound seal_own(MsgType type, std::span<const std::uint8_t> payload,
                      Outbound::Origin origin, std::vector<NodeEvent>& events) {
        Frame frame;
        try {
            frame = secmsg::seal(*own_cipher_, id_, type, counter_, payload);
        } catch (const CounterExhausted&) {
            roll_sending_key();
            events.push_back({NodeEvent::Kind::rollover, id_.value, generation_});
            frame = secmsg::seal(*own_cipher_, id_, type, counter_, payload);
        }
        Outbound out;
        out.frame = std::move(frame);
        out.origin = origin;
        out.payload.assign(payload.begin(), payload.end());
        out.key_generation = generation_;
        return out;
    }

    bool seen(std::uint64_t d) const { return seen_digests_.contains(d); }
    void mark_seen(std::uint64_t d) { seen_digests_.insert(d); }

    void deliver(RxOutcome& out, NodeId from, std::uint16_t s, std::vector<std::uint8_t> payload,
                 bool via_retry) {
        const std::uint64_t d = digest(payload);
        const bool dup = seen(d);
        if (!dup) {
            mark_seen(d);
            // one-hop flood: re-encrypt under our own key
            out.responses.push_back(
                seal_own(MsgType::DATA, payload, Outbound::Origin::rebroadcast, out.events));
        }
        out.deliveries.push_back({from, s, std::move(payload), dup, via_retry});
    }

    void handle_data(const Frame& frame, RxOutcome& out) {
        if (auto* entry = table_.find(frame.sender)) {
            auto r = secmsg::open(entry->cipher, frame, entry->last_seen_s);
            if (r.status == secmsg::OpenStatus::ok) {
                entry->last_seen_s = frame.s;
                deliver(out, frame.sender, frame.s, std::move(r.payload), false);
                return;
            }
            if (r.status == secmsg::OpenStatus::replay) {
                out.events.push_back({NodeEvent::Kind::replay_rejected, frame.sender.value, frame.s});
                return;
            }
            // MAC failure under a known key: treat as stale-key evidence
            out.events.push_back({NodeEvent::Kind::bad_mac, frame.sender.value});
        }
        cache_pending(frame, out);
        maybe_request_key(frame.sender, out);
    }

    void handle_key_request(const Frame& frame, RxOutcome& out) {
        const auto k = keydist::pairwise_secret(share_, frame.sender);
        const serpent::Serpent pair_cipher(k.bytes(), 16);
        // Exchange frames live in a one-shot counter scope; a replayed
        // request is tolerated and just elicits a fresh reply.
        auto r = secmsg::open(pair_cipher, frame, 0);
        if (r.status != secmsg::OpenStatus::ok) {
            // likely addressed to another node's pairwise scope
            out.events.push_back({NodeEvent::Kind::bad_mac, frame.sender.value});
            return;
        }
        if (r.payload.size() != sending_key_.size()) {
            out.events.push_back({NodeEvent::Kind::dropped_malformed, frame.sender.value});
            return;
        }
        Key80 key{};
        std::copy(r.payload.begin(), r.payload.end(), key.begin());
        install_key(frame.sender, key, 1, out);

        secmsg::CounterState reply_ctr{1};
        Frame reply = secmsg::seal(pair_cipher, id_, MsgType::KEY_REPLY, reply_ctr, sending_key_);
        out.events.push_back({NodeEvent::Kind::key_reply_sent, frame.sender.value});
        out.events.push_back({NodeEvent::Kind::exchange_sealed, frame.sender.value, reply.s});
        Outbound ob;
        ob.frame = std::move(reply);
        ob.origin = Outbound::Origin::key_reply;
        ob.payload.assign(sending_key_.begin(), sending_key_.end());
        out.responses.push_back(std::move(ob));
    }

    void handle_key_reply(const Frame& frame, RxOutcome& out) {
        const auto k = keydist::pairwise_secret(share_, frame.sender);
        const serpent::Serpent pair_cipher(k.bytes(), 16);
        auto r = secmsg::open(pair_cipher, frame, 0);
        if (r.status != secmsg::OpenStatus::ok) {
            out.events.push_back({NodeEvent::Kind::bad_mac, frame.sender.value});
            return;
        }
        if (r.payload.size() != sending_key_.size()) {
            out.events.push_back({NodeEvent::Kind::dropped_malformed, frame.sender.value});
            return;
        }
        Key80 key{};
        std::copy(r.payload.begin(), r.payload.end(), key.begin());
        install_key(frame.sender, key, 2, out);
    }

    void install_key(NodeId peer, const Key80& key, std::uint32_t via, RxOutcome& out) {
        const auto result = table_.install(peer, key);
        if (result.evicted)
            out.events.push_back({NodeEvent::Kind::neighbor_evicted, result.evicted->value});
        out.events.push_back(
            {NodeEvent::Kind::key_installed, peer.value, via, result.changed ? 1u : 0u});
        request_state_.erase(peer.value);
        flush_pending(peer, result.changed, out);
    }

    void flush_pending(NodeId peer, bool key_changed, RxOutcome& out) {
        auto it = pending_.find(peer.value);
        if (it == pending_.end()) return;
        auto queue = std::move(it->second);
        pending_.erase(it);
        auto* entry = table_.find(peer);
        for (const Frame& f : queue.frames) {
            if (!key_changed || entry == nullptr) {
                out.events.push_back({NodeEvent::Kind::dropped_cached, peer.value});
                continue;
            }
            auto r = secmsg::open(entry->cipher, f, entry->last_seen_s);
            if (r.status == secmsg::OpenStatus::ok) {
                entry->last_seen_s = f.s;
                deliver(out, peer, f.s, std::move(r.payload), true);
            } else if (r.status == secmsg::OpenStatus::replay) {
                out.events.push_back({NodeEvent::Kind::replay_rejected, peer.value, f.s});
            } else {
                out.events.push_back({NodeEvent::Kind::dropped_cached, peer.value});
            }
        }
    }

    void cache_pending(const Frame& frame, RxOutcome& out) {
        auto it = pending_.find(frame.sender.value);
        if (it == pending_.end()) {
            if (pending_.size() == PENDING_SENDERS) {
                auto oldest = pending_.begin();
                for (auto j = pending_.begin(); j != pending_.end(); ++j)
                    if (j->second.last_touch < oldest->second.last_touch) oldest = j;
                pending_.erase(oldest);
            }
            it = pending_.emplace(frame.sender.value, PendingQueue{}).first;
        }
        auto& queue = it->second;
        if (queue.frames.size() == PENDING_PER_SENDER) queue.frames.pop_front();
        queue.frames.push_back(frame);
        queue.last_touch = pending_seq_++;
        out.events.push_back({NodeEvent::Kind::cached_pending, frame.sender.value});
    }

    void maybe_request_key(NodeId peer, RxOutcome& out) {
        if (request_state_.size() == REQUEST_STATE_CAP &&
            !request_state_.contains(peer.value))
            request_state_.erase(request_state_.begin());
        auto& state = request_state_[peer.value];
        if (state.outstanding) {
            // re-arm only after repeated undecryptable traffic, so one lost
            // reply does not wedge the exchange
            if (++state.misses < REQUEST_RETRY_MISSES) return;
            state.misses = 0;
        }
        state.outstanding = true;

        const auto k = keydist::pairwise_secret(share_, peer);
        const serpent::Serpent pair_cipher(k.bytes(), 16);
        secmsg::CounterState one_shot{};
        Frame request = secmsg::seal(pair_cipher, id_, MsgType::KEY_REQUEST, one_shot, sending_key_);
        out.events.push_back({NodeEvent::Kind::key_request_sent, peer.value});
        out.events.push_back({NodeEvent::Kind::exchange_sealed, peer.value, request.s});
        Outbound ob;
        ob.frame = std::move(request);
        ob.origin = Outbound::Origin::key_request;
        ob.payload.assign(sending_key_.begin(), sending_key_.end());
        out.responses.push_back(std::move(ob));
    }

    keydist::NodeShare share_;
    NodeId id_;
    SerpentStream rng_;
    Key80 sending_key_{};
    std::optional<serpent::Serpent> own_cipher_;
    secmsg::CounterState counter_;
    std::uint32_t generation_ = 0;
    NeighborTable table_;
    std::unordered_set<std::uint64_t> seen_digests_;
    std::map<std::uint16_t, PendingQueue> pending_;
    std::uint64_t pending_seq_ = 0;
    std::map<std::uint16_t, RequestState> request_state_;
};

}  // namespace sensec::cluster
