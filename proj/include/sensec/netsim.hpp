#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sensec/cluster.hpp"
#include "sensec/errors.hpp"
#include "sensec/keydist.hpp"
#include "sensec/rng.hpp"

// Deterministic discrete-time simulator: mobile nodes on a plane, one-hop
// radio broadcast with per-receiver loss, and a scripted adversary that
// eavesdrops, replays, injects and compromises. A frame sent at step k is
// received at step k; reactions queue for step k+1. Identical (config, seed)
// yields byte-identical reports.

namespace sensec::netsim {

using cluster::Node;
using cluster::NodeEvent;
using cluster::Outbound;
using gf80::NodeId;
using secmsg::Frame;
using secmsg::Key80;

struct Vec2 {
    double x = 0;
    double y = 0;
};

enum class Mobility : std::uint8_t { fixed, random_waypoint };

struct AdversaryAction {
    enum class Kind : std::uint8_t { eavesdrop, replay, inject_random, compromise };
    Kind kind = Kind::eavesdrop;
    std::uint32_t at_step = 0;  // eavesdrop: recording starts here
    std::uint32_t arg = 0;      // replay: capture index; compromise: node ordinal
};

struct TrafficEntry {
    std::uint32_t at_step = 0;
    std::uint32_t node = 0;  // ordinal
    std::vector<std::uint8_t> payload;
};

struct SimConfig {
    std::uint32_t node_count = 2;
    double world_w = 100;
    double world_h = 100;
    double radio_range = 30;
    double loss_prob = 0;
    std::uint32_t steps = 10;
    Mobility mobility = Mobility::fixed;
    double max_speed = 0;  // metres per step, random_waypoint only
    int degree_t = 20;
    std::uint64_t seed = 1;
    std::vector<TrafficEntry> traffic;
    std::vector<AdversaryAction> adversary;
    std::map<std::uint32_t, Vec2> positions;  // optional fixed placements by ordinal

    void validate() const {
        if (node_count < 1 || node_count > 4096) throw ConfigInvalid("node_count out of range");
        if (!(world_w > 0) || !(world_h > 0)) throw ConfigInvalid("world size must be positive");
        if (!(radio_range > 0)) throw ConfigInvalid("radio_range must be positive");
        if (!(loss_prob >= 0 && loss_prob <= 1)) throw ConfigInvalid("loss_prob outside [0,1]");
        if (steps < 1) throw ConfigInvalid("steps must be at least 1");
        if (mobility == Mobility::random_waypoint && !(max_speed > 0))
            throw ConfigInvalid("random_waypoint needs max_speed > 0");
        if (degree_t < 1 || degree_t > 1000) throw ConfigInvalid("degree_t out of range");
        for (const auto& t : traffic) {
            if (t.at_step >= steps) throw ConfigInvalid("traffic step outside the run");
            if (t.node >= node_count) throw ConfigInvalid("traffic node ordinal out of range");
            if (t.payload.empty() || t.payload.size() > secmsg::MAX_PAYLOAD)
                throw ConfigInvalid("traffic payload empty or too large");
        }
        for (const auto& a : adversary) {
            if (a.at_step >= steps) throw ConfigInvalid("adversary step outside the run");
            if (a.kind == AdversaryAction::Kind::compromise && a.arg >= node_count)
                throw ConfigInvalid("compromise target out of range");
        }
        for (const auto& [ordinal, pos] : positions) {
            if (ordinal >= node_count) throw ConfigInvalid("position ordinal out of range");
            if (pos.x < 0 || pos.x > world_w || pos.y < 0 || pos.y > world_h)
                throw ConfigInvalid("position outside the world");
        }
    }
};

struct Counters {
    std::uint64_t frames_sent = 0;
    std::uint64_t frames_delivered = 0;
    std::uint64_t key_exchanges = 0;
    std::uint64_t key_requests_sent = 0;
    std::uint64_t key_replies_sent = 0;
    std::uint64_t replays_rejected = 0;
    std::uint64_t forgeries_rejected = 0;
    std::uint64_t rollovers = 0;
    std::uint64_t replay_first_deliveries = 0;
    std::uint64_t pairwise_ctr_reuse = 0;
    std::uint64_t bytes_overhead_total = 0;
};

struct AdversaryOutcome {
    std::uint64_t eavesdropped_frames = 0;
    std::uint64_t payloads_recovered = 0;
    bool attempted_reconstruction = false;
    bool master_reconstructed = false;
    bool secret_prediction_correct = false;
    std::uint64_t forged_frames_accepted = 0;
    std::uint64_t compromised_nodes = 0;
};

struct ScenarioReport {
    std::uint32_t node_count = 0;
    std::uint32_t steps = 0;
    int degree_t = 0;
    std::uint64_t seed = 0;
    std::vector<std::uint16_t> node_ids;
    std::vector<std::string> events;
    Counters counters;
    AdversaryOutcome adversary;
    std::vector<std::string> coverage;
    std::vector<std::string> safety_violations;
    bool safety_ok = true;

    // One schema, stable field order; regression tests diff this byte-wise.
    std::string to_text() const {
        std::ostringstream out;
        out << "sensec-report v1\n";
        out << "nodes " << node_count << "\n";
        out << "steps " << steps << "\n";
        out << "degree_t " << degree_t << "\n";
        out << "seed " << seed << "\n";
        out << "node_ids";
        for (auto id : node_ids) out << ' ' << id;
        out << "\n";
        out << "events " << events.size() << "\n";
        for (const auto& e : events) out << "e " << e << "\n";
        out << "counters\n";
        out << "frames_sent " << counters.frames_sent << "\n";
        out << "frames_delivered " << counters.frames_delivered << "\n";
        out << "key_exchanges " << counters.key_exchanges << "\n";
        out << "key_requests_sent " << counters.key_requests_sent << "\n";
        out << "key_replies_sent " << counters.key_replies_sent << "\n";
        out << "replays_rejected " << counters.replays_rejected << "\n";
        out << "forgeries_rejected " << counters.forgeries_rejected << "\n";
        out << "rollovers " << counters.rollovers << "\n";
        out << "replay_first_deliveries " << counters.replay_first_deliveries << "\n";
        out << "pairwise_ctr_reuse " << counters.pairwise_ctr_reuse << "\n";
        out << "bytes_overhead_total " << counters.bytes_overhead_total << "\n";
        out << "adversary\n";
        out << "eavesdropped_frames " << adversary.eavesdropped_frames << "\n";
        out << "payloads_recovered " << adversary.payloads_recovered << "\n";
        out << "attempted_reconstruction " << (adversary.attempted_reconstruction ? "true" : "false")
            << "\n";
        out << "master_reconstructed " << (adversary.master_reconstructed ? "true" : "false") << "\n";
        out << "secret_prediction_correct "
            << (adversary.secret_prediction_correct ? "true" : "false") << "\n";
        out << "forged_frames_accepted " << adversary.forged_frames_accepted << "\n";
        out << "compromised_nodes " << adversary.compromised_nodes << "\n";
        out << "coverage " << coverage.size() << "\n";
        for (const auto& c : coverage) out << "c " << c << "\n";
        out << "safety " << (safety_ok ? "ok" : "violated") << "\n";
        for (const auto& v : safety_violations) out << "v " << v << "\n";
        out << "end\n";
        return out.str();
    }
};

class Simulation {
public:
    struct CapturedFrame {
        Frame frame;
        std::uint32_t step = 0;
        bool adversary_origin = false;
        bool is_data = false;                    // application payload inside
        std::vector<std::uint8_t> true_payload;  // ground truth for recovery checks
    };

    struct Compromise {
        std::uint32_t ordinal = 0;
        std::uint32_t step = 0;
        keydist::NodeShare share;
        Key80 sending_key{};
        std::vector<std::pair<NodeId, Key80>> neighbor_keys;
    };

    explicit Simulation(SimConfig config) : config_(std::move(config)) {
        config_.validate();
        SerpentStream setup(config_.seed);

        std::array<std::uint8_t, 32> ca_seed{};
        setup.fill(ca_seed);
        master_.emplace(keydist::MasterPolynomial::generate(config_.degree_t, ca_seed));

        // distinct random identities from (0, 2^16)
        std::set<std::uint16_t> used;
        for (std::uint32_t i = 0; i < config_.node_count; ++i) {
            NodeId id{};
            do {
                id = setup.uniform_node_id();
            } while (!used.insert(id.value).second);
            ids_.push_back(id);
        }
        for (NodeId id : ids_) {
            std::array<std::uint8_t, 32> node_seed{};
            setup.fill(node_seed);
            nodes_.emplace_back(master_->derive_share(id), node_seed);
        }

        mobility_rng_.emplace(setup.next_u64());
        loss_rng_.emplace(setup.next_u64());
        adversary_rng_.emplace(setup.next_u64());

        positions_.resize(config_.node_count);
        for (std::uint32_t i = 0; i < config_.node_count; ++i) {
            if (auto it = config_.positions.find(i); it != config_.positions.end()) {
                positions_[i] = it->second;
            } else {
                positions_[i] = {mobility_rng_->uniform_unit() * config_.world_w,
                                 mobility_rng_->uniform_unit() * config_.world_h};
            }
        }
        if (config_.mobility == Mobility::random_waypoint) {
            waypoints_.resize(config_.node_count);
            speeds_.resize(config_.node_count);
            for (std::uint32_t i = 0; i < config_.node_count; ++i) pick_waypoint(i);
        }

        outboxes_.resize(config_.node_count);
        for (const auto& a : config_.adversary)
            if (a.kind == AdversaryAction::Kind::eavesdrop)
                eavesdrop_from_ = eavesdrop_from_ ? std::min(*eavesdrop_from_, a.at_step)
                                                  : std::optional<std::uint32_t>(a.at_step);

        report_.node_count = config_.node_count;
        report_.steps = config_.steps;
        report_.degree_t = config_.degree_t;
        report_.seed = config_.seed;
        for (NodeId id : ids_) report_.node_ids.push_back(id.value);
    }

    void run() {
        for (std::uint32_t step = 0; step < config_.steps; ++step) run_step(step);
        analyze_adversary();
        finish_safety();
    }

    const ScenarioReport& report() const { return report_; }
    ScenarioReport take_report() { return std::move(report_); }

    const std::vector<CapturedFrame>& capture_log() const { return capture_log_; }
    const std::vector<Compromise>& compromises() const { return compromises_; }
    const Node& node(std::size_t ordinal) const { return nodes_[ordinal]; }
    const keydist::MasterPolynomial& master() const { return *master_; }
    const std::vector<NodeId>& ids() const { return ids_; }

    // Payload recovery from captured traffic with an explicit key ring; a
    // guess counts only when it matches the recorded ground truth.
    std::uint64_t recovered_payload_count(std::span<const Key80> keys,
                                          std::uint32_t from_step) const {
        std::uint64_t recovered = 0;
        for (const auto& cap : capture_log_) {
            if (!cap.is_data || cap.adversary_origin || cap.step < from_step) continue;
            for (const auto& key : keys) {
                const serpent::Serpent cipher(key, 16);
                auto r = secmsg::open(cipher, cap.frame, 0);
                if (r.status == secmsg::OpenStatus::ok && r.payload == cap.true_payload) {
                    ++recovered;
                    break;
                }
            }
        }
        return recovered;
    }

private:
    enum class Provenance : std::uint8_t { node, adv_replay, adv_inject };

    struct PendingBroadcast {
        std::uint32_t sender_ordinal = 0;
        Outbound out;
    };

    void pick_waypoint(std::uint32_t i) {
        waypoints_[i] = {mobility_rng_->uniform_unit() * config_.world_w,
                         mobility_rng_->uniform_unit() * config_.world_h};
        speeds_[i] = config_.max_speed * (1.0 - mobility_rng_->uniform_unit());
    }

    void move_nodes() {
        if (config_.mobility != Mobility::random_waypoint) return;
        for (std::uint32_t i = 0; i < config_.node_count; ++i) {
            const double dx = waypoints_[i].x - positions_[i].x;
            const double dy = waypoints_[i].y - positions_[i].y;
            const double dist = std::hypot(dx, dy);
            if (dist <= speeds_[i]) {
                positions_[i] = waypoints_[i];
                pick_waypoint(i);
            } else {
                positions_[i].x += dx / dist * speeds_[i];
                positions_[i].y += dy / dist * speeds_[i];
            }
        }
    }

    bool in_range(std::uint32_t a, std::uint32_t b) const {
        return std::hypot(positions_[a].x - positions_[b].x,
                          positions_[a].y - positions_[b].y) <= config_.radio_range;
    }

    static const char* origin_name(Outbound::Origin origin) {
        switch (origin) {
            case Outbound::Origin::app_data: return "data";
            case Outbound::Origin::rebroadcast: return "rebroadcast";
            case Outbound::Origin::key_request: return "key_request";
            case Outbound::Origin::key_reply: return "key_reply";
        }
        return "?";
    }

    void event_line(std::uint32_t step, const std::string& text) {
        report_.events.push_back(std::to_string(step) + " " + text);
    }

    void violation(const std::string& text) { report_.safety_violations.push_back(text); }

    static std::uint64_t payload_digest(std::span<const std::uint8_t> payload) {
        return Node::digest(payload);
    }

    // signature of an accepted frame: receiver + sender + counter + payload
    using AcceptSig = std::tuple<std::uint32_t, std::uint16_t, std::uint16_t, std::uint64_t>;

    void run_step(std::uint32_t step) {
        move_nodes();

        // gather this step's broadcasts: queued reactions first, then app traffic
        std::vector<PendingBroadcast> broadcasts;
        for (std::uint32_t i = 0; i < config_.node_count; ++i) {
            for (auto& out : outboxes_[i]) broadcasts.push_back({i, std::move(out)});
            outboxes_[i].clear();
        }
        for (std::size_t t = 0; t < config_.traffic.size(); ++t) {
            const auto& entry = config_.traffic[t];
            if (entry.at_step != step) continue;
            auto tx = nodes_[entry.node].send_data(entry.payload);
            consume_events(step, entry.node, tx.events);
            coverage_[payload_digest(entry.payload)].insert(entry.node);
            broadcasts.push_back({entry.node, std::move(tx.out)});
        }

        for (auto& b : broadcasts) broadcast(step, b);

        for (const auto& action : config_.adversary) {
            if (action.at_step != step) continue;
            switch (action.kind) {
                case AdversaryAction::Kind::eavesdrop:
                    break;  // recording is unconditional; the window applies post-run
                case AdversaryAction::Kind::replay:
                    adversary_replay(step, action.arg);
                    break;
                case AdversaryAction::Kind::inject_random:
                    adversary_inject(step);
                    break;
                case AdversaryAction::Kind::compromise:
                    adversary_compromise(step, action.arg);
                    break;
            }
        }
    }

    void broadcast(std::uint32_t step, PendingBroadcast& b) {
        const Frame& frame = b.out.frame;
        report_.counters.frames_sent += 1;
        const std::size_t overhead = frame.wire_size() - secmsg::LINK_HEADER_SIZE - frame.ciphertext.size();
        report_.counters.bytes_overhead_total += overhead;

        switch (b.out.origin) {
            case Outbound::Origin::key_request: report_.counters.key_requests_sent += 1; break;
            case Outbound::Origin::key_reply: report_.counters.key_replies_sent += 1; break;
            default: break;
        }

        // keystream bookkeeping for the sender's own key scope
        if (b.out.origin == Outbound::Origin::app_data ||
            b.out.origin == Outbound::Origin::rebroadcast) {
            const auto scope = std::make_pair(b.sender_ordinal, b.out.key_generation);
            if (!own_ctr_seen_[scope].insert(frame.s).second)
                violation("keystream reuse: node " + std::to_string(ids_[b.sender_ordinal].value) +
                          " generation " + std::to_string(b.out.key_generation) + " counter " +
                          std::to_string(frame.s));
        }

        const bool data = b.out.origin == Outbound::Origin::app_data ||
                          b.out.origin == Outbound::Origin::rebroadcast;
        capture_log_.push_back({frame, step, false, data, b.out.payload});

        event_line(step, "send node=" + std::to_string(frame.sender.value) + " kind=" +
                             origin_name(b.out.origin) + " s=" + std::to_string(frame.s) +
                             " bytes=" + std::to_string(frame.wire_size()));

        for (std::uint32_t r = 0; r < config_.node_count; ++r) {
            if (r == b.sender_ordinal || !in_range(b.sender_ordinal, r)) continue;
            if (config_.loss_prob > 0 && loss_rng_->uniform_unit() < config_.loss_prob) continue;
            deliver(step, r, frame, Provenance::node);
        }
    }

    void deliver(std::uint32_t step, std::uint32_t receiver, const Frame& frame, Provenance prov) {
        auto rx = nodes_[receiver].on_frame(frame);
        for (auto& resp : rx.responses) outboxes_[receiver].push_back(std::move(resp));

        for (const auto& d : rx.deliveries) {
            report_.counters.frames_delivered += 1;
            coverage_[payload_digest(d.payload)].insert(receiver);
            const AcceptSig sig{receiver, d.from.value, d.s, payload_digest(d.payload)};
            const bool seen_before = !accepted_.insert(sig).second;
            if (prov == Provenance::adv_inject) {
                report_.adversary.forged_frames_accepted += 1;
                violation("injected frame accepted at node " + std::to_string(ids_[receiver].value));
            } else if (prov == Provenance::adv_replay) {
                if (seen_before) {
                    report_.adversary.forged_frames_accepted += 1;
                    violation("replayed frame re-accepted at node " +
                              std::to_string(ids_[receiver].value));
                } else {
                    report_.counters.replay_first_deliveries += 1;
                }
            }
            event_line(step, "deliver node=" + std::to_string(ids_[receiver].value) + " from=" +
                                 std::to_string(d.from.value) + " s=" + std::to_string(d.s) +
                                 " dup=" + (d.duplicate ? "1" : "0") + " retry=" +
                                 (d.via_retry ? "1" : "0"));
        }

        consume_events(step, receiver, rx.events, prov);
    }

    void consume_events(std::uint32_t step, std::uint32_t ordinal,
                        const std::vector<NodeEvent>& events,
                        Provenance prov = Provenance::node) {
        const std::string me = std::to_string(ids_[ordinal].value);
        const bool adversarial = prov != Provenance::node;
        for (const auto& e : events) {
            const std::string peer = std::to_string(e.peer);
            switch (e.kind) {
                case NodeEvent::Kind::key_request_sent:
                    event_line(step, "request_queued node=" + me + " peer=" + peer);
                    break;
                case NodeEvent::Kind::key_reply_sent:
                    event_line(step, "reply_queued node=" + me + " peer=" + peer);
                    break;
                case NodeEvent::Kind::key_installed:
                    if (e.a == 2) report_.counters.key_exchanges += 1;
                    event_line(step, "install node=" + me + " peer=" + peer +
                                         " via=" + (e.a == 1 ? "request" : "reply") +
                                         " changed=" + std::to_string(e.b));
                    break;
                case NodeEvent::Kind::neighbor_evicted:
                    event_line(step, "evict node=" + me + " peer=" + peer);
                    break;
                case NodeEvent::Kind::replay_rejected:
                    report_.counters.replays_rejected += 1;
                    event_line(step, "replay_rejected node=" + me + " from=" + peer +
                                         " s=" + std::to_string(e.a));
                    break;
                case NodeEvent::Kind::bad_mac:
                    if (adversarial) report_.counters.forgeries_rejected += 1;
                    event_line(step, "bad_mac node=" + me + " from=" + peer);
                    break;
                case NodeEvent::Kind::cached_pending:
                    event_line(step, "cache node=" + me + " from=" + peer);
                    break;
                case NodeEvent::Kind::dropped_cached:
                    event_line(step, "drop_cached node=" + me + " from=" + peer);
                    break;
                case NodeEvent::Kind::dropped_malformed:
                    if (adversarial) report_.counters.forgeries_rejected += 1;
                    event_line(step, "malformed node=" + me);
                    break;
                case NodeEvent::Kind::rollover:
                    report_.counters.rollovers += 1;
                    event_line(step, "rollover node=" + me + " gen=" + std::to_string(e.a));
                    break;
                case NodeEvent::Kind::exchange_sealed: {
                    const std::uint16_t lo = std::min(ids_[ordinal].value, e.peer);
                    const std::uint16_t hi = std::max(ids_[ordinal].value, e.peer);
                    if (!pair_ctr_seen_[{lo, hi}].insert(static_cast<std::uint16_t>(e.a)).second)
                        report_.counters.pairwise_ctr_reuse += 1;
                    break;
                }
            }
        }
    }

    void adversary_replay(std::uint32_t step, std::uint32_t index) {
        if (index >= capture_log_.size()) {
            event_line(step, "adv_replay index=" + std::to_string(index) + " unavailable");
            return;
        }
        const Frame frame = capture_log_[index].frame;  // copy; log grows below
        event_line(step, "adv_replay index=" + std::to_string(index) + " from=" +
                             std::to_string(frame.sender.value) + " s=" + std::to_string(frame.s));
        capture_log_.push_back({frame, step, true, false, {}});
        for (std::uint32_t r = 0; r < config_.node_count; ++r) {
            if (ids_[r].value == frame.sender.value) continue;
            deliver(step, r, frame, Provenance::adv_replay);
        }
    }

    void adversary_inject(std::uint32_t step) {
        Frame frame;
        frame.sender = ids_[adversary_rng_->uniform_below(ids_.size())];
        frame.msg_type = secmsg::MsgType::DATA;
        frame.s = static_cast<std::uint16_t>(1 + adversary_rng_->uniform_below(65535));
        frame.ciphertext.resize(16);
        adversary_rng_->fill(frame.ciphertext);
        adversary_rng_->fill(frame.mac);
        event_line(step, "adv_inject sender=" + std::to_string(frame.sender.value) +
                             " s=" + std::to_string(frame.s));
        capture_log_.push_back({frame, step, true, false, {}});
        for (std::uint32_t r = 0; r < config_.node_count; ++r) {
            if (ids_[r].value == frame.sender.value) continue;
            deliver(step, r, frame, Provenance::adv_inject);
        }
    }

    void adversary_compromise(std::uint32_t step, std::uint32_t ordinal) {
        Compromise c;
        c.ordinal = ordinal;
        c.step = step;
        c.share = nodes_[ordinal].share();
        c.sending_key = nodes_[ordinal].sending_key();
        c.neighbor_keys = nodes_[ordinal].neighbor_keys();
        compromises_.push_back(std::move(c));
        report_.adversary.compromised_nodes += 1;
        event_line(step, "adv_compromise node=" + std::to_string(ids_[ordinal].value));
    }

    void analyze_adversary() {
        // keys in the adversary's hands after the run
        std::set<Key80> stolen;
        for (const auto& c : compromises_) {
            stolen.insert(c.sending_key);
            for (const auto& [id, key] : c.neighbor_keys) stolen.insert(key);
        }

        if (eavesdrop_from_) {
            for (const auto& cap : capture_log_)
                if (cap.is_data && !cap.adversary_origin && cap.step >= *eavesdrop_from_)
                    report_.adversary.eavesdropped_frames += 1;
            std::vector<Key80> keyring(stolen.begin(), stolen.end());
            report_.adversary.payloads_recovered =
                recovered_payload_count(keyring, *eavesdrop_from_);
        }

        if (!compromises_.empty()) {
            report_.adversary.attempted_reconstruction = true;
            std::map<std::uint16_t, keydist::NodeShare> by_id;
            for (const auto& c : compromises_) by_id.emplace(c.share.id.value, c.share);
            std::vector<keydist::NodeShare> shares;
            for (auto& [id, share] : by_id) shares.push_back(share);

            try {
                auto rebuilt = keydist::reconstruct_master(shares);
                report_.adversary.master_reconstructed =
                    std::equal(rebuilt.coeffs().begin(), rebuilt.coeffs().end(),
                               master_->coeffs().begin(), master_->coeffs().end());
            } catch (const Error&) {
                report_.adversary.master_reconstructed = false;
            }

            // predict the secret of the first two non-compromised nodes
            std::set<std::uint32_t> hit;
            for (const auto& c : compromises_) hit.insert(c.ordinal);
            std::vector<std::uint32_t> clean;
            for (std::uint32_t i = 0; i < config_.node_count && clean.size() < 2; ++i)
                if (!hit.contains(i)) clean.push_back(i);
            if (clean.size() == 2) {
                const NodeId a = ids_[clean[0]];
                const NodeId b = ids_[clean[1]];
                const auto guess = keydist::predict_pairwise_secret(shares, a, b, *adversary_rng_);
                report_.adversary.secret_prediction_correct = guess == master_->evaluate(a, b);
            }
        }
    }

    void finish_safety() {
        for (std::size_t t = 0; t < config_.traffic.size(); ++t) {
            const auto& reached = coverage_[payload_digest(config_.traffic[t].payload)];
            report_.coverage.push_back("payload " + std::to_string(t) + " reached " +
                                       std::to_string(reached.size()) + " of " +
                                       std::to_string(config_.node_count));
        }
        // forged-frame acceptances record their violations at acceptance time
        if (compromises_.empty() && report_.adversary.payloads_recovered != 0)
            violation("key-less adversary recovered payloads");
        if (report_.counters.bytes_overhead_total != 6 * report_.counters.frames_sent)
            violation("overhead accounting mismatch");
        if (report_.counters.frames_delivered >
            report_.counters.frames_sent * config_.node_count)
            violation("delivery count exceeds physical bound");
        report_.safety_ok = report_.safety_violations.empty();
    }

    SimConfig config_;
    std::optional<keydist::MasterPolynomial> master_;
    std::vector<NodeId> ids_;
    std::vector<Node> nodes_;
    std::vector<Vec2> positions_;
    std::vector<Vec2> waypoints_;
    std::vector<double> speeds_;
    std::optional<SerpentStream> mobility_rng_;
    std::optional<SerpentStream> loss_rng_;
    std::optional<SerpentStream> adversary_rng_;
    std::vector<std::vector<Outbound>> outboxes_;
    std::vector<CapturedFrame> capture_log_;
    std::vector<Compromise> compromises_;
    std::optional<std::uint32_t> eavesdrop_from_;
    std::map<std::uint64_t, std::set<std::uint32_t>> coverage_;  // payload digest -> ordinals
    std::set<AcceptSig> accepted_;
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::set<std::uint16_t>> own_ctr_seen_;
    std::map<std::pair<std::uint16_t, std::uint16_t>, std::set<std::uint16_t>> pair_ctr_seen_;
    ScenarioReport report_;
};

inline ScenarioReport sim_run(const SimConfig& config) {
    Simulation sim(config);
    sim.run();
    return sim.take_report();
}

}  // namespace sensec::netsim
