#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "sensec/errors.hpp"
#include "sensec/netsim.hpp"

// Scenario files are plain key-value text, one directive per line, with
// '#' comments:
//
//   node_count 5
//   world 200 150
//   radio_range 40
//   loss_prob 0.1
//   steps 30
//   mobility static                 # or: mobility random_waypoint 2.5
//   degree_t 20
//   seed 1234
//   pos 0 10.0 20.0                 # fixed placement for node ordinal 0
//   send 1 0 68656c6c6f             # step, node ordinal, hex payload
//   adversary eavesdrop 0           # record from this step on
//   adversary replay 3 7            # capture index, at step
//   adversary inject_random 4       # at step
//   adversary compromise 2 5        # node ordinal, at step

namespace sensec::scenario {

namespace detail {

inline std::vector<std::uint8_t> parse_hex(const std::string& hex, int line_no) {
    if (hex.empty() || hex.size() % 2 != 0)
        throw ConfigInvalid("line " + std::to_string(line_no) + ": bad hex payload");
    std::vector<std::uint8_t> out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        int v = 0;
        for (int k = 0; k < 2; ++k) {
            const char c = hex[i + static_cast<std::size_t>(k)];
            int nibble;
            if (c >= '0' && c <= '9') nibble = c - '0';
            else if (c >= 'a' && c <= 'f') nibble = c - 'a' + 10;
            else if (c >= 'A' && c <= 'F') nibble = c - 'A' + 10;
            else throw ConfigInvalid("line " + std::to_string(line_no) + ": bad hex payload");
            v = v * 16 + nibble;
        }
        out.push_back(static_cast<std::uint8_t>(v));
    }
    return out;
}

template <typename T>
T parse_number(std::istringstream& in, int line_no, const char* what) {
    T value{};
    if (!(in >> value))
        throw ConfigInvalid("line " + std::to_string(line_no) + ": expected " + what);
    return value;
}

}  // namespace detail

inline netsim::SimConfig parse_scenario(const std::string& text) {
    netsim::SimConfig config;
    std::istringstream lines(text);
    std::string line;
    int line_no = 0;
    while (std::getline(lines, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream in(line);
        std::string key;
        if (!(in >> key)) continue;

        if (key == "node_count") {
            config.node_count = detail::parse_number<std::uint32_t>(in, line_no, "node count");
        } else if (key == "world") {
            config.world_w = detail::parse_number<double>(in, line_no, "world width");
            config.world_h = detail::parse_number<double>(in, line_no, "world height");
        } else if (key == "radio_range") {
            config.radio_range = detail::parse_number<double>(in, line_no, "radio range");
        } else if (key == "loss_prob") {
            config.loss_prob = detail::parse_number<double>(in, line_no, "loss probability");
        } else if (key == "steps") {
            config.steps = detail::parse_number<std::uint32_t>(in, line_no, "step count");
        } else if (key == "degree_t") {
            config.degree_t = detail::parse_number<int>(in, line_no, "degree");
        } else if (key == "seed") {
            config.seed = detail::parse_number<std::uint64_t>(in, line_no, "seed");
        } else if (key == "mobility") {
            std::string model;
            in >> model;
            if (model == "static") {
                config.mobility = netsim::Mobility::fixed;
            } else if (model == "random_waypoint") {
                config.mobility = netsim::Mobility::random_waypoint;
                config.max_speed = detail::parse_number<double>(in, line_no, "max speed");
            } else {
                throw ConfigInvalid("line " + std::to_string(line_no) + ": unknown mobility model");
            }
        } else if (key == "pos") {
            const auto ordinal = detail::parse_number<std::uint32_t>(in, line_no, "node ordinal");
            netsim::Vec2 p;
            p.x = detail::parse_number<double>(in, line_no, "x coordinate");
            p.y = detail::parse_number<double>(in, line_no, "y coordinate");
            config.positions[ordinal] = p;
        } else if (key == "send") {
            netsim::TrafficEntry entry;
            entry.at_step = detail::parse_number<std::uint32_t>(in, line_no, "step");
            entry.node = detail::parse_number<std::uint32_t>(in, line_no, "node ordinal");
            std::string hex;
            if (!(in >> hex))
                throw ConfigInvalid("line " + std::to_string(line_no) + ": expected hex payload");
            entry.payload = detail::parse_hex(hex, line_no);
            config.traffic.push_back(std::move(entry));
        } else if (key == "adversary") {
            std::string kind;
            in >> kind;
            netsim::AdversaryAction action;
            if (kind == "eavesdrop") {
                action.kind = netsim::AdversaryAction::Kind::eavesdrop;
                action.at_step = detail::parse_number<std::uint32_t>(in, line_no, "from step");
            } else if (kind == "replay") {
                action.kind = netsim::AdversaryAction::Kind::replay;
                action.arg = detail::parse_number<std::uint32_t>(in, line_no, "capture index");
                action.at_step = detail::parse_number<std::uint32_t>(in, line_no, "step");
            } else if (kind == "inject_random") {
                action.kind = netsim::AdversaryAction::Kind::inject_random;
                action.at_step = detail::parse_number<std::uint32_t>(in, line_no, "step");
            } else if (kind == "compromise") {
                action.kind = netsim::AdversaryAction::Kind::compromise;
                action.arg = detail::parse_number<std::uint32_t>(in, line_no, "node ordinal");
                action.at_step = detail::parse_number<std::uint32_t>(in, line_no, "step");
            } else {
                throw ConfigInvalid("line " + std::to_string(line_no) + ": unknown adversary action");
            }
            config.adversary.push_back(action);
        } else {
            throw ConfigInvalid("line " + std::to_string(line_no) + ": unknown directive '" + key +
                                "'");
        }

        std::string trailing;
        if (in >> trailing)
            throw ConfigInvalid("line " + std::to_string(line_no) + ": trailing tokens");
    }
    config.validate();
    return config;
}

inline netsim::SimConfig load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

}  // namespace sensec::scenario
