/*
 *    Copyright 2026 The Awdl Engine Authors. All Rights Reserved.
 *
 *    Licensed under the Apache License, Version 2.0 (the "License");
 *    you may not use this file except in compliance with the License.
 *    You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 *    Unless required by applicable law or agreed to in writing, software
 *    distributed under the License is distributed on an "AS IS" BASIS,
 *    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 *    See the License for the specific language governing permissions and
 *    limitations under the License.
 */

#include "awdl/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace awdl {

namespace {

Error invalid(const std::string& where, const std::string& what) {
    return Error(Err::InvalidScenario, where + ": " + what);
}

Result<MacAddress> require_mac(const YAML::Node& n, const std::string& where) {
    if (!n || !n.IsScalar()) return invalid(where, "missing mac address");
    auto mac = MacAddress::parse(n.as<std::string>());
    if (!mac) return invalid(where, "bad mac address '" + n.as<std::string>() + "'");
    return *mac;
}

// Per-node metric seeds must differ even when the scenario gives only one
// channel seed.
std::uint64_t derive_node_seed(std::uint64_t base, std::size_t index) {
    return base ^ (0x9e3779b97f4a7c15ull * (index + 1));
}

}  // namespace

Result<Scenario> parse_scenario(const std::string& text) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        return invalid("scenario", e.what());
    }
    if (!root.IsMap()) return invalid("scenario", "top level must be a mapping");

    Scenario s;
    try {
        if (!root["duration_ms"]) return invalid("scenario", "duration_ms is required");
        s.duration = root["duration_ms"].as<std::uint64_t>() * 1000;
        if (root["social_channel"]) s.social_channel = root["social_channel"].as<std::uint16_t>() & 0xff;

        if (const auto ch = root["channel"]) {
            if (ch["loss"]) s.channel.loss_probability = ch["loss"].as<double>();
            if (ch["delay_us"]) s.channel.propagation_delay = ch["delay_us"].as<std::uint64_t>();
            if (ch["seed"]) s.channel.rng_seed = ch["seed"].as<std::uint64_t>();
        }
        if (s.channel.loss_probability < 0.0 || s.channel.loss_probability > 1.0)
            return invalid("channel.loss", "must be within [0, 1]");

        const auto nodes = root["nodes"];
        if (!nodes || !nodes.IsSequence() || nodes.size() == 0)
            return invalid("nodes", "at least one node is required");
        std::set<MacAddress> macs;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const auto n = nodes[i];
            const std::string where = "nodes[" + std::to_string(i) + "]";
            ScenarioNode sn;
            auto mac = require_mac(n["mac"], where);
            if (!mac) return mac.error();
            sn.config.mac = mac.value();
            if (!macs.insert(sn.config.mac).second)
                return invalid(where, "duplicate mac " + sn.config.mac.str());
            sn.config.channel = s.social_channel;
            if (n["channel"]) sn.config.channel = static_cast<std::uint8_t>(n["channel"].as<std::uint16_t>());
            if (!sn.config.channel_valid())
                return invalid(where, "channel must be one of 6, 44, 149");
            if (n["metric"]) sn.config.metric = n["metric"].as<std::uint32_t>();
            if (n["hostname"]) sn.config.hostname = n["hostname"].as<std::string>();
            if (n["af_period_tu"]) sn.config.af_period_tu = n["af_period_tu"].as<std::uint16_t>();
            if (n["peer_timeout_ms"]) sn.config.peer_timeout_ms = n["peer_timeout_ms"].as<std::uint32_t>();
            sn.config.rng_seed = n["seed"] ? n["seed"].as<std::uint64_t>()
                                           : derive_node_seed(s.channel.rng_seed, i);
            if (n["ppm"]) sn.ppm = n["ppm"].as<std::int32_t>();
            if (n["join_at_ms"]) sn.join_at = n["join_at_ms"].as<std::uint64_t>() * 1000;
            if (sn.join_at >= s.duration && s.duration > 0)
                return invalid(where, "join_at_ms must precede duration_ms");
            s.nodes.push_back(std::move(sn));
        }

        if (const auto traffic = root["traffic"]) {
            if (!traffic.IsSequence()) return invalid("traffic", "must be a sequence");
            for (std::size_t i = 0; i < traffic.size(); ++i) {
                const auto t = traffic[i];
                const std::string where = "traffic[" + std::to_string(i) + "]";
                TrafficDirective d;
                const std::string type = t["type"] ? t["type"].as<std::string>() : "";
                if (type == "ping")
                    d.kind = TrafficDirective::Kind::Ping;
                else if (type == "bytes")
                    d.kind = TrafficDirective::Kind::Bytes;
                else
                    return invalid(where, "type must be 'ping' or 'bytes'");
                auto from = require_mac(t["from"], where + ".from");
                if (!from) return from.error();
                auto to = require_mac(t["to"], where + ".to");
                if (!to) return to.error();
                d.from = from.value();
                d.to = to.value();
                if (!macs.count(d.from)) return invalid(where, "unknown node " + d.from.str());
                if (!macs.count(d.to)) return invalid(where, "unknown node " + d.to.str());
                if (d.from == d.to) return invalid(where, "from and to must differ");
                if (t["at_ms"]) d.at = t["at_ms"].as<std::uint64_t>() * 1000;
                if (t["count"]) d.count = t["count"].as<std::uint32_t>();
                if (t["payload_len"]) d.payload_len = t["payload_len"].as<std::uint32_t>();
                if (t["interval_ms"]) d.interval = t["interval_ms"].as<std::uint64_t>() * 1000;
                if (t["size"]) d.size = t["size"].as<std::uint64_t>();
                if (t["chunk_len"]) d.chunk_len = t["chunk_len"].as<std::uint32_t>();
                if (d.kind == TrafficDirective::Kind::Bytes && d.size == 0)
                    return invalid(where, "bytes directive needs size > 0");
                if (d.chunk_len == 0 || d.chunk_len > kMaxDataPayload - 64)
                    return invalid(where, "chunk_len out of range");
                s.traffic.push_back(d);
            }
        }

        if (const auto blocked = root["blocked"]) {
            if (!blocked.IsSequence()) return invalid("blocked", "must be a sequence of pairs");
            for (std::size_t i = 0; i < blocked.size(); ++i) {
                const auto pair = blocked[i];
                const std::string where = "blocked[" + std::to_string(i) + "]";
                if (!pair.IsSequence() || pair.size() != 2)
                    return invalid(where, "expected [mac, mac]");
                auto a = require_mac(pair[0], where);
                if (!a) return a.error();
                auto b = require_mac(pair[1], where);
                if (!b) return b.error();
                if (!macs.count(a.value()) || !macs.count(b.value()))
                    return invalid(where, "unknown node in pair");
                s.blocked.emplace_back(a.value(), b.value());
            }
        }
    } catch (const YAML::Exception& e) {
        return invalid("scenario", e.what());
    }

    if (s.duration == 0) return invalid("duration_ms", "must be > 0");
    return s;
}

Result<Scenario> load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) return Error(Err::InvalidScenario, path + ": cannot open");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

}  // namespace awdl
