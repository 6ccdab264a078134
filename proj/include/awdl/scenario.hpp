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

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "awdl/engine.hpp"
#include "awdl/linklayer.hpp"

namespace awdl {

struct ScenarioNode {
    NodeConfig config;
    std::int32_t ppm = 0;     // local clock rate offset, parts per million
    TimeMicros join_at = 0;   // global microseconds
};

struct TrafficDirective {
    enum class Kind { Ping, Bytes };

    Kind kind = Kind::Ping;
    MacAddress from;
    MacAddress to;
    TimeMicros at = 0;  // global microseconds
    // ping
    std::uint32_t count = 1;
    std::uint32_t payload_len = 56;
    TimeMicros interval = 100'000;
    // bytes
    std::uint64_t size = 0;
    std::uint32_t chunk_len = 1200;
};

struct Scenario {
    std::vector<ScenarioNode> nodes;
    SimChannelConfig channel;
    std::uint8_t social_channel = 6;
    std::vector<TrafficDirective> traffic;
    std::vector<std::pair<MacAddress, MacAddress>> blocked;
    TimeMicros duration = 0;
};

/// Parses and validates the scenario file format (YAML; see README for the
/// schema). Errors carry the offending location in the message.
Result<Scenario> parse_scenario(const std::string& text);
Result<Scenario> load_scenario(const std::string& path);

}  // namespace awdl
