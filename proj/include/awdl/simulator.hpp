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

#include <map>
#include <string>
#include <vector>

#include "awdl/icmp6.hpp"
#include "awdl/scenario.hpp"

namespace awdl {

enum class TraceKind {
    MasterChanged,
    PeerAdded,
    PeerExpired,
    AfSent,
    DataSent,
    DataReceived,
    EchoReplied,
};

const char* to_string(TraceKind k);

/// One simulation trace entry. Times are global channel time; ties keep
/// emission order.
struct TraceEvent {
    TimeMicros t = 0;
    MacAddress node;
    TraceKind kind = TraceKind::AfSent;
    Json detail;

    std::string to_json_line() const;
};

struct EchoStats {
    std::uint32_t requests = 0;
    std::uint32_t replies = 0;
    std::uint32_t payload_mismatches = 0;
    std::uint32_t bad_checksums = 0;
};

struct StreamStats {
    std::uint64_t bytes_sent = 0;
    Bytes sent;
    Bytes received;
    bool in_order = true;
    std::uint64_t acked_bytes = 0;
};

struct SimResult {
    std::vector<TraceEvent> trace;
    std::map<MacAddress, std::vector<EthernetFrame>> host_rx;
    std::map<MacAddress, ElectionState> final_election;
    std::map<MacAddress, std::vector<MacAddress>> final_peers;
    std::vector<LinkFrame> channel_frames;  // every frame transmitted, global time
    std::vector<EchoStats> echo;            // one per ping directive
    std::vector<StreamStats> streams;       // one per bytes directive

    std::string trace_json_lines() const;
};

/// Runs a scenario to its duration under virtual time. Deterministic: the
/// scenario (seed included) fully determines the trace, final states, and
/// capture. Writes a pcap of all channel frames when pcap_path is given.
Result<SimResult> run_scenario(const Scenario& s, const std::string& pcap_path = {});

}  // namespace awdl
