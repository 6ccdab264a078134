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
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "awdl/datapath.hpp"
#include "awdl/election.hpp"
#include "awdl/linklayer.hpp"
#include "awdl/peers.hpp"
#include "awdl/sync.hpp"

namespace awdl {

using Json = nlohmann::json;

struct NodeConfig {
    MacAddress mac;
    std::optional<std::uint32_t> metric;  // drawn from the seeded RNG when unset
    std::uint8_t channel = 6;             // social channel: 6, 44, or 149
    std::uint16_t af_period_tu = kDefaultAfPeriodTu;
    std::uint32_t peer_timeout_ms = 3000;
    std::uint64_t rng_seed = 0;
    std::string hostname;

    bool channel_valid() const { return channel == 6 || channel == 44 || channel == 149; }
};

// --- events into the state machine -----------------------------------------

struct LinkFrameIn {
    LinkFrame frame;
};
struct HostFrameIn {
    EthernetFrame frame;
};
struct TimerFired {
    TimeMicros at;
};
using EngineEvent = std::variant<LinkFrameIn, HostFrameIn, TimerFired>;

// --- actions out of the state machine ---------------------------------------

enum class LogEvent {
    NodeStarted,
    MasterChanged,
    PeerAdded,
    PeerExpired,
    AfSent,
    DataSent,
    DataReceived,
    ParseError,
    Stats,
};

const char* to_string(LogEvent e);

struct LogRecord {
    TimeMicros t = 0;
    LogEvent event = LogEvent::Stats;
    Json fields;

    /// One JSON-lines stats record: {"t_us":..., "event":..., ...fields}.
    std::string to_json_line() const;
};

struct LinkFrameOut {
    LinkFrame frame;
};
struct HostFrameOut {
    EthernetFrame frame;
};
struct SetTimer {
    TimeMicros at;
};
using EngineAction = std::variant<LinkFrameOut, HostFrameOut, SetTimer, LogRecord>;

struct EngineCounters {
    std::uint64_t frames_in = 0;
    std::uint64_t action_frames = 0;
    std::uint64_t own_frames = 0;
    std::uint64_t data_frames = 0;
    std::uint64_t other_dropped = 0;
    std::uint64_t not_addressed = 0;
    std::uint64_t parse_errors = 0;
    std::uint64_t tlv_decode_errors = 0;
    std::uint64_t af_sent = 0;
    std::uint64_t host_frames_in = 0;
};

/// Sans-I/O node state machine. step() is a pure transition over the held
/// state: no clock reads, no randomness beyond the seed captured at
/// construction. Runtimes keep a single pending timer per node; a SetTimer
/// action replaces it.
class Engine {
  public:
    Engine(NodeConfig cfg, TimeMicros start_time);

    /// Initial actions: schedules the first action frame.
    std::vector<EngineAction> start();

    std::vector<EngineAction> step(const EngineEvent& event, TimeMicros now);

    const NodeConfig& config() const { return cfg_; }
    const ElectionState& election() const { return election_; }
    const SyncState& sync() const { return sync_; }
    const PeerTable& peers() const { return peers_; }
    const DatapathState& datapath() const { return datapath_; }
    const EngineCounters& counters() const { return counters_; }
    TimeMicros next_af() const { return next_af_; }
    std::uint32_t metric() const { return election_.self_metric; }

    /// Final stats records (counters plus one record per live peer).
    std::vector<LogRecord> final_stats(TimeMicros now) const;

  private:
    std::vector<EngineAction> on_link_frame(const LinkFrame& f, TimeMicros now);
    std::vector<EngineAction> on_host_frame(const EthernetFrame& f, TimeMicros now);
    std::vector<EngineAction> on_timer(TimeMicros now);

    std::vector<PeerVote> collect_votes(TimeMicros now) const;
    void log(std::vector<EngineAction>& out, TimeMicros t, LogEvent e, Json fields) const;

    NodeConfig cfg_;
    ElectionState election_;
    SyncState sync_;
    PeerTable peers_;
    DatapathState datapath_;
    TimeMicros next_af_ = 0;
    std::uint16_t mgmt_seq_ = 0;
    EngineCounters counters_;
};

/// Host-side frame pipe for the data path. recv returns the next pending
/// frame from the host, if any.
class HostPort {
  public:
    virtual ~HostPort() = default;
    virtual std::optional<EthernetFrame> recv() = 0;
    virtual void send(const EthernetFrame& f) = 0;
};

struct RunLoopStats {
    std::uint64_t frames_in = 0;
    std::uint64_t steps = 0;
    std::uint64_t timer_steps = 0;
};

/// Drives an engine from a frame port in timestamp order, interleaving the
/// engine's own timer. The engine is constructed on the first frame's
/// timestamp so captures with arbitrary epochs replay without catch-up.
/// Returns when the port closes; final stats flush through on_log.
RunLoopStats run_loop(const NodeConfig& cfg, FramePort& port, HostPort* host,
                      const std::function<void(const LogRecord&)>& on_log);

}  // namespace awdl
