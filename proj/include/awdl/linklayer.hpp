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
#include <deque>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "awdl/bytes.hpp"
#include "awdl/error.hpp"
#include "awdl/time_units.hpp"

namespace awdl {

/// A raw 802.11 frame crossing the abstract link layer, without radiotap.
struct LinkFrame {
    TimeMicros timestamp = 0;
    Bytes bytes;

    bool operator==(const LinkFrame&) const = default;
};

/// Frame transport contract. Adapters deliver whole frames, preserve bytes,
/// and timestamp on receipt; send is best-effort.
class FramePort {
  public:
    virtual ~FramePort() = default;
    virtual Result<std::optional<LinkFrame>> recv() = 0;
    virtual Status send(const LinkFrame& f) = 0;
};

/// In-memory FIFO port; frames sent come back out of recv in order.
class LoopbackPort final : public FramePort {
  public:
    Result<std::optional<LinkFrame>> recv() override;
    Status send(const LinkFrame& f) override;
    void close() { closed_ = true; }

  private:
    std::deque<LinkFrame> queue_;
    bool closed_ = false;
};

struct SimChannelConfig {
    double loss_probability = 0.0;
    std::uint64_t propagation_delay = 0;  // microseconds
    std::uint64_t rng_seed = 0;
};

using SimNodeId = std::uint32_t;

struct SimDelivery {
    SimNodeId node = 0;
    LinkFrame frame;  // timestamp = arrival time
};

/// Uniform draw in [0,1) from the top 53 bits, fixed across platforms so a
/// seed fully determines delivery outcomes.
double sim_uniform01(std::mt19937_64& rng);

/// Deterministic broadcast channel. Every frame reaches each other
/// registered, unblocked node independently with probability
/// 1 - loss_probability after the propagation delay.
class SimChannel {
  public:
    explicit SimChannel(SimChannelConfig cfg);

    SimNodeId register_node();

    /// Symmetric link block between two nodes, for line/partition setups.
    void set_blocked(SimNodeId a, SimNodeId b, bool blocked);

    Status send(SimNodeId from, const LinkFrame& f);

    /// Drains deliveries due by `until`, ordered by (time, node, insertion).
    std::vector<SimDelivery> advance(TimeMicros until);

    std::optional<TimeMicros> next_delivery_time() const;

    std::uint64_t frames_sent() const { return frames_sent_; }

    /// Called once per transmitted frame, before loss draws; backs pcap
    /// capture of everything crossing the channel.
    std::function<void(const LinkFrame&)> on_transmit;

  private:
    struct Pending {
        TimeMicros at;
        SimNodeId node;
        std::uint64_t seq;
        LinkFrame frame;
    };

    SimChannelConfig cfg_;
    std::mt19937_64 rng_;
    std::uint32_t node_count_ = 0;
    std::set<std::pair<SimNodeId, SimNodeId>> blocked_;
    std::vector<Pending> pending_;
    std::uint64_t next_seq_ = 0;
    std::uint64_t frames_sent_ = 0;
};

/// SimChannel endpoint bound to one node id; recv yields frames the channel
/// has already delivered to that node.
class SimPort final : public FramePort {
  public:
    SimPort(SimChannel& channel, SimNodeId id) : channel_(channel), id_(id) {}

    Result<std::optional<LinkFrame>> recv() override;
    Status send(const LinkFrame& f) override;

    void deliver(LinkFrame f) { inbox_.push_back(std::move(f)); }
    SimNodeId id() const { return id_; }

  private:
    SimChannel& channel_;
    SimNodeId id_;
    std::deque<LinkFrame> inbox_;
};

}  // namespace awdl
