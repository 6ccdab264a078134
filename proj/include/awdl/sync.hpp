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

#include "awdl/election.hpp"
#include "awdl/error.hpp"
#include "awdl/time_units.hpp"
#include "awdl/wire.hpp"

namespace awdl {

/// Availability-window timekeeping. The anchor pins the start of the AW
/// numbered anchor_seq on this node's local clock; everything else is
/// arithmetic relative to it.
struct SyncState {
    TimeMicros anchor_time = 0;
    std::uint16_t anchor_seq = 0;
    std::uint32_t aw_duration = kAwDurationMicros;
    std::uint8_t slot_aws = kAwsPerSlot;
    std::uint32_t af_period = tu_to_micros(kDefaultAfPeriodTu);  // microseconds
    ChannelSequence channel_sequence;

    bool operator==(const SyncState&) const = default;
};

struct AwPosition {
    std::uint16_t seq = 0;
    std::uint32_t elapsed_in_aw = 0;  // microseconds into the AW

    bool operator==(const AwPosition&) const = default;
};

/// AW sequence number and phase at time t; t may precede the anchor.
AwPosition aw_seq_at(const SyncState& s, TimeMicros t);

/// Advisory schedule lookup; the engine never retunes the radio.
std::uint8_t channel_for_seq(const SyncState& s, std::uint16_t seq);

/// Re-anchors local timekeeping on a master's advertised AW phase, placing
/// the anchor at frame_target_tx minus the AW time already elapsed there.
Result<SyncState> adopt_timing(const SyncState& s, const SyncParams& sp,
                               TimeMicros frame_target_tx);

/// Sync parameters describing this node's state at the frame's target tx
/// time. remaining_aw_length floors, tx_counter ceils.
SyncParams build_sync_params(const SyncState& s, const ElectionState& e, TimeMicros now,
                             TimeMicros next_af);

/// Smallest t strictly after now with (t - anchor) divisible by af_period.
TimeMicros next_af_time(const SyncState& s, TimeMicros now);

/// Cyclic phase distance between two predicted AW starts, at most
/// aw_duration / 2.
std::uint32_t sync_error(TimeMicros a_pred, TimeMicros b_pred, std::uint32_t aw_duration);

}  // namespace awdl
