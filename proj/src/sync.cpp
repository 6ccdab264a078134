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

#include "awdl/sync.hpp"

#include <cstdlib>

namespace awdl {

namespace {

// Floor division/modulo for signed deltas so times before the anchor land
// in the right AW.
std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

std::int64_t floor_mod(std::int64_t a, std::int64_t b) { return a - floor_div(a, b) * b; }

}  // namespace

AwPosition aw_seq_at(const SyncState& s, TimeMicros t) {
    const std::int64_t delta = time_delta(t, s.anchor_time);
    const std::int64_t dur = s.aw_duration;
    const std::int64_t aws = floor_div(delta, dur);
    AwPosition pos;
    pos.seq = static_cast<std::uint16_t>(static_cast<std::uint64_t>(s.anchor_seq) +
                                         static_cast<std::uint64_t>(aws));
    pos.elapsed_in_aw = static_cast<std::uint32_t>(floor_mod(delta, dur));
    return pos;
}

std::uint8_t channel_for_seq(const SyncState& s, std::uint16_t seq) {
    const std::uint32_t slot = (seq % kChanSeqPeriodAws) / s.slot_aws;
    return s.channel_sequence.entries[slot].channel;
}

Result<SyncState> adopt_timing(const SyncState& s, const SyncParams& sp,
                               TimeMicros frame_target_tx) {
    if (sp.remaining_aw_length > sp.aw_common_length)
        return Error(Err::InvariantViolation, "remaining AW length exceeds common length");
    const std::uint64_t elapsed =
        tu_to_micros(sp.aw_common_length) - tu_to_micros(sp.remaining_aw_length);
    SyncState next = s;
    next.anchor_time = frame_target_tx - elapsed;  // wraps harmlessly near the epoch
    next.anchor_seq = sp.aw_seq_number;
    next.channel_sequence = sp.channel_sequence;
    return next;
}

SyncParams build_sync_params(const SyncState& s, const ElectionState& e, TimeMicros now,
                             TimeMicros next_af) {
    const AwPosition at_tx = aw_seq_at(s, next_af);
    SyncParams sp;
    sp.aw_seq_number = at_tx.seq;
    sp.aw_common_length = kAwDurationTu;
    sp.aw_ext_length = kAwDurationTu;
    sp.remaining_aw_length =
        static_cast<std::uint16_t>((s.aw_duration - at_tx.elapsed_in_aw) / kMicrosPerTu);
    sp.aw_period = static_cast<std::uint16_t>(s.aw_duration / kMicrosPerTu);
    sp.af_period = static_cast<std::uint16_t>(s.af_period / kMicrosPerTu);
    const std::int64_t until_tx = time_delta(next_af, now);
    sp.tx_counter = until_tx <= 0 ? 0
                                  : static_cast<std::uint16_t>((until_tx + kMicrosPerTu - 1) /
                                                               kMicrosPerTu);
    sp.master_address = e.top_master;
    sp.master_channel = channel_for_seq(s, at_tx.seq);
    sp.next_aw_channel = sp.master_channel;
    sp.channel_sequence = s.channel_sequence;
    return sp;
}

TimeMicros next_af_time(const SyncState& s, TimeMicros now) {
    const std::int64_t delta = time_delta(now, s.anchor_time);
    const std::int64_t period = s.af_period;
    const std::int64_t k = floor_div(delta, period) + 1;
    return s.anchor_time + static_cast<std::uint64_t>(k * period);
}

std::uint32_t sync_error(TimeMicros a_pred, TimeMicros b_pred, std::uint32_t aw_duration) {
    const std::int64_t diff = time_delta(a_pred, b_pred);
    const std::uint32_t d = static_cast<std::uint32_t>(floor_mod(diff, aw_duration));
    return d <= aw_duration - d ? d : aw_duration - d;
}

}  // namespace awdl
