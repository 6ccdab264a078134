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

namespace awdl {

/// Microseconds since an arbitrary per-run epoch. Differences are taken
/// with unsigned wraparound and interpreted as signed, so values derived
/// near the epoch never misbehave.
using TimeMicros = std::uint64_t;

/// One 802.11 time unit.
inline constexpr std::uint32_t kMicrosPerTu = 1024;

inline constexpr std::uint32_t kAwDurationTu = 16;
inline constexpr std::uint32_t kAwDurationMicros = kAwDurationTu * kMicrosPerTu;  // 16384

/// Availability windows per channel-sequence slot and slots per period.
inline constexpr std::uint32_t kAwsPerSlot = 4;
inline constexpr std::uint32_t kChanSeqSlots = 16;
inline constexpr std::uint32_t kChanSeqPeriodAws = kAwsPerSlot * kChanSeqSlots;  // 64

inline constexpr std::uint16_t kDefaultAfPeriodTu = 110;

constexpr std::uint64_t tu_to_micros(std::uint64_t tu) { return tu * kMicrosPerTu; }

/// Signed delta between two time points, tolerant of epoch-adjacent values.
constexpr std::int64_t time_delta(TimeMicros later, TimeMicros earlier) {
    return static_cast<std::int64_t>(later - earlier);
}

}  // namespace awdl
