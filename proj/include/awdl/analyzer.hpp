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

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "awdl/error.hpp"
#include "awdl/peers.hpp"
#include "awdl/wire.hpp"

namespace awdl {

/// One dissected capture record. Malformed frames keep class Other and the
/// reasons in parse_errors; dissection never drops a record.
struct FrameRecord {
    TimeMicros t = 0;
    FrameClass cls = FrameClass::Other;
    MacAddress src;
    MacAddress dst;
    // action frames
    std::uint8_t subtype = 0;
    std::uint16_t seq_ctrl = 0;
    std::vector<std::uint8_t> tlv_types;  // wire order
    std::optional<ElectionParams> election;
    std::optional<SyncParams> sync;
    std::optional<std::string> hostname;
    // data frames
    std::optional<DataHeader> data_hdr;
    std::uint32_t payload_len = 0;
    std::vector<Err> parse_errors;
};

struct DissectReport {
    std::vector<FrameRecord> records;
    bool tail_truncated = false;
};

/// Per-frame dissection of a capture file. File-level failures (bad magic,
/// unsupported linktype) error out; per-frame damage only marks records.
Result<DissectReport> dissect_capture(const std::string& path);

/// Dissects one already-stripped frame at the given capture timestamp.
FrameRecord dissect_frame(TimeMicros t, ByteSpan frame);

struct TimelineEntry {
    TimeMicros t = 0;
    MacAddress node;
    MacAddress master;
    std::uint32_t distance = 0;
};

/// One entry per change in a node's advertised (master, distance), in time
/// order, including each node's first advertisement.
std::vector<TimelineEntry> election_timeline(const std::vector<FrameRecord>& records);

struct SyncAccuracyPair {
    MacAddress a;
    MacAddress b;
    std::uint64_t samples = 0;
    std::uint32_t median_error_us = 0;
    std::uint32_t max_error_us = 0;
};

struct SyncAccuracyReport {
    std::vector<SyncAccuracyPair> pairs;
};

/// Pairwise AW-phase error between nodes, reconstructed from each action
/// frame's own sync TLV anchored at its capture timestamp. Needs sync TLVs
/// from at least two nodes.
Result<SyncAccuracyReport> sync_accuracy(const std::vector<FrameRecord>& records);

nlohmann::json to_json(const FrameRecord& r);
nlohmann::json to_json(const TimelineEntry& e);
nlohmann::json to_json(const SyncAccuracyReport& r);

/// Human-readable one-liner for `awdl dissect` default output.
std::string frame_record_line(std::size_t index, const FrameRecord& r);

}  // namespace awdl
