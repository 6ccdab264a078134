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

#include <array>
#include <cstdint>
#include <vector>

#include "awdl/bytes.hpp"
#include "awdl/error.hpp"
#include "awdl/mac.hpp"

namespace awdl {

// ---------------------------------------------------------------------------
// Wire constants
//
// Action frame body:
//   category 0x7f | OUI 00:17:f2 | type 0x08 | version | subtype | reserved |
//   phy_tx_time u32 LE | target_tx_time u32 LE | TLVs
// Data frame body (after the 802.11 header):
//   LLC AA AA 03 | OUI 00:17:f2 | PID 08 00 | DataHeader | payload
// All multi-byte TLV integers are little-endian; the only big-endian field
// on the wire is DataHeader.ethertype (network order).
// ---------------------------------------------------------------------------

inline constexpr std::uint8_t kVendorActionCategory = 0x7f;
inline constexpr std::array<std::uint8_t, 3> kAwdlOui = {0x00, 0x17, 0xf2};
inline constexpr std::uint8_t kAwdlActionType = 0x08;
inline constexpr std::uint8_t kAwdlVersion = 0x10;

/// category + OUI + type + version + subtype + reserved + phy + target
inline constexpr std::size_t kActionFixedHeaderLen = 16;

inline constexpr std::size_t kIeee80211HeaderLen = 24;
inline constexpr std::size_t kSnapHeaderLen = 8;
inline constexpr std::size_t kDataHeaderLen = 8;

/// 802.11 frame body limit; serializers refuse anything larger.
inline constexpr std::size_t kMaxBodyLen = 2304;

inline constexpr std::size_t kMaxDataPayload = kMaxBodyLen - kSnapHeaderLen - kDataHeaderLen;

enum class TlvType : std::uint8_t {
    SyncParams = 0x04,
    Hostname = 0x10,
    ChannelSequence = 0x12,
    Version = 0x15,
    ElectionParams = 0x18,
};

inline constexpr std::uint8_t kSubtypePsf = 0;
inline constexpr std::uint8_t kSubtypeMif = 3;

enum class FrameClass : std::uint8_t { AwdlAction, AwdlData, Other };

const char* to_string(FrameClass c);

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

struct Ieee80211Header {
    std::array<std::uint8_t, 2> frame_control{};
    std::uint16_t duration = 0;
    MacAddress addr1;
    MacAddress addr2;
    MacAddress addr3;
    std::uint16_t seq_ctrl = 0;

    bool operator==(const Ieee80211Header&) const = default;

    std::uint8_t type() const { return static_cast<std::uint8_t>((frame_control[0] >> 2) & 0x3); }
    std::uint8_t subtype() const { return static_cast<std::uint8_t>(frame_control[0] >> 4); }
    std::uint8_t protocol_version() const { return static_cast<std::uint8_t>(frame_control[0] & 0x3); }

    static Ieee80211Header action(MacAddress dst, MacAddress src);
    static Ieee80211Header data(MacAddress dst, MacAddress src);
};

struct Tlv {
    std::uint8_t tlv_type = 0;
    Bytes value;

    bool operator==(const Tlv&) const = default;
};

struct ActionFrame {
    Ieee80211Header hdr;
    std::uint8_t subtype = kSubtypeMif;  // kSubtypePsf / kSubtypeMif
    std::uint8_t version = kAwdlVersion;
    std::uint8_t reserved = 0;  // kept so foreign frames reserialize byte-exact
    std::uint32_t phy_tx_time = 0;     // sender-local microseconds
    std::uint32_t target_tx_time = 0;  // sender-local microseconds
    std::vector<Tlv> tlvs;

    bool operator==(const ActionFrame&) const = default;
};

struct ChannelSequenceEntry {
    std::uint8_t flags = 0;
    std::uint8_t channel = 0;

    bool operator==(const ChannelSequenceEntry&) const = default;
};

/// 16-slot AW/channel schedule. `encoding` selects the wire form (0 = bare
/// channel bytes, 1 = flags/channel pairs) and is preserved across a decode
/// so accepted bytes reserialize identically.
struct ChannelSequence {
    std::array<ChannelSequenceEntry, 16> entries{};
    std::uint8_t encoding = 0;
    std::uint8_t duplicate = 0;
    std::uint8_t step_count = 4;  // AWs per slot; wire carries step_count-1
    std::uint16_t fill_channel = 0xffff;

    bool operator==(const ChannelSequence&) const = default;

    static ChannelSequence uniform(std::uint8_t channel);
};

struct SyncParams {
    std::uint8_t next_aw_channel = 0;
    std::uint16_t tx_counter = 0;  // TU
    std::uint8_t master_channel = 0;
    std::uint8_t guard_time = 0;  // TU, carried opaquely
    std::uint16_t aw_period = 0;  // TU
    std::uint16_t af_period = 0;  // TU
    std::uint16_t flags = 0;
    std::uint16_t aw_ext_length = 0;        // TU
    std::uint16_t aw_common_length = 0;     // TU
    std::uint16_t remaining_aw_length = 0;  // TU
    std::array<std::uint8_t, 4> ext_counts{};  // min, max-multicast, max-unicast, max-af
    MacAddress master_address;
    std::uint8_t presence_mode = 0;  // carried opaquely
    std::uint8_t reserved = 0;
    std::uint16_t aw_seq_number = 0;
    std::uint16_t ap_alignment_delta = 0;  // carried opaquely
    ChannelSequence channel_sequence;

    bool operator==(const SyncParams&) const = default;
};

struct ElectionParams {
    MacAddress master_address;
    MacAddress sync_address;
    std::uint32_t master_counter = 0;
    std::uint32_t distance_to_master = 0;
    std::uint32_t master_metric = 0;
    std::uint32_t self_metric = 0;
    std::uint32_t self_counter = 0;

    bool operator==(const ElectionParams&) const = default;
};

struct DataHeader {
    // magic bytes 0x03 0x04 are implicit on the wire
    std::uint16_t sequence = 0;   // little-endian
    std::uint16_t pad = 0;        // zero on emit, tolerated nonzero on parse
    std::uint16_t ethertype = 0;  // big-endian on the wire

    bool operator==(const DataHeader&) const = default;
};

struct ParsedDataFrame {
    MacAddress src;
    MacAddress dst;
    DataHeader hdr;
    Bytes payload;
    Ieee80211Header full_hdr;  // for byte-exact reserialization

    bool operator==(const ParsedDataFrame&) const = default;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Pure BSSID/structure filter; any malformed input classifies as Other.
FrameClass classify_frame(ByteSpan raw);

Result<ActionFrame> parse_action_frame(ByteSpan raw);
Result<Bytes> serialize_action_frame(const ActionFrame& f);

Result<SyncParams> decode_sync_params(const Tlv& t);
Tlv encode_sync_params(const SyncParams& s);

Result<ElectionParams> decode_election_params(const Tlv& t);
Tlv encode_election_params(const ElectionParams& e);

Result<ChannelSequence> decode_channel_sequence(ByteSpan raw);
Bytes encode_channel_sequence(const ChannelSequence& c);

/// Pads to 16 entries with the last supplied entry.
ChannelSequence channel_sequence_from_entries(ByteSpan channels);

Result<ParsedDataFrame> parse_data_frame(ByteSpan raw);
Result<Bytes> build_data_frame(MacAddress src, MacAddress dst, const DataHeader& hdr,
                               ByteSpan payload);

/// Re-emits a parsed data frame with its captured 802.11 header, so any
/// byte string parse_data_frame accepts round-trips exactly.
Result<Bytes> serialize_data_frame(const ParsedDataFrame& f);

}  // namespace awdl
