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

#include "awdl/wire.hpp"

#include <cstdio>

namespace awdl {

namespace {

constexpr std::uint8_t kFcAction = 0xd0;  // version 0, type 0 (mgmt), subtype 13
constexpr std::uint8_t kFcData = 0x08;    // version 0, type 2 (data), subtype 0

constexpr std::array<std::uint8_t, 8> kSnapHeader = {0xaa, 0xaa, 0x03, 0x00,
                                                     0x17, 0xf2, 0x08, 0x00};
constexpr std::uint8_t kDataMagic0 = 0x03;
constexpr std::uint8_t kDataMagic1 = 0x04;

bool read_mac(ByteReader& r, MacAddress& out) { return r.read_bytes(out.octets.data(), 6); }

void write_80211_header(ByteWriter& w, const Ieee80211Header& h) {
    w.u8(h.frame_control[0]);
    w.u8(h.frame_control[1]);
    w.u16le(h.duration);
    w.bytes(h.addr1.octets.data(), 6);
    w.bytes(h.addr2.octets.data(), 6);
    w.bytes(h.addr3.octets.data(), 6);
    w.u16le(h.seq_ctrl);
}

bool read_80211_header(ByteReader& r, Ieee80211Header& h) {
    return r.read_u8(h.frame_control[0]) && r.read_u8(h.frame_control[1]) &&
           r.read_u16le(h.duration) && read_mac(r, h.addr1) && read_mac(r, h.addr2) &&
           read_mac(r, h.addr3) && r.read_u16le(h.seq_ctrl);
}

bool has_awdl_action_body(ByteSpan body) {
    return body.size() >= 5 && body[0] == kVendorActionCategory && body[1] == kAwdlOui[0] &&
           body[2] == kAwdlOui[1] && body[3] == kAwdlOui[2] && body[4] == kAwdlActionType;
}

bool has_awdl_snap(ByteSpan body) {
    if (body.size() < kSnapHeader.size()) return false;
    for (std::size_t i = 0; i < kSnapHeader.size(); ++i)
        if (body[i] != kSnapHeader[i]) return false;
    return true;
}

}  // namespace

const char* to_string(Err kind) {
    switch (kind) {
        case Err::TruncatedFrame: return "TruncatedFrame";
        case Err::TruncatedTlv: return "TruncatedTlv";
        case Err::TruncatedValue: return "TruncatedValue";
        case Err::WrongTlvType: return "WrongTlvType";
        case Err::InvariantViolation: return "InvariantViolation";
        case Err::OversizeFrame: return "OversizeFrame";
        case Err::BadMagic: return "BadMagic";
        case Err::BadEncodingId: return "BadEncodingId";
        case Err::UnsupportedLinktype: return "UnsupportedLinktype";
        case Err::TruncatedRecord: return "TruncatedRecord";
        case Err::UnknownNode: return "UnknownNode";
        case Err::PortClosed: return "PortClosed";
        case Err::InvalidScenario: return "InvalidScenario";
        case Err::InsufficientData: return "InsufficientData";
    }
    return "Unknown";
}

const char* to_string(FrameClass c) {
    switch (c) {
        case FrameClass::AwdlAction: return "awdl_action";
        case FrameClass::AwdlData: return "awdl_data";
        case FrameClass::Other: return "other";
    }
    return "other";
}

std::string MacAddress::str() const {
    char buf[18];
    std::snprintf(buf, sizeof(buf), "%02x:%02x:%02x:%02x:%02x:%02x", octets[0], octets[1],
                  octets[2], octets[3], octets[4], octets[5]);
    return buf;
}

std::optional<MacAddress> MacAddress::parse(const std::string& text) {
    MacAddress m;
    unsigned v[6];
    if (std::sscanf(text.c_str(), "%2x:%2x:%2x:%2x:%2x:%2x", &v[0], &v[1], &v[2], &v[3], &v[4],
                    &v[5]) != 6 &&
        std::sscanf(text.c_str(), "%2x-%2x-%2x-%2x-%2x-%2x", &v[0], &v[1], &v[2], &v[3], &v[4],
                    &v[5]) != 6) {
        return std::nullopt;
    }
    for (int i = 0; i < 6; ++i) m.octets[i] = static_cast<std::uint8_t>(v[i]);
    return m;
}

Ieee80211Header Ieee80211Header::action(MacAddress dst, MacAddress src) {
    Ieee80211Header h;
    h.frame_control = {kFcAction, 0x00};
    h.addr1 = dst;
    h.addr2 = src;
    h.addr3 = kAwdlBssid;
    return h;
}

Ieee80211Header Ieee80211Header::data(MacAddress dst, MacAddress src) {
    Ieee80211Header h;
    h.frame_control = {kFcData, 0x00};
    h.addr1 = dst;
    h.addr2 = src;
    h.addr3 = kAwdlBssid;
    return h;
}

ChannelSequence ChannelSequence::uniform(std::uint8_t channel) {
    ChannelSequence c;
    for (auto& e : c.entries) e.channel = channel;
    return c;
}

FrameClass classify_frame(ByteSpan raw) {
    if (raw.size() < kIeee80211HeaderLen) return FrameClass::Other;
    ByteReader r(raw);
    Ieee80211Header h;
    if (!read_80211_header(r, h)) return FrameClass::Other;
    if (h.addr3 != kAwdlBssid) return FrameClass::Other;
    if (h.frame_control[0] == kFcAction && has_awdl_action_body(r.rest()))
        return FrameClass::AwdlAction;
    if (h.frame_control[0] == kFcData && has_awdl_snap(r.rest())) return FrameClass::AwdlData;
    return FrameClass::Other;
}

Result<ActionFrame> parse_action_frame(ByteSpan raw) {
    ByteReader r(raw);
    ActionFrame f;
    if (!read_80211_header(r, f.hdr)) return Err::TruncatedFrame;
    if (f.hdr.addr3 != kAwdlBssid || f.hdr.frame_control[0] != kFcAction ||
        !has_awdl_action_body(r.rest())) {
        return Error(Err::InvariantViolation, "not an awdl action frame");
    }
    if (r.remaining() < kActionFixedHeaderLen) return Err::TruncatedFrame;
    r.skip(5);  // category + OUI + type, checked above
    r.read_u8(f.version);
    r.read_u8(f.subtype);
    r.read_u8(f.reserved);
    r.read_u32le(f.phy_tx_time);
    r.read_u32le(f.target_tx_time);
    while (r.remaining() > 0) {
        Tlv t;
        std::uint16_t len = 0;
        if (!r.read_u8(t.tlv_type) || !r.read_u16le(len)) return Err::TruncatedTlv;
        ByteSpan value;
        if (!r.take(len, value)) return Err::TruncatedTlv;
        t.value.assign(value.begin(), value.end());
        f.tlvs.push_back(std::move(t));
    }
    return f;
}

Result<Bytes> serialize_action_frame(const ActionFrame& f) {
    ByteWriter w(kIeee80211HeaderLen + kActionFixedHeaderLen + 64);
    write_80211_header(w, f.hdr);
    w.u8(kVendorActionCategory);
    w.bytes(kAwdlOui.data(), kAwdlOui.size());
    w.u8(kAwdlActionType);
    w.u8(f.version);
    w.u8(f.subtype);
    w.u8(f.reserved);
    w.u32le(f.phy_tx_time);
    w.u32le(f.target_tx_time);
    for (const auto& t : f.tlvs) {
        if (t.value.size() > 0xffff) return Err::OversizeFrame;
        w.u8(t.tlv_type);
        w.u16le(static_cast<std::uint16_t>(t.value.size()));
        w.bytes(t.value);
    }
    if (w.size() - kIeee80211HeaderLen > kMaxBodyLen) return Err::OversizeFrame;
    return w.take();
}

Result<ChannelSequence> decode_channel_sequence(ByteSpan raw) {
    ByteReader r(raw);
    ChannelSequence c;
    std::uint8_t count = 0, encoding = 0, step = 0;
    if (!r.read_u8(count) || !r.read_u8(encoding) || !r.read_u8(c.duplicate) || !r.read_u8(step) ||
        !r.read_u16le(c.fill_channel)) {
        return Err::TruncatedValue;
    }
    if (encoding > 1) return Err::BadEncodingId;
    if (count != 15) return Error(Err::InvariantViolation, "channel sequence count != 15");
    c.encoding = encoding;
    c.step_count = static_cast<std::uint8_t>(step + 1);
    for (auto& e : c.entries) {
        if (encoding == 0) {
            if (!r.read_u8(e.channel)) return Err::TruncatedValue;
            e.flags = 0;
        } else {
            if (!r.read_u8(e.flags) || !r.read_u8(e.channel)) return Err::TruncatedValue;
        }
    }
    return c;
}

Bytes encode_channel_sequence(const ChannelSequence& c) {
    ByteWriter w(6 + (c.encoding == 0 ? 16 : 32));
    w.u8(15);  // entries - 1
    w.u8(c.encoding);
    w.u8(c.duplicate);
    w.u8(static_cast<std::uint8_t>(c.step_count - 1));
    w.u16le(c.fill_channel);
    for (const auto& e : c.entries) {
        if (c.encoding == 1) w.u8(e.flags);
        w.u8(e.channel);
    }
    return w.take();
}

ChannelSequence channel_sequence_from_entries(ByteSpan channels) {
    ChannelSequence c;
    std::uint8_t last = 0;
    for (std::size_t i = 0; i < c.entries.size(); ++i) {
        if (i < channels.size()) last = channels[i];
        c.entries[i].channel = last;
    }
    return c;
}

Result<SyncParams> decode_sync_params(const Tlv& t) {
    if (t.tlv_type != static_cast<std::uint8_t>(TlvType::SyncParams)) return Err::WrongTlvType;
    ByteReader r(ByteSpan(t.value));
    SyncParams s;
    bool ok = r.read_u8(s.next_aw_channel) && r.read_u16le(s.tx_counter) &&
              r.read_u8(s.master_channel) && r.read_u8(s.guard_time) && r.read_u16le(s.aw_period) &&
              r.read_u16le(s.af_period) && r.read_u16le(s.flags) && r.read_u16le(s.aw_ext_length) &&
              r.read_u16le(s.aw_common_length) && r.read_u16le(s.remaining_aw_length) &&
              r.read_bytes(s.ext_counts.data(), 4) && read_mac(r, s.master_address) &&
              r.read_u8(s.presence_mode) && r.read_u8(s.reserved) && r.read_u16le(s.aw_seq_number) &&
              r.read_u16le(s.ap_alignment_delta);
    if (!ok) return Err::TruncatedValue;
    if (s.remaining_aw_length > s.aw_common_length)
        return Error(Err::InvariantViolation, "remaining AW length exceeds common length");
    auto seq = decode_channel_sequence(r.rest());
    if (!seq) return seq.error();
    s.channel_sequence = seq.value();
    return s;
}

Tlv encode_sync_params(const SyncParams& s) {
    ByteWriter w(33 + 38);
    w.u8(s.next_aw_channel);
    w.u16le(s.tx_counter);
    w.u8(s.master_channel);
    w.u8(s.guard_time);
    w.u16le(s.aw_period);
    w.u16le(s.af_period);
    w.u16le(s.flags);
    w.u16le(s.aw_ext_length);
    w.u16le(s.aw_common_length);
    w.u16le(s.remaining_aw_length);
    w.bytes(s.ext_counts.data(), 4);
    w.bytes(s.master_address.octets.data(), 6);
    w.u8(s.presence_mode);
    w.u8(s.reserved);
    w.u16le(s.aw_seq_number);
    w.u16le(s.ap_alignment_delta);
    w.bytes(encode_channel_sequence(s.channel_sequence));
    return Tlv{static_cast<std::uint8_t>(TlvType::SyncParams), w.take()};
}

Result<ElectionParams> decode_election_params(const Tlv& t) {
    if (t.tlv_type != static_cast<std::uint8_t>(TlvType::ElectionParams)) return Err::WrongTlvType;
    ByteReader r(ByteSpan(t.value));
    ElectionParams e;
    bool ok = read_mac(r, e.master_address) && read_mac(r, e.sync_address) &&
              r.read_u32le(e.master_counter) && r.read_u32le(e.distance_to_master) &&
              r.read_u32le(e.master_metric) && r.read_u32le(e.self_metric) &&
              r.read_u32le(e.self_counter);
    if (!ok) return Err::TruncatedValue;
    return e;
}

Tlv encode_election_params(const ElectionParams& e) {
    ByteWriter w(32);
    w.bytes(e.master_address.octets.data(), 6);
    w.bytes(e.sync_address.octets.data(), 6);
    w.u32le(e.master_counter);
    w.u32le(e.distance_to_master);
    w.u32le(e.master_metric);
    w.u32le(e.self_metric);
    w.u32le(e.self_counter);
    return Tlv{static_cast<std::uint8_t>(TlvType::ElectionParams), w.take()};
}

Result<ParsedDataFrame> parse_data_frame(ByteSpan raw) {
    ByteReader r(raw);
    ParsedDataFrame f;
    if (!read_80211_header(r, f.full_hdr)) return Err::TruncatedFrame;
    if (f.full_hdr.addr3 != kAwdlBssid || f.full_hdr.frame_control[0] != kFcData ||
        !has_awdl_snap(r.rest())) {
        return Error(Err::InvariantViolation, "not an awdl data frame");
    }
    r.skip(kSnapHeaderLen);
    std::uint8_t m0 = 0, m1 = 0;
    if (!r.read_u8(m0) || !r.read_u8(m1)) return Err::TruncatedFrame;
    if (m0 != kDataMagic0 || m1 != kDataMagic1) return Err::BadMagic;
    if (!r.read_u16le(f.hdr.sequence) || !r.read_u16le(f.hdr.pad) || !r.read_u16be(f.hdr.ethertype))
        return Err::TruncatedFrame;
    f.dst = f.full_hdr.addr1;
    f.src = f.full_hdr.addr2;
    ByteSpan rest = r.rest();
    f.payload.assign(rest.begin(), rest.end());
    return f;
}

namespace {

Result<Bytes> emit_data_frame(const Ieee80211Header& hdr, const DataHeader& dh, ByteSpan payload) {
    if (payload.size() > kMaxDataPayload) return Err::OversizeFrame;
    ByteWriter w(kIeee80211HeaderLen + kSnapHeaderLen + kDataHeaderLen + payload.size());
    write_80211_header(w, hdr);
    w.bytes(kSnapHeader.data(), kSnapHeader.size());
    w.u8(kDataMagic0);
    w.u8(kDataMagic1);
    w.u16le(dh.sequence);
    w.u16le(dh.pad);
    w.u16be(dh.ethertype);
    w.bytes(payload);
    return w.take();
}

}  // namespace

Result<Bytes> build_data_frame(MacAddress src, MacAddress dst, const DataHeader& hdr,
                               ByteSpan payload) {
    return emit_data_frame(Ieee80211Header::data(dst, src), hdr, payload);
}

Result<Bytes> serialize_data_frame(const ParsedDataFrame& f) {
    return emit_data_frame(f.full_hdr, f.hdr, ByteSpan(f.payload));
}

}  // namespace awdl
