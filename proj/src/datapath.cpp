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

#include "awdl/datapath.hpp"

namespace awdl {

Bytes EthernetFrame::serialize() const {
    ByteWriter w(14 + payload.size());
    w.bytes(dst.octets.data(), 6);
    w.bytes(src.octets.data(), 6);
    w.u16be(ethertype);
    w.bytes(payload);
    return w.take();
}

Result<EthernetFrame> EthernetFrame::parse(ByteSpan raw) {
    if (raw.size() < 14) return Err::TruncatedFrame;
    EthernetFrame f;
    ByteReader r(raw);
    r.read_bytes(f.dst.octets.data(), 6);
    r.read_bytes(f.src.octets.data(), 6);
    r.read_u16be(f.ethertype);
    ByteSpan rest = r.rest();
    f.payload.assign(rest.begin(), rest.end());
    return f;
}

Result<EthernetFrame> awdl_to_ethernet(ByteSpan raw) {
    auto parsed = parse_data_frame(raw);
    if (!parsed) return parsed.error();
    EthernetFrame f;
    f.dst = parsed.value().dst;
    f.src = parsed.value().src;
    f.ethertype = parsed.value().hdr.ethertype;
    f.payload = std::move(parsed).value().payload;
    return f;
}

Result<AwdlTxFrame> ethernet_to_awdl(const EthernetFrame& f, const DatapathState& st) {
    DataHeader hdr;
    hdr.sequence = st.seq_counter;
    hdr.pad = 0;
    hdr.ethertype = f.ethertype;
    auto raw = build_data_frame(f.src, f.dst, hdr, ByteSpan(f.payload));
    if (!raw) return raw.error();
    AwdlTxFrame out;
    out.raw = std::move(raw).value();
    out.state = st;
    out.state.seq_counter = static_cast<std::uint16_t>(st.seq_counter + 1);
    out.state.tx_frames = st.tx_frames + 1;
    return out;
}

}  // namespace awdl
