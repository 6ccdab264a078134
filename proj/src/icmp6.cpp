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

#include "awdl/icmp6.hpp"

namespace awdl {

namespace {

constexpr std::size_t kIpv6HeaderLen = 40;

std::uint32_t sum_words(ByteSpan data) {
    std::uint32_t sum = 0;
    std::size_t i = 0;
    for (; i + 1 < data.size(); i += 2) sum += static_cast<std::uint32_t>(data[i] << 8) | data[i + 1];
    if (i < data.size()) sum += static_cast<std::uint32_t>(data[i] << 8);
    return sum;
}

std::uint16_t fold(std::uint32_t sum) {
    while (sum >> 16) sum = (sum & 0xffff) + (sum >> 16);
    return static_cast<std::uint16_t>(sum);
}

void write_ipv6_header(ByteWriter& w, const Ipv6Address& src, const Ipv6Address& dst,
                       std::uint16_t payload_len) {
    w.u8(0x60);  // version 6
    w.u8(0);
    w.u16be(0);  // flow label
    w.u16be(payload_len);
    w.u8(kIpProtoIcmpv6);
    w.u8(255);  // hop limit
    w.bytes(src.bytes.data(), 16);
    w.bytes(dst.bytes.data(), 16);
}

}  // namespace

std::uint16_t icmpv6_checksum(const Ipv6Address& src, const Ipv6Address& dst,
                              ByteSpan icmp_message) {
    std::uint32_t sum = 0;
    sum += sum_words(ByteSpan(src.bytes.data(), 16));
    sum += sum_words(ByteSpan(dst.bytes.data(), 16));
    const std::uint32_t len = static_cast<std::uint32_t>(icmp_message.size());
    sum += (len >> 16) + (len & 0xffff);
    sum += kIpProtoIcmpv6;
    sum += sum_words(icmp_message);
    return static_cast<std::uint16_t>(~fold(sum));
}

EthernetFrame build_echo_request(const MacAddress& src, const MacAddress& dst, std::uint16_t id,
                                 std::uint16_t seq, ByteSpan payload) {
    const Ipv6Address src_ip = ipv6_from_mac(src);
    const Ipv6Address dst_ip = ipv6_from_mac(dst);

    ByteWriter icmp(8 + payload.size());
    icmp.u8(kIcmpv6EchoRequest);
    icmp.u8(0);
    icmp.u16be(0);  // checksum placeholder
    icmp.u16be(id);
    icmp.u16be(seq);
    icmp.bytes(payload);
    Bytes msg = icmp.take();
    const std::uint16_t csum = icmpv6_checksum(src_ip, dst_ip, ByteSpan(msg));
    msg[2] = static_cast<std::uint8_t>(csum >> 8);
    msg[3] = static_cast<std::uint8_t>(csum & 0xff);

    ByteWriter pkt(kIpv6HeaderLen + msg.size());
    write_ipv6_header(pkt, src_ip, dst_ip, static_cast<std::uint16_t>(msg.size()));
    pkt.bytes(msg);

    EthernetFrame f;
    f.dst = dst;
    f.src = src;
    f.ethertype = kEthertypeIpv6;
    f.payload = pkt.take();
    return f;
}

std::optional<EchoMessage> parse_echo(const EthernetFrame& f) {
    if (f.ethertype != kEthertypeIpv6) return std::nullopt;
    const ByteSpan p(f.payload);
    if (p.size() < kIpv6HeaderLen + 8) return std::nullopt;
    if ((p[0] >> 4) != 6) return std::nullopt;
    if (p[6] != kIpProtoIcmpv6) return std::nullopt;
    const std::uint16_t payload_len = static_cast<std::uint16_t>((p[4] << 8) | p[5]);
    if (payload_len < 8 || kIpv6HeaderLen + payload_len > p.size()) return std::nullopt;

    EchoMessage m;
    for (int i = 0; i < 16; ++i) {
        m.src_ip.bytes[i] = p[8 + i];
        m.dst_ip.bytes[i] = p[24 + i];
    }
    const ByteSpan msg = p.subspan(kIpv6HeaderLen, payload_len);
    m.type = msg[0];
    if (m.type != kIcmpv6EchoRequest && m.type != kIcmpv6EchoReply) return std::nullopt;
    if (msg[1] != 0) return std::nullopt;  // code
    m.id = static_cast<std::uint16_t>((msg[4] << 8) | msg[5]);
    m.seq = static_cast<std::uint16_t>((msg[6] << 8) | msg[7]);
    m.payload.assign(msg.begin() + 8, msg.end());
    // Re-summing with the checksum in place yields 0xffff for a valid message.
    std::uint32_t sum = 0;
    sum += sum_words(ByteSpan(m.src_ip.bytes.data(), 16));
    sum += sum_words(ByteSpan(m.dst_ip.bytes.data(), 16));
    sum += payload_len;
    sum += kIpProtoIcmpv6;
    sum += sum_words(msg);
    std::uint32_t folded = sum;
    while (folded >> 16) folded = (folded & 0xffff) + (folded >> 16);
    m.checksum_ok = folded == 0xffff;
    return m;
}

std::optional<EthernetFrame> echo_responder(const MacAddress& self, const EthernetFrame& f) {
    auto m = parse_echo(f);
    if (!m || m->type != kIcmpv6EchoRequest || !m->checksum_ok) return std::nullopt;
    if (m->dst_ip != ipv6_from_mac(self)) return std::nullopt;

    ByteWriter icmp(8 + m->payload.size());
    icmp.u8(kIcmpv6EchoReply);
    icmp.u8(0);
    icmp.u16be(0);
    icmp.u16be(m->id);
    icmp.u16be(m->seq);
    icmp.bytes(m->payload);
    Bytes msg = icmp.take();
    const std::uint16_t csum = icmpv6_checksum(m->dst_ip, m->src_ip, ByteSpan(msg));
    msg[2] = static_cast<std::uint8_t>(csum >> 8);
    msg[3] = static_cast<std::uint8_t>(csum & 0xff);

    ByteWriter pkt(kIpv6HeaderLen + msg.size());
    write_ipv6_header(pkt, m->dst_ip, m->src_ip, static_cast<std::uint16_t>(msg.size()));
    pkt.bytes(msg);

    EthernetFrame reply;
    reply.dst = f.src;
    reply.src = self;
    reply.ethertype = kEthertypeIpv6;
    reply.payload = pkt.take();
    return reply;
}

}  // namespace awdl
