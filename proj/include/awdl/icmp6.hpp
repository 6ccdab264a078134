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
#include <optional>

#include "awdl/datapath.hpp"
#include "awdl/peers.hpp"

namespace awdl {

inline constexpr std::uint8_t kIpProtoIcmpv6 = 58;
inline constexpr std::uint8_t kIcmpv6EchoRequest = 128;
inline constexpr std::uint8_t kIcmpv6EchoReply = 129;

/// Internet checksum over the IPv6 pseudo-header (src, dst, upper-layer
/// length, next-header 58) plus the ICMPv6 message with its checksum field
/// zeroed.
std::uint16_t icmpv6_checksum(const Ipv6Address& src, const Ipv6Address& dst,
                              ByteSpan icmp_message);

struct EchoMessage {
    Ipv6Address src_ip;
    Ipv6Address dst_ip;
    std::uint8_t type = 0;  // 128 request, 129 reply
    std::uint16_t id = 0;
    std::uint16_t seq = 0;
    Bytes payload;
    bool checksum_ok = false;
};

/// Ethernet frame carrying an ICMPv6 echo request between two nodes'
/// derived link-local addresses; hop limit 255, checksum valid.
EthernetFrame build_echo_request(const MacAddress& src, const MacAddress& dst, std::uint16_t id,
                                 std::uint16_t seq, ByteSpan payload);

/// Parses an IPv6/ICMPv6 echo out of an Ethernet frame; nullopt for
/// anything that is not a well-formed echo request or reply.
std::optional<EchoMessage> parse_echo(const EthernetFrame& f);

/// Reply a responder at `self` would send for the given frame: addressed
/// echoes come back with type 129 and id/seq/payload preserved; everything
/// else is ignored.
std::optional<EthernetFrame> echo_responder(const MacAddress& self, const EthernetFrame& f);

}  // namespace awdl
