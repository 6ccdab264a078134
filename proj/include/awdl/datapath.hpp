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

#include "awdl/error.hpp"
#include "awdl/mac.hpp"
#include "awdl/wire.hpp"

namespace awdl {

inline constexpr std::uint16_t kEthertypeIpv6 = 0x86dd;

struct EthernetFrame {
    MacAddress dst;
    MacAddress src;
    std::uint16_t ethertype = 0;
    Bytes payload;

    bool operator==(const EthernetFrame&) const = default;

    Bytes serialize() const;
    static Result<EthernetFrame> parse(ByteSpan raw);
};

struct DatapathState {
    std::uint16_t seq_counter = 0;  // next outbound AWDL sequence number
    std::uint64_t tx_frames = 0;
    std::uint64_t rx_frames = 0;

    bool operator==(const DatapathState&) const = default;
};

/// Strips the AWDL data header off a received frame and rebuilds the
/// Ethernet view; payload passes through bit-exact.
Result<EthernetFrame> awdl_to_ethernet(ByteSpan raw);

struct AwdlTxFrame {
    Bytes raw;
    DatapathState state;
};

/// Wraps a host Ethernet frame into an AWDL data frame, stamping and then
/// advancing the outbound sequence counter.
Result<AwdlTxFrame> ethernet_to_awdl(const EthernetFrame& f, const DatapathState& st);

}  // namespace awdl
