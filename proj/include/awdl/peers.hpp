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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "awdl/mac.hpp"
#include "awdl/time_units.hpp"
#include "awdl/wire.hpp"

namespace awdl {

struct Ipv6Address {
    std::array<std::uint8_t, 16> bytes{};

    auto operator<=>(const Ipv6Address&) const = default;

    std::string str() const;
};

/// Link-local address via the RFC 4291 modified EUI-64 procedure: flip the
/// universal/local bit of octet 0 and splice 0xfffe into the middle.
Ipv6Address ipv6_from_mac(const MacAddress& m);

struct Peer {
    MacAddress addr;
    Ipv6Address ipv6_ll;
    TimeMicros last_seen = 0;
    std::optional<ElectionParams> election;
    std::optional<SyncParams> sync;
    std::optional<std::string> hostname;
};

struct UpsertOutcome {
    bool is_new = false;
    std::uint32_t tlv_decode_errors = 0;
};

/// Neighbors discovered through action frames. Single writer; readers take
/// value snapshots.
class PeerTable {
  public:
    explicit PeerTable(std::uint64_t timeout_micros = 3'000'000) : timeout_(timeout_micros) {}

    /// Records the frame's sender. Decodable sync/election/hostname TLVs
    /// replace the stored ones; undecodable TLVs are counted and the rest
    /// of the update still happens.
    UpsertOutcome upsert(const ActionFrame& frame, TimeMicros now);

    /// Removes every peer silent for longer than the timeout (strict) and
    /// returns their addresses in table order.
    std::vector<MacAddress> expire(TimeMicros now);

    const Peer* find(const MacAddress& addr) const;
    std::size_t size() const { return peers_.size(); }
    bool empty() const { return peers_.empty(); }
    std::uint64_t timeout_micros() const { return timeout_; }

    const std::map<MacAddress, Peer>& peers() const { return peers_; }

  private:
    std::map<MacAddress, Peer> peers_;
    std::uint64_t timeout_;
};

}  // namespace awdl
