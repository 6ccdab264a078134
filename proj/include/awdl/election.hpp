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

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "awdl/mac.hpp"
#include "awdl/wire.hpp"

namespace awdl {

/// Advertisements at this distance are never adopted; adopted distance is
/// therefore bounded by it.
inline constexpr std::uint32_t kMaxElectionDistance = 10;

/// Peers silent longer than this neither vote nor are adopted.
inline constexpr std::uint64_t kElectionFreshMicros = 2'000'000;

/// Election precedence: counter dominates metric dominates address, larger
/// wins. The address component makes the order total.
struct CandidateKey {
    std::uint32_t counter = 0;
    std::uint32_t metric = 0;
    MacAddress addr;

    auto operator<=>(const CandidateKey&) const = default;
};

struct ElectionState {
    MacAddress self_addr;
    std::uint32_t self_metric = 1;
    std::uint32_t self_counter = 0;
    MacAddress top_master;
    std::uint32_t master_metric = 1;
    std::uint32_t master_counter = 0;
    std::uint32_t distance = 0;  // hops to top_master
    MacAddress sync_master;

    bool operator==(const ElectionState&) const = default;

    bool is_self_master() const { return top_master == self_addr; }

    static ElectionState self_master(MacAddress addr, std::uint32_t metric,
                                     std::uint32_t counter = 0);
};

/// One neighbor's latest advertisement as fed into an election round.
struct PeerVote {
    MacAddress addr;
    ElectionParams params;
    bool fresh = false;
};

enum class Ordering { Less, Equal, Greater };

Ordering compare_candidates(const CandidateKey& a, const CandidateKey& b);

/// Deterministic election over self plus fresh peer advertisements. Pure:
/// identical inputs give identical outputs. The self counter increments
/// exactly on a non-master to master transition.
ElectionState run_election(const ElectionState& state, std::span<const PeerVote> peers);

Tlv build_election_tlv(const ElectionState& state);

}  // namespace awdl
