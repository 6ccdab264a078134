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

#include "awdl/election.hpp"

namespace awdl {

ElectionState ElectionState::self_master(MacAddress addr, std::uint32_t metric,
                                         std::uint32_t counter) {
    ElectionState s;
    s.self_addr = addr;
    s.self_metric = metric;
    s.self_counter = counter;
    s.top_master = addr;
    s.master_metric = metric;
    s.master_counter = counter;
    s.distance = 0;
    s.sync_master = addr;
    return s;
}

Ordering compare_candidates(const CandidateKey& a, const CandidateKey& b) {
    auto c = a <=> b;
    if (c < 0) return Ordering::Less;
    if (c > 0) return Ordering::Greater;
    return Ordering::Equal;
}

ElectionState run_election(const ElectionState& state, std::span<const PeerVote> peers) {
    const CandidateKey self_key{state.self_counter, state.self_metric, state.self_addr};

    // Best adoptable advertisement. Among peers advertising the winning key,
    // the sync master is the one closest to it, larger peer address on ties.
    bool have_best = false;
    CandidateKey best_key;
    const PeerVote* best_peer = nullptr;

    for (const auto& p : peers) {
        if (!p.fresh) continue;
        if (p.params.distance_to_master >= kMaxElectionDistance) continue;
        CandidateKey key{p.params.master_counter, p.params.master_metric,
                         p.params.master_address};
        if (!have_best || key > best_key) {
            have_best = true;
            best_key = key;
            best_peer = &p;
        } else if (key == best_key) {
            if (p.params.distance_to_master < best_peer->params.distance_to_master ||
                (p.params.distance_to_master == best_peer->params.distance_to_master &&
                 p.addr > best_peer->addr)) {
                best_peer = &p;
            }
        }
    }

    ElectionState next = state;
    // An advertisement equal to the self key names self as master, so the
    // self candidate wins all ties.
    if (have_best && best_key > self_key) {
        next.top_master = best_peer->params.master_address;
        next.master_metric = best_peer->params.master_metric;
        next.master_counter = best_peer->params.master_counter;
        next.distance = best_peer->params.distance_to_master + 1;
        next.sync_master = best_peer->addr;
        return next;
    }

    if (!state.is_self_master()) next.self_counter = state.self_counter + 1;
    next.top_master = next.self_addr;
    next.master_metric = next.self_metric;
    next.master_counter = next.self_counter;
    next.distance = 0;
    next.sync_master = next.self_addr;
    return next;
}

Tlv build_election_tlv(const ElectionState& state) {
    ElectionParams p;
    p.master_address = state.top_master;
    p.sync_address = state.sync_master;
    p.master_counter = state.master_counter;
    p.distance_to_master = state.distance;
    p.master_metric = state.master_metric;
    p.self_metric = state.self_metric;
    p.self_counter = state.self_counter;
    return encode_election_params(p);
}

}  // namespace awdl
