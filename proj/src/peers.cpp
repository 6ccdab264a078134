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

#include "awdl/peers.hpp"

#include <cstdio>

namespace awdl {

std::string Ipv6Address::str() const {
    // Grouped hex form, zero-compressed on the longest run, per usual
    // presentation rules.
    std::array<std::uint16_t, 8> groups;
    for (int i = 0; i < 8; ++i)
        groups[i] = static_cast<std::uint16_t>((bytes[2 * i] << 8) | bytes[2 * i + 1]);

    int best_start = -1, best_len = 0;
    for (int i = 0; i < 8;) {
        if (groups[i] != 0) {
            ++i;
            continue;
        }
        int j = i;
        while (j < 8 && groups[j] == 0) ++j;
        if (j - i > best_len) {
            best_len = j - i;
            best_start = i;
        }
        i = j;
    }
    if (best_len < 2) best_start = -1;

    std::string out;
    char buf[8];
    for (int i = 0; i < 8;) {
        if (i == best_start) {
            out += i == 0 ? "::" : ":";
            i += best_len;
            if (i == 8) break;
            continue;
        }
        std::snprintf(buf, sizeof(buf), "%x", groups[i]);
        out += buf;
        if (++i < 8) out += ":";
    }
    return out;
}

Ipv6Address ipv6_from_mac(const MacAddress& m) {
    Ipv6Address a;
    a.bytes[0] = 0xfe;
    a.bytes[1] = 0x80;
    a.bytes[8] = static_cast<std::uint8_t>(m.octets[0] ^ 0x02);
    a.bytes[9] = m.octets[1];
    a.bytes[10] = m.octets[2];
    a.bytes[11] = 0xff;
    a.bytes[12] = 0xfe;
    a.bytes[13] = m.octets[3];
    a.bytes[14] = m.octets[4];
    a.bytes[15] = m.octets[5];
    return a;
}

UpsertOutcome PeerTable::upsert(const ActionFrame& frame, TimeMicros now) {
    UpsertOutcome out;
    const MacAddress addr = frame.hdr.addr2;
    auto [it, inserted] = peers_.try_emplace(addr);
    Peer& p = it->second;
    if (inserted) {
        p.addr = addr;
        p.ipv6_ll = ipv6_from_mac(addr);
        out.is_new = true;
    }
    if (time_delta(now, p.last_seen) > 0 || inserted) p.last_seen = now;

    for (const auto& t : frame.tlvs) {
        switch (static_cast<TlvType>(t.tlv_type)) {
            case TlvType::SyncParams: {
                auto sp = decode_sync_params(t);
                if (sp)
                    p.sync = std::move(sp).value();
                else
                    ++out.tlv_decode_errors;
                break;
            }
            case TlvType::ElectionParams: {
                auto ep = decode_election_params(t);
                if (ep)
                    p.election = ep.value();
                else
                    ++out.tlv_decode_errors;
                break;
            }
            case TlvType::Hostname:
                p.hostname = std::string(t.value.begin(), t.value.end());
                break;
            default:
                break;  // opaque to the peer table
        }
    }
    return out;
}

std::vector<MacAddress> PeerTable::expire(TimeMicros now) {
    std::vector<MacAddress> removed;
    for (auto it = peers_.begin(); it != peers_.end();) {
        if (time_delta(now, it->second.last_seen) > static_cast<std::int64_t>(timeout_)) {
            removed.push_back(it->first);
            it = peers_.erase(it);
        } else {
            ++it;
        }
    }
    return removed;
}

const Peer* PeerTable::find(const MacAddress& addr) const {
    auto it = peers_.find(addr);
    return it == peers_.end() ? nullptr : &it->second;
}

}  // namespace awdl
