#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "awdl/wire.hpp"

// Shared generators for randomized codec tests. Everything draws from an
// explicitly seeded engine so failures replay.
namespace testgen {

inline awdl::MacAddress random_mac(std::mt19937_64& rng) {
    awdl::MacAddress m;
    for (auto& o : m.octets) o = static_cast<std::uint8_t>(rng());
    return m;
}

inline awdl::Bytes random_bytes(std::mt19937_64& rng, std::size_t len) {
    awdl::Bytes b(len);
    for (auto& v : b) v = static_cast<std::uint8_t>(rng());
    return b;
}

inline awdl::ChannelSequence random_channel_sequence(std::mt19937_64& rng) {
    awdl::ChannelSequence c;
    c.encoding = static_cast<std::uint8_t>(rng() % 2);
    c.step_count = 4;
    for (auto& e : c.entries) {
        e.channel = static_cast<std::uint8_t>(1 + rng() % 14);
        e.flags = c.encoding == 1 ? static_cast<std::uint8_t>(rng()) : 0;
    }
    return c;
}

inline awdl::SyncParams random_sync_params(std::mt19937_64& rng) {
    awdl::SyncParams s;
    s.next_aw_channel = static_cast<std::uint8_t>(rng());
    s.tx_counter = static_cast<std::uint16_t>(rng());
    s.master_channel = static_cast<std::uint8_t>(rng());
    s.guard_time = static_cast<std::uint8_t>(rng());
    s.aw_period = static_cast<std::uint16_t>(1 + rng() % 1000);
    s.af_period = static_cast<std::uint16_t>(1 + rng() % 1000);
    s.flags = static_cast<std::uint16_t>(rng());
    s.aw_ext_length = static_cast<std::uint16_t>(rng());
    s.aw_common_length = static_cast<std::uint16_t>(rng() % 64 + 1);
    s.remaining_aw_length = static_cast<std::uint16_t>(rng() % (s.aw_common_length + 1));
    for (auto& e : s.ext_counts) e = static_cast<std::uint8_t>(rng());
    s.master_address = random_mac(rng);
    s.presence_mode = static_cast<std::uint8_t>(rng());
    s.reserved = static_cast<std::uint8_t>(rng());
    s.aw_seq_number = static_cast<std::uint16_t>(rng());
    s.ap_alignment_delta = static_cast<std::uint16_t>(rng());
    s.channel_sequence = random_channel_sequence(rng);
    return s;
}

inline awdl::ElectionParams random_election_params(std::mt19937_64& rng) {
    awdl::ElectionParams e;
    e.master_address = random_mac(rng);
    e.sync_address = random_mac(rng);
    e.master_counter = static_cast<std::uint32_t>(rng());
    e.distance_to_master = static_cast<std::uint32_t>(rng() % 12);
    e.master_metric = static_cast<std::uint32_t>(rng());
    e.self_metric = static_cast<std::uint32_t>(rng());
    e.self_counter = static_cast<std::uint32_t>(rng());
    return e;
}

/// Random action frame mixing known and unknown TLV types.
inline awdl::ActionFrame random_action_frame(std::mt19937_64& rng) {
    awdl::ActionFrame f;
    f.hdr = awdl::Ieee80211Header::action(random_mac(rng), random_mac(rng));
    f.hdr.duration = static_cast<std::uint16_t>(rng());
    f.hdr.seq_ctrl = static_cast<std::uint16_t>(rng());
    f.hdr.frame_control[1] = static_cast<std::uint8_t>(rng() % 4);  // odd flag bits
    f.subtype = rng() % 2 ? awdl::kSubtypeMif : awdl::kSubtypePsf;
    f.version = static_cast<std::uint8_t>(rng());
    f.reserved = static_cast<std::uint8_t>(rng());
    f.phy_tx_time = static_cast<std::uint32_t>(rng());
    f.target_tx_time = static_cast<std::uint32_t>(rng());

    const std::size_t n = rng() % 5;
    for (std::size_t i = 0; i < n; ++i) {
        switch (rng() % 4) {
            case 0:
                f.tlvs.push_back(awdl::encode_sync_params(random_sync_params(rng)));
                break;
            case 1:
                f.tlvs.push_back(awdl::encode_election_params(random_election_params(rng)));
                break;
            case 2: {
                awdl::Tlv t;
                t.tlv_type = static_cast<std::uint8_t>(awdl::TlvType::Hostname);
                t.value = random_bytes(rng, rng() % 32);
                f.tlvs.push_back(std::move(t));
                break;
            }
            default: {
                awdl::Tlv t;
                t.tlv_type = static_cast<std::uint8_t>(0x40 + rng() % 0x40);  // unknown types
                t.value = random_bytes(rng, rng() % 64);
                f.tlvs.push_back(std::move(t));
                break;
            }
        }
    }
    return f;
}

}  // namespace testgen
