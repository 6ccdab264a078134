#include "doctest.h"

#include <random>
#include <set>

#include "awdl/peers.hpp"
#include "test_helpers.hpp"

using namespace awdl;

namespace {

ActionFrame frame_from(const MacAddress& src, std::vector<Tlv> tlvs = {}) {
    ActionFrame f;
    f.hdr = Ieee80211Header::action(kBroadcastMac, src);
    f.tlvs = std::move(tlvs);
    return f;
}

}  // namespace

TEST_CASE("ipv6_from_mac applies the modified EUI-64 procedure") {
    struct Vector {
        MacAddress mac;
        std::array<std::uint8_t, 8> iid;
    };
    // hand-derived: flip the U/L bit of octet 0, insert ff:fe in the middle
    const std::vector<Vector> vectors = {
        {{0x00, 0x25, 0x00, 0xff, 0x94, 0x73}, {0x02, 0x25, 0x00, 0xff, 0xfe, 0xff, 0x94, 0x73}},
        {{0x02, 0x00, 0x00, 0x00, 0x00, 0x01}, {0x00, 0x00, 0x00, 0xff, 0xfe, 0x00, 0x00, 0x01}},
        {{0xaa, 0xbb, 0xcc, 0xdd, 0xee, 0xff}, {0xa8, 0xbb, 0xcc, 0xff, 0xfe, 0xdd, 0xee, 0xff}},
        {{0x00, 0x00, 0x00, 0x00, 0x00, 0x00}, {0x02, 0x00, 0x00, 0xff, 0xfe, 0x00, 0x00, 0x00}},
        {{0xff, 0xff, 0xff, 0xff, 0xff, 0xff}, {0xfd, 0xff, 0xff, 0xff, 0xfe, 0xff, 0xff, 0xff}},
        {{0x12, 0x34, 0x56, 0x78, 0x9a, 0xbc}, {0x10, 0x34, 0x56, 0xff, 0xfe, 0x78, 0x9a, 0xbc}},
        {{0x01, 0x02, 0x03, 0x04, 0x05, 0x06}, {0x03, 0x02, 0x03, 0xff, 0xfe, 0x04, 0x05, 0x06}},
        {{0x80, 0x00, 0x00, 0x00, 0x00, 0x01}, {0x82, 0x00, 0x00, 0xff, 0xfe, 0x00, 0x00, 0x01}},
        {{0x86, 0xdd, 0x00, 0x12, 0x34, 0x56}, {0x84, 0xdd, 0x00, 0xff, 0xfe, 0x12, 0x34, 0x56}},
        {{0x00, 0x25, 0x00, 0x00, 0x00, 0x01}, {0x02, 0x25, 0x00, 0xff, 0xfe, 0x00, 0x00, 0x01}},
    };
    for (const auto& v : vectors) {
        const Ipv6Address a = ipv6_from_mac(v.mac);
        CHECK(a.bytes[0] == 0xfe);
        CHECK(a.bytes[1] == 0x80);
        for (int i = 2; i < 8; ++i) CHECK(a.bytes[i] == 0);
        for (int i = 0; i < 8; ++i) CHECK(a.bytes[8 + i] == v.iid[i]);
    }
    CHECK(ipv6_from_mac(kAwdlBssid).str() == "fe80::225:ff:feff:9473");
}

TEST_CASE("ipv6_from_mac is injective over random MACs") {
    std::mt19937_64 rng(31);
    std::set<Ipv6Address> seen;
    std::set<MacAddress> macs;
    for (int i = 0; i < 10'000; ++i) {
        const MacAddress m = testgen::random_mac(rng);
        if (!macs.insert(m).second) continue;
        CHECK(seen.insert(ipv6_from_mac(m)).second);
    }
}

TEST_CASE("upsert tracks new and known peers") {
    PeerTable table;
    const MacAddress a{0x02, 0, 0, 0, 0, 0x0a};

    auto r1 = table.upsert(frame_from(a), 1000);
    CHECK(r1.is_new);
    CHECK(table.size() == 1);
    REQUIRE(table.find(a) != nullptr);
    CHECK(table.find(a)->last_seen == 1000);
    CHECK(table.find(a)->ipv6_ll == ipv6_from_mac(a));

    auto r2 = table.upsert(frame_from(a), 2000);
    CHECK(!r2.is_new);
    CHECK(table.size() == 1);
    CHECK(table.find(a)->last_seen == 2000);
}

TEST_CASE("a truncated sync TLV degrades to a partial update") {
    std::mt19937_64 rng(8);
    PeerTable table;
    const MacAddress a{0x02, 0, 0, 0, 0, 0x0b};

    const SyncParams sync0 = testgen::random_sync_params(rng);
    const ElectionParams el0 = testgen::random_election_params(rng);
    table.upsert(frame_from(a, {encode_sync_params(sync0), encode_election_params(el0)}), 100);
    REQUIRE(table.find(a)->sync.has_value());
    CHECK(*table.find(a)->sync == sync0);
    CHECK(*table.find(a)->election == el0);

    // second frame: sync TLV cut short, election TLV fine
    Tlv broken_sync = encode_sync_params(testgen::random_sync_params(rng));
    broken_sync.value.resize(10);
    const ElectionParams el1 = testgen::random_election_params(rng);
    auto outcome = table.upsert(frame_from(a, {broken_sync, encode_election_params(el1)}), 200);
    CHECK(outcome.tlv_decode_errors == 1);
    CHECK(*table.find(a)->sync == sync0);  // retained from before
    CHECK(*table.find(a)->election == el1);
    CHECK(table.find(a)->last_seen == 200);
}

TEST_CASE("hostname TLV is stored as text") {
    PeerTable table;
    const MacAddress a{0x02, 0, 0, 0, 0, 0x0c};
    Tlv host;
    host.tlv_type = static_cast<std::uint8_t>(TlvType::Hostname);
    host.value = {'k', 'i', 'w', 'i'};
    table.upsert(frame_from(a, {host}), 5);
    REQUIRE(table.find(a)->hostname.has_value());
    CHECK(*table.find(a)->hostname == "kiwi");
}

TEST_CASE("expire removes exactly the silent peers") {
    PeerTable table(3'000'000);
    const MacAddress a{0x02, 0, 0, 0, 0, 1};
    const MacAddress b{0x02, 0, 0, 0, 0, 2};

    CHECK(table.expire(0).empty());

    table.upsert(frame_from(a), 0);
    table.upsert(frame_from(b), 1'000'000);

    // boundary: exactly timeout old is retained (strict >)
    CHECK(table.expire(3'000'000).empty());
    CHECK(table.size() == 2);

    auto removed = table.expire(3'000'001);
    REQUIRE(removed.size() == 1);
    CHECK(removed[0] == a);
    CHECK(table.find(a) == nullptr);
    CHECK(table.find(b) != nullptr);

    // idempotent at fixed now
    CHECK(table.expire(3'000'001).empty());
}

TEST_CASE("table size is bounded by distinct sources and ipv6 stays derived") {
    std::mt19937_64 rng(17);
    PeerTable table;
    std::set<MacAddress> sources;
    for (int i = 0; i < 500; ++i) {
        MacAddress m = testgen::random_mac(rng);
        m.octets[0] = 0x02;
        m.octets[1] = static_cast<std::uint8_t>(rng() % 3);  // force collisions
        sources.insert(m);
        table.upsert(frame_from(m), static_cast<TimeMicros>(i));
    }
    CHECK(table.size() <= sources.size());
    for (const auto& [addr, peer] : table.peers()) {
        CHECK(peer.ipv6_ll == ipv6_from_mac(addr));
        CHECK(peer.addr == addr);
    }
}
