#include "doctest.h"

#include <random>

#include "awdl/wire.hpp"
#include "test_helpers.hpp"

using namespace awdl;

namespace {

const MacAddress kNodeA{0x02, 0x00, 0x00, 0x00, 0x00, 0x01};

Bytes valid_action_bytes() {
    ActionFrame f;
    f.hdr = Ieee80211Header::action(kBroadcastMac, kNodeA);
    f.tlvs.push_back(encode_election_params(ElectionParams{}));
    return serialize_action_frame(f).value();
}

// MIF frame assembled by hand from the wire layout: 802.11 header, fixed
// action header, one sync TLV (channel 6, aw_seq 258, remaining 8 TU) and
// one election TLV (metric 500, self-master).
Bytes hand_assembled_mif() {
    Bytes b = {
        // 802.11 header
        0xd0, 0x00,                          // frame control: mgmt/action
        0x00, 0x00,                          // duration
        0xff, 0xff, 0xff, 0xff, 0xff, 0xff,  // addr1
        0x02, 0x00, 0x00, 0x00, 0x00, 0x01,  // addr2
        0x00, 0x25, 0x00, 0xff, 0x94, 0x73,  // addr3 = AWDL BSSID
        0x00, 0x00,                          // seq ctrl
        // fixed action header
        0x7f,              // category vendor-specific
        0x00, 0x17, 0xf2,  // OUI
        0x08,              // type
        0x10,              // version
        0x03,              // subtype MIF
        0x00,              // reserved
        0x40, 0x42, 0x0f, 0x00,  // phy tx 1,000,000
        0x40, 0x42, 0x0f, 0x00,  // target tx 1,000,000
        // sync TLV: type 0x04, length 55
        0x04, 0x37, 0x00,
        0x06,        // next aw channel
        0x00, 0x00,  // tx counter
        0x06,        // master channel
        0x00,        // guard time
        0x10, 0x00,  // aw period 16
        0x6e, 0x00,  // af period 110
        0x00, 0x00,  // flags
        0x10, 0x00,  // aw ext length 16
        0x10, 0x00,  // aw common length 16
        0x08, 0x00,  // remaining 8
        0x00, 0x00, 0x00, 0x00,              // ext counts
        0x02, 0x00, 0x00, 0x00, 0x00, 0x01,  // master address
        0x00,        // presence mode
        0x00,        // reserved
        0x02, 0x01,  // aw seq number 0x0102 = 258
        0x00, 0x00,  // ap alignment delta
        // channel sequence, encoding 0
        0x0f, 0x00, 0x00, 0x03, 0xff, 0xff,
        0x06, 0x06, 0x06, 0x06, 0x06, 0x06, 0x06, 0x06,
        0x06, 0x06, 0x06, 0x06, 0x06, 0x06, 0x06, 0x06,
        // election TLV: type 0x18, length 32
        0x18, 0x20, 0x00,
        0x02, 0x00, 0x00, 0x00, 0x00, 0x01,  // master address
        0x02, 0x00, 0x00, 0x00, 0x00, 0x01,  // sync address
        0x00, 0x00, 0x00, 0x00,              // master counter
        0x00, 0x00, 0x00, 0x00,              // distance
        0xf4, 0x01, 0x00, 0x00,              // master metric 500
        0xf4, 0x01, 0x00, 0x00,              // self metric 500
        0x00, 0x00, 0x00, 0x00,              // self counter
    };
    return b;
}

}  // namespace

TEST_CASE("classify accepts only the AWDL BSSID in addr3") {
    Bytes frame = valid_action_bytes();
    CHECK(classify_frame(ByteSpan(frame)) == FrameClass::AwdlAction);

    // same frame with addr3 = broadcast
    Bytes broken = frame;
    for (int i = 0; i < 6; ++i) broken[16 + i] = 0xff;
    CHECK(classify_frame(ByteSpan(broken)) == FrameClass::Other);

    // the BSSID in addr1 or addr2 instead of addr3 does not count
    for (int slot = 0; slot < 2; ++slot) {
        Bytes moved = frame;
        for (int i = 0; i < 6; ++i) {
            moved[4 + 6 * slot + i] = kAwdlBssid.octets[i];
            moved[16 + i] = 0xff;
        }
        CHECK(classify_frame(ByteSpan(moved)) == FrameClass::Other);
    }
}

TEST_CASE("classify rejects a beacon frame") {
    // beacon: mgmt subtype 8, even with the AWDL BSSID in addr3
    Bytes beacon = {0x80, 0x00, 0x00, 0x00,
                    0xff, 0xff, 0xff, 0xff, 0xff, 0xff,
                    0x02, 0x00, 0x00, 0x00, 0x00, 0x01,
                    0x00, 0x25, 0x00, 0xff, 0x94, 0x73,
                    0x00, 0x00,
                    0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00,  // timestamp
                    0x64, 0x00, 0x11, 0x04};
    CHECK(classify_frame(ByteSpan(beacon)) == FrameClass::Other);
    CHECK(classify_frame(ByteSpan()) == FrameClass::Other);
}

TEST_CASE("parse_action_frame reads the hand-assembled MIF layout") {
    const Bytes raw = hand_assembled_mif();
    CHECK(classify_frame(ByteSpan(raw)) == FrameClass::AwdlAction);
    auto parsed = parse_action_frame(ByteSpan(raw));
    REQUIRE(parsed.ok());
    const ActionFrame& f = parsed.value();
    CHECK(f.subtype == kSubtypeMif);
    CHECK(f.version == 0x10);
    CHECK(f.phy_tx_time == 1'000'000);
    CHECK(f.target_tx_time == 1'000'000);
    CHECK(f.hdr.addr2 == kNodeA);
    REQUIRE(f.tlvs.size() == 2);
    CHECK(f.tlvs[0].tlv_type == 0x04);
    CHECK(f.tlvs[1].tlv_type == 0x18);

    auto sync = decode_sync_params(f.tlvs[0]);
    REQUIRE(sync.ok());
    CHECK(sync.value().next_aw_channel == 6);
    CHECK(sync.value().master_channel == 6);
    CHECK(sync.value().aw_period == 16);
    CHECK(sync.value().af_period == 110);
    CHECK(sync.value().aw_common_length == 16);
    CHECK(sync.value().remaining_aw_length == 8);
    CHECK(sync.value().aw_seq_number == 258);
    CHECK(sync.value().master_address == kNodeA);
    for (const auto& e : sync.value().channel_sequence.entries) CHECK(e.channel == 6);

    auto el = decode_election_params(f.tlvs[1]);
    REQUIRE(el.ok());
    CHECK(el.value().master_address == kNodeA);
    CHECK(el.value().sync_address == kNodeA);
    CHECK(el.value().distance_to_master == 0);
    CHECK(el.value().master_metric == 500);
    CHECK(el.value().self_metric == 500);

    // byte-exact reserialization of accepted input
    auto reser = serialize_action_frame(f);
    REQUIRE(reser.ok());
    CHECK(reser.value() == raw);
}

TEST_CASE("parse_action_frame rejects a TLV overrunning the body") {
    Bytes raw = valid_action_bytes();
    // append a TLV declaring 10 bytes but providing 4
    raw.push_back(0x55);
    raw.push_back(0x0a);
    raw.push_back(0x00);
    raw.insert(raw.end(), {1, 2, 3, 4});
    auto parsed = parse_action_frame(ByteSpan(raw));
    REQUIRE(!parsed.ok());
    CHECK(parsed.error_kind() == Err::TruncatedTlv);
}

TEST_CASE("serialize_action_frame with no TLVs is header plus 16-byte fixed body") {
    ActionFrame f;
    f.hdr = Ieee80211Header::action(kBroadcastMac, kNodeA);
    auto bytes = serialize_action_frame(f);
    REQUIRE(bytes.ok());
    // category(1) OUI(3) type(1) version(1) subtype(1) reserved(1) phy(4) target(4)
    CHECK(bytes.value().size() == kIeee80211HeaderLen + 16);
    auto back = parse_action_frame(ByteSpan(bytes.value()));
    REQUIRE(back.ok());
    CHECK(back.value() == f);
}

TEST_CASE("serialize_action_frame refuses oversize bodies") {
    ActionFrame f;
    f.hdr = Ieee80211Header::action(kBroadcastMac, kNodeA);
    Tlv big;
    big.tlv_type = 0x42;
    big.value.assign(3000, 0xaa);
    f.tlvs.push_back(std::move(big));
    auto bytes = serialize_action_frame(f);
    REQUIRE(!bytes.ok());
    CHECK(bytes.error_kind() == Err::OversizeFrame);
}

TEST_CASE("sync params round trip and reject truncation") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
        const SyncParams s = testgen::random_sync_params(rng);
        auto back = decode_sync_params(encode_sync_params(s));
        REQUIRE(back.ok());
        CHECK(back.value() == s);
    }

    Tlv t = encode_sync_params(testgen::random_sync_params(rng));
    t.value.resize(20);  // cut before master_address
    auto broken = decode_sync_params(t);
    REQUIRE(!broken.ok());
    CHECK(broken.error_kind() == Err::TruncatedValue);

    Tlv wrong = encode_sync_params(testgen::random_sync_params(rng));
    wrong.tlv_type = 0x18;
    CHECK(decode_sync_params(wrong).error_kind() == Err::WrongTlvType);
}

TEST_CASE("sync params decode enforces remaining <= common") {
    std::mt19937_64 rng(3);
    SyncParams s = testgen::random_sync_params(rng);
    s.aw_common_length = 4;
    s.remaining_aw_length = 4;
    Tlv t = encode_sync_params(s);
    CHECK(decode_sync_params(t).ok());
    t.value[15] = 5;  // remaining_aw_length low byte
    t.value[16] = 0;
    auto bad = decode_sync_params(t);
    REQUIRE(!bad.ok());
    CHECK(bad.error_kind() == Err::InvariantViolation);
}

TEST_CASE("election params round trip, little-endian fields, lenient semantics") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
        const ElectionParams e = testgen::random_election_params(rng);
        auto back = decode_election_params(encode_election_params(e));
        REQUIRE(back.ok());
        CHECK(back.value() == e);
    }

    // hand-encoded value: self_metric 0x00000100 = 256 at offset 24
    Bytes v(32, 0);
    v[25] = 0x01;
    auto decoded = decode_election_params(Tlv{0x18, v});
    REQUIRE(decoded.ok());
    CHECK(decoded.value().self_metric == 256);

    // distance 0 with master != advertiser decodes fine; semantics live upstream
    ElectionParams odd;
    odd.master_address = MacAddress{1, 2, 3, 4, 5, 6};
    odd.sync_address = MacAddress{9, 9, 9, 9, 9, 9};
    odd.distance_to_master = 0;
    CHECK(decode_election_params(encode_election_params(odd)).ok());
}

TEST_CASE("channel sequence codec") {
    const ChannelSequence uniform = ChannelSequence::uniform(6);
    const Bytes enc = encode_channel_sequence(uniform);
    CHECK(enc.size() == 6 + 16);
    auto dec = decode_channel_sequence(ByteSpan(enc));
    REQUIRE(dec.ok());
    for (const auto& e : dec.value().entries) {
        CHECK(e.channel == 6);
        CHECK(e.flags == 0);
    }
    CHECK(encode_channel_sequence(dec.value()) == enc);

    // bare-channel encoding decodes with flags zero
    Bytes bare = {0x0f, 0x00, 0x00, 0x03, 0xff, 0xff};
    for (int i = 0; i < 16; ++i) bare.push_back(static_cast<std::uint8_t>(i + 1));
    auto d2 = decode_channel_sequence(ByteSpan(bare));
    REQUIRE(d2.ok());
    for (int i = 0; i < 16; ++i) {
        CHECK(d2.value().entries[i].flags == 0);
        CHECK(d2.value().entries[i].channel == i + 1);
    }
    CHECK(encode_channel_sequence(d2.value()) == bare);

    Bytes bad_encoding = bare;
    bad_encoding[1] = 2;
    CHECK(decode_channel_sequence(ByteSpan(bad_encoding)).error_kind() == Err::BadEncodingId);

    Bytes short_seq(bare.begin(), bare.begin() + 12);
    CHECK(decode_channel_sequence(ByteSpan(short_seq)).error_kind() == Err::TruncatedValue);

    Bytes bad_count = bare;
    bad_count[0] = 9;
    CHECK(decode_channel_sequence(ByteSpan(bad_count)).error_kind() == Err::InvariantViolation);

    // encoder pads short entry lists with the last entry
    const std::uint8_t chans[3] = {6, 44, 149};
    const ChannelSequence padded = channel_sequence_from_entries(ByteSpan(chans, 3));
    CHECK(padded.entries[0].channel == 6);
    CHECK(padded.entries[1].channel == 44);
    for (int i = 2; i < 16; ++i) CHECK(padded.entries[i].channel == 149);
}

TEST_CASE("data frame codec round trips") {
    const MacAddress src{0x02, 0, 0, 0, 0, 0x01};
    const MacAddress dst{0x02, 0, 0, 0, 0, 0x02};
    DataHeader hdr;
    hdr.sequence = 1234;
    hdr.ethertype = 0x86dd;
    std::mt19937_64 rng(5);
    const Bytes payload = testgen::random_bytes(rng, 64);

    auto raw = build_data_frame(src, dst, hdr, ByteSpan(payload));
    REQUIRE(raw.ok());
    CHECK(classify_frame(ByteSpan(raw.value())) == FrameClass::AwdlData);

    auto parsed = parse_data_frame(ByteSpan(raw.value()));
    REQUIRE(parsed.ok());
    CHECK(parsed.value().src == src);
    CHECK(parsed.value().dst == dst);
    CHECK(parsed.value().hdr == hdr);
    CHECK(parsed.value().payload == payload);

    SUBCASE("bad magic") {
        Bytes broken = raw.value();
        broken[kIeee80211HeaderLen + kSnapHeaderLen + 1] = 0x05;
        auto bad = parse_data_frame(ByteSpan(broken));
        REQUIRE(!bad.ok());
        CHECK(bad.error_kind() == Err::BadMagic);
    }

    SUBCASE("multicast destination accepted") {
        const MacAddress all_nodes{0x33, 0x33, 0x00, 0x00, 0x00, 0x01};
        auto mc = build_data_frame(src, all_nodes, hdr, ByteSpan(payload));
        REQUIRE(mc.ok());
        CHECK(parse_data_frame(ByteSpan(mc.value())).value().dst == all_nodes);
    }

    SUBCASE("zero-length payload") {
        auto empty = build_data_frame(src, dst, hdr, ByteSpan());
        REQUIRE(empty.ok());
        CHECK(parse_data_frame(ByteSpan(empty.value())).value().payload.empty());
    }

    SUBCASE("oversize payload") {
        Bytes huge(kMaxDataPayload + 1, 0);
        CHECK(build_data_frame(src, dst, hdr, ByteSpan(huge)).error_kind() == Err::OversizeFrame);
    }
}

TEST_CASE("accepted data frame bytes reserialize exactly") {
    std::mt19937_64 rng(77);
    for (int i = 0; i < 200; ++i) {
        auto raw = build_data_frame(testgen::random_mac(rng), testgen::random_mac(rng),
                                    DataHeader{static_cast<std::uint16_t>(rng()), 0,
                                               static_cast<std::uint16_t>(rng())},
                                    ByteSpan());
        Bytes bytes = std::move(raw).value();
        // scribble over fields a foreign sender could vary
        bytes[1] = static_cast<std::uint8_t>(rng() % 4);   // fc flags
        bytes[2] = static_cast<std::uint8_t>(rng());       // duration
        bytes[22] = static_cast<std::uint8_t>(rng());      // seq ctrl
        bytes[kIeee80211HeaderLen + kSnapHeaderLen + 4] = static_cast<std::uint8_t>(rng());  // pad
        if (classify_frame(ByteSpan(bytes)) != FrameClass::AwdlData) continue;
        auto parsed = parse_data_frame(ByteSpan(bytes));
        REQUIRE(parsed.ok());
        CHECK(serialize_data_frame(parsed.value()).value() == bytes);
    }
}

TEST_CASE("action frame randomized round trip preserves unknown TLVs") {
    std::mt19937_64 rng(42);
    for (int i = 0; i < 300; ++i) {
        const ActionFrame f = testgen::random_action_frame(rng);
        auto bytes = serialize_action_frame(f);
        REQUIRE(bytes.ok());
        auto back = parse_action_frame(ByteSpan(bytes.value()));
        REQUIRE(back.ok());
        CHECK(back.value() == f);
        auto again = serialize_action_frame(back.value());
        CHECK(again.value() == bytes.value());
    }
}

TEST_CASE("parsers are total over random bytes") {
    std::mt19937_64 rng(1337);
    for (int i = 0; i < 2000; ++i) {
        Bytes junk = testgen::random_bytes(rng, rng() % 200);
        (void)classify_frame(ByteSpan(junk));
        (void)parse_action_frame(ByteSpan(junk));
        (void)parse_data_frame(ByteSpan(junk));
        (void)decode_channel_sequence(ByteSpan(junk));
        Tlv t;
        t.tlv_type = 0x04;
        t.value = junk;
        (void)decode_sync_params(t);
        t.tlv_type = 0x18;
        (void)decode_election_params(t);
    }
    // mutated valid frames must classify without crashing too
    Bytes frame = valid_action_bytes();
    for (int i = 0; i < 2000; ++i) {
        Bytes mutated = frame;
        mutated[rng() % mutated.size()] = static_cast<std::uint8_t>(rng());
        if (rng() % 4 == 0) mutated.resize(rng() % (mutated.size() + 1));
        (void)classify_frame(ByteSpan(mutated));
        (void)parse_action_frame(ByteSpan(mutated));
    }
    CHECK(true);
}

TEST_CASE("mac address ordering and parsing") {
    CHECK(MacAddress{0, 0, 0, 0, 0, 1} < MacAddress{0, 0, 0, 0, 0, 2});
    CHECK(MacAddress{1, 0, 0, 0, 0, 0} > MacAddress{0, 0xff, 0xff, 0xff, 0xff, 0xff});
    auto parsed = MacAddress::parse("00:25:00:ff:94:73");
    REQUIRE(parsed.has_value());
    CHECK(*parsed == kAwdlBssid);
    CHECK(parsed->str() == "00:25:00:ff:94:73");
    CHECK(!MacAddress::parse("not a mac").has_value());
    CHECK(MacAddress{0x33, 0x33, 0, 0, 0, 1}.is_multicast());
    CHECK(!MacAddress{0x02, 0, 0, 0, 0, 1}.is_multicast());
}
