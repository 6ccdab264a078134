#include "doctest.h"

#include <cstdio>
#include <random>
#include <set>

#include "awdl/analyzer.hpp"
#include "awdl/pcap.hpp"
#include "awdl/simulator.hpp"
#include "test_helpers.hpp"

using namespace awdl;

namespace {

MacAddress node_mac(int i) {
    return MacAddress{0x02, 0x00, 0x00, 0x00, 0x00, static_cast<std::uint8_t>(i + 1)};
}

struct TempFile {
    std::string path;
    explicit TempFile(const char* name) : path(std::string("/tmp/awdl_analyzer_") + name) {}
    ~TempFile() { std::remove(path.c_str()); }
};

Scenario scenario_with(int nodes, std::uint64_t duration_ms, double loss = 0.0) {
    Scenario s;
    s.duration = duration_ms * 1000;
    s.channel.loss_probability = loss;
    s.channel.rng_seed = 3;
    for (int i = 0; i < nodes; ++i) {
        ScenarioNode n;
        n.config.mac = node_mac(i);
        n.config.metric = 100 + 10 * i;
        s.nodes.push_back(n);
    }
    return s;
}

}  // namespace

TEST_CASE("dissection preserves record count and TLV order") {
    TempFile f("count.pcap");
    auto result = run_scenario(scenario_with(2, 2000), f.path);
    REQUIRE(result.ok());

    auto report = dissect_capture(f.path);
    REQUIRE(report.ok());
    CHECK(!report.value().tail_truncated);
    CHECK(report.value().records.size() == result.value().channel_frames.size());

    for (const auto& rec : report.value().records) {
        REQUIRE(rec.cls == FrameClass::AwdlAction);
        CHECK(rec.parse_errors.empty());
        // engine MIF TLV order: sync, election, hostname?, version
        REQUIRE(rec.tlv_types.size() >= 3);
        CHECK(rec.tlv_types[0] == 0x04);
        CHECK(rec.tlv_types[1] == 0x18);
        CHECK(rec.tlv_types.back() == 0x15);
        CHECK(rec.sync.has_value());
        CHECK(rec.election.has_value());
    }
}

TEST_CASE("a corrupted TLV length flags one record and leaves the rest alone") {
    TempFile f("corrupt.pcap");
    auto result = run_scenario(scenario_with(2, 1500), f.path);
    REQUIRE(result.ok());
    REQUIRE(result.value().channel_frames.size() >= 3);

    // rewrite the capture with one frame's first TLV length overrunning
    {
        auto writer = PcapWriter::open(f.path);
        REQUIRE(writer.ok());
        auto frames = result.value().channel_frames;
        Bytes& target = frames[1].bytes;
        target[kIeee80211HeaderLen + kActionFixedHeaderLen + 1] = 0xff;  // TLV length lo
        target[kIeee80211HeaderLen + kActionFixedHeaderLen + 2] = 0xff;  // TLV length hi
        for (const auto& fr : frames) CHECK(writer.value()->write(fr).ok());
    }

    auto report = dissect_capture(f.path);
    REQUIRE(report.ok());
    const auto& records = report.value().records;
    CHECK(records.size() == result.value().channel_frames.size());
    CHECK(records[1].cls == FrameClass::Other);
    REQUIRE(!records[1].parse_errors.empty());
    CHECK(records[1].parse_errors[0] == Err::TruncatedTlv);
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (i == 1) continue;
        CHECK(records[i].cls == FrameClass::AwdlAction);
        CHECK(records[i].parse_errors.empty());
    }
}

TEST_CASE("election timeline: lone node yields a single entry") {
    TempFile f("lone.pcap");
    auto result = run_scenario(scenario_with(1, 1200), f.path);
    REQUIRE(result.ok());

    auto report = dissect_capture(f.path);
    REQUIRE(report.ok());
    auto timeline = election_timeline(report.value().records);
    REQUIRE(timeline.size() == 1);
    CHECK(timeline[0].node == node_mac(0));
    CHECK(timeline[0].master == node_mac(0));
    CHECK(timeline[0].distance == 0);
}

TEST_CASE("election timeline matches the simulator's advertised transitions") {
    TempFile f("timeline.pcap");
    auto result = run_scenario(scenario_with(2, 3000), f.path);
    REQUIRE(result.ok());

    auto report = dissect_capture(f.path);
    REQUIRE(report.ok());
    auto timeline = election_timeline(report.value().records);

    // reconstruct the expected advertised timeline from AfSent trace events
    std::vector<TimelineEntry> expected;
    std::map<MacAddress, std::pair<std::string, std::uint32_t>> last;
    for (const auto& ev : result.value().trace) {
        if (ev.kind != TraceKind::AfSent) continue;
        auto adv = std::make_pair(ev.detail.at("master").get<std::string>(),
                                  ev.detail.at("distance").get<std::uint32_t>());
        auto it = last.find(ev.node);
        if (it != last.end() && it->second == adv) continue;
        last[ev.node] = adv;
        expected.push_back(TimelineEntry{ev.t, ev.node, *MacAddress::parse(adv.first), adv.second});
    }

    REQUIRE(timeline.size() == expected.size());
    for (std::size_t i = 0; i < timeline.size(); ++i) {
        CHECK(timeline[i].t == expected[i].t);
        CHECK(timeline[i].node == expected[i].node);
        CHECK(timeline[i].master == expected[i].master);
        CHECK(timeline[i].distance == expected[i].distance);
    }

    // a node absent from the capture is absent from the timeline
    std::set<MacAddress> seen;
    for (const auto& e : timeline) seen.insert(e.node);
    CHECK(seen == std::set<MacAddress>{node_mac(0), node_mac(1)});
}

TEST_CASE("sync accuracy of two perfect nodes is within one TU") {
    TempFile f("sync.pcap");
    auto result = run_scenario(scenario_with(2, 5000), f.path);
    REQUIRE(result.ok());

    auto report = dissect_capture(f.path);
    REQUIRE(report.ok());

    // drop the pre-adoption frames: accuracy is defined once synchronized
    std::vector<FrameRecord> settled;
    for (const auto& rec : report.value().records)
        if (rec.t >= 500'000) settled.push_back(rec);

    auto accuracy = sync_accuracy(settled);
    REQUIRE(accuracy.ok());
    REQUIRE(accuracy.value().pairs.size() == 1);
    const auto& pair = accuracy.value().pairs[0];
    CHECK(pair.samples > 10);
    CHECK(pair.median_error_us <= kMicrosPerTu);
    CHECK(pair.max_error_us <= kAwDurationMicros / 2);
}

TEST_CASE("sync accuracy requires two advertising nodes") {
    TempFile f("single.pcap");
    auto result = run_scenario(scenario_with(1, 1200), f.path);
    REQUIRE(result.ok());
    auto report = dissect_capture(f.path);
    REQUIRE(report.ok());
    auto accuracy = sync_accuracy(report.value().records);
    REQUIRE(!accuracy.ok());
    CHECK(accuracy.error_kind() == Err::InsufficientData);
}

TEST_CASE("dissection is total over fuzzed captures") {
    std::mt19937_64 rng(1234);
    TempFile f("fuzz.pcap");
    std::size_t written = 0;
    {
        auto writer = PcapWriter::open(f.path);
        REQUIRE(writer.ok());
        for (int i = 0; i < 400; ++i) {
            Bytes junk = testgen::random_bytes(rng, 1 + rng() % 120);
            CHECK(writer.value()->write(LinkFrame{static_cast<TimeMicros>(i), junk}).ok());
            ++written;
        }
        // a few structurally valid frames mixed in
        for (int i = 0; i < 5; ++i) {
            auto frame = serialize_action_frame(testgen::random_action_frame(rng));
            CHECK(writer.value()->write(LinkFrame{1000, frame.value()}).ok());
            ++written;
        }
    }
    auto report = dissect_capture(f.path);
    REQUIRE(report.ok());
    CHECK(report.value().records.size() == written);
    std::size_t actions = 0;
    for (const auto& rec : report.value().records)
        if (rec.cls == FrameClass::AwdlAction) ++actions;
    CHECK(actions >= 5);
    (void)election_timeline(report.value().records);
    (void)sync_accuracy(report.value().records);
}

TEST_CASE("daemon replay of a capture reproduces the analyzer's peer count") {
    TempFile f("replay_cross.pcap");
    auto result = run_scenario(scenario_with(3, 4000), f.path);
    REQUIRE(result.ok());

    auto report = dissect_capture(f.path);
    REQUIRE(report.ok());
    std::set<MacAddress> analyzer_nodes;
    for (const auto& rec : report.value().records)
        if (rec.cls == FrameClass::AwdlAction) analyzer_nodes.insert(rec.src);

    NodeConfig cfg;
    cfg.mac = MacAddress{0x02, 0, 0, 0, 0, 0x99};
    cfg.metric = 1;
    auto port = PcapReplayPort::open(f.path);
    REQUIRE(port.ok());
    std::size_t daemon_peers = 0;
    std::uint64_t daemon_frames = 0;
    run_loop(cfg, *port.value(), nullptr, [&](const LogRecord& rec) {
        if (rec.event != LogEvent::Stats) return;
        if (rec.fields.value("record", "") == "peer") ++daemon_peers;
        if (rec.fields.value("record", "") == "counters")
            daemon_frames = rec.fields.at("frames_in").get<std::uint64_t>();
    });

    CHECK(daemon_peers == analyzer_nodes.size());
    CHECK(daemon_frames == report.value().records.size());
}

TEST_CASE("frame records serialize to JSON") {
    std::mt19937_64 rng(4321);
    auto bytes = serialize_action_frame(testgen::random_action_frame(rng)).value();
    const FrameRecord rec = dissect_frame(42, ByteSpan(bytes));
    const auto j = to_json(rec);
    CHECK(j.at("t_us") == 42);
    CHECK(j.at("class") == "awdl_action");
    CHECK(j.contains("tlv_types"));
    CHECK(!frame_record_line(0, rec).empty());
}
