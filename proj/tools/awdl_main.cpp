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

#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <string>

#include <CLI11.hpp>

#include "awdl/analyzer.hpp"
#include "awdl/engine.hpp"
#include "awdl/pcap.hpp"
#include "awdl/scenario.hpp"
#include "awdl/simulator.hpp"

namespace {

int fail(const awdl::Error& e) {
    std::cerr << "error: " << awdl::to_string(e.kind);
    if (!e.msg.empty()) std::cerr << ": " << e.msg;
    std::cerr << "\n";
    return 1;
}

int run_daemon(const std::string& iface, const std::string& mac_str, std::uint16_t channel,
               std::optional<std::uint32_t> metric, std::uint64_t seed,
               const std::string& hostname, const std::string& stats_out) {
    awdl::NodeConfig cfg;
    auto mac = awdl::MacAddress::parse(mac_str);
    if (!mac) {
        std::cerr << "error: bad --mac '" << mac_str << "'\n";
        return 1;
    }
    cfg.mac = *mac;
    cfg.channel = static_cast<std::uint8_t>(channel);
    if (!cfg.channel_valid()) {
        std::cerr << "error: --channel must be 6, 44, or 149\n";
        return 1;
    }
    cfg.metric = metric;
    cfg.rng_seed = seed;
    cfg.hostname = hostname;

    std::unique_ptr<awdl::FramePort> port;
    if (iface.rfind("pcap:", 0) == 0) {
        auto p = awdl::PcapReplayPort::open(iface.substr(5));
        if (!p) return fail(p.error());
        port = std::move(p).value();
    } else {
        std::cerr << "error: unsupported --iface '" << iface
                  << "' (this build supports pcap:FILE replay)\n";
        return 1;
    }

    std::ofstream stats_file;
    std::ostream* stats = &std::cout;
    if (!stats_out.empty()) {
        stats_file.open(stats_out, std::ios::trunc);
        if (!stats_file) {
            std::cerr << "error: cannot open " << stats_out << "\n";
            return 1;
        }
        stats = &stats_file;
    }

    awdl::run_loop(cfg, *port, nullptr,
                   [&](const awdl::LogRecord& rec) { *stats << rec.to_json_line() << "\n"; });
    return 0;
}

int run_sim(const std::string& scenario_path, const std::string& pcap_out,
            const std::string& trace_out) {
    auto scenario = awdl::load_scenario(scenario_path);
    if (!scenario) return fail(scenario.error());
    auto result = awdl::run_scenario(scenario.value(), pcap_out);
    if (!result) return fail(result.error());

    const std::string trace = result.value().trace_json_lines();
    if (trace_out.empty()) {
        std::cout << trace;
    } else {
        std::ofstream out(trace_out, std::ios::trunc);
        if (!out) {
            std::cerr << "error: cannot open " << trace_out << "\n";
            return 1;
        }
        out << trace;
    }

    std::cerr << "nodes: " << result.value().final_election.size()
              << ", trace events: " << result.value().trace.size()
              << ", frames on channel: " << result.value().channel_frames.size() << "\n";
    return 0;
}

int run_dissect(const std::string& path, bool json) {
    auto report = awdl::dissect_capture(path);
    if (!report) return fail(report.error());
    const auto& records = report.value().records;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (json)
            std::cout << awdl::to_json(records[i]).dump() << "\n";
        else
            std::cout << awdl::frame_record_line(i, records[i]) << "\n";
    }
    if (report.value().tail_truncated) std::cerr << "warning: truncated record at end of file\n";
    return 0;
}

int run_analyze(const std::string& path, bool json) {
    auto report = awdl::dissect_capture(path);
    if (!report) return fail(report.error());
    const auto& records = report.value().records;

    const auto timeline = awdl::election_timeline(records);
    auto accuracy = awdl::sync_accuracy(records);

    std::set<std::string> nodes;
    for (const auto& r : records)
        if (r.cls == awdl::FrameClass::AwdlAction) nodes.insert(r.src.str());

    if (json) {
        awdl::Json j;
        j["frames"] = records.size();
        j["nodes"] = nodes;
        j["timeline"] = awdl::Json::array();
        for (const auto& e : timeline) j["timeline"].push_back(awdl::to_json(e));
        if (accuracy)
            j["sync_accuracy"] = awdl::to_json(accuracy.value());
        else
            j["sync_accuracy"] = {{"error", awdl::to_string(accuracy.error().kind)}};
        if (report.value().tail_truncated) j["tail_truncated"] = true;
        std::cout << j.dump(2) << "\n";
        return 0;
    }

    std::cout << "frames: " << records.size() << "\n";
    std::cout << "nodes (" << nodes.size() << "):";
    for (const auto& n : nodes) std::cout << " " << n;
    std::cout << "\n\nelection timeline:\n";
    for (const auto& e : timeline)
        std::cout << "  " << e.t << "  " << e.node.str() << "  master=" << e.master.str()
                  << " distance=" << e.distance << "\n";
    std::cout << "\nsync accuracy:\n";
    if (accuracy) {
        for (const auto& p : accuracy.value().pairs)
            std::cout << "  " << p.a.str() << " <-> " << p.b.str() << "  samples=" << p.samples
                      << " median=" << p.median_error_us << "us max=" << p.max_error_us << "us\n";
    } else {
        std::cout << "  (" << awdl::to_string(accuracy.error().kind) << ")\n";
    }
    if (report.value().tail_truncated) std::cerr << "warning: truncated record at end of file\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"AWDL-style protocol engine: daemon, simulator, and capture analysis"};
    app.require_subcommand(1);

    // daemon
    auto* daemon = app.add_subcommand("daemon", "run the protocol engine over a frame port");
    std::string iface, mac_str = "02:00:00:00:00:01", hostname, stats_out;
    std::uint16_t channel = 6;
    std::optional<std::uint32_t> metric;
    std::uint64_t seed = 0;
    daemon->add_option("--iface", iface, "frame port spec (pcap:FILE)")->required();
    daemon->add_option("--channel", channel, "social channel: 6, 44, or 149")
        ->check(CLI::IsMember({6, 44, 149}));
    daemon->add_option("--mac", mac_str, "node MAC address");
    daemon->add_option("--metric", metric, "election metric (default: drawn from seed)");
    daemon->add_option("--seed", seed, "RNG seed");
    daemon->add_option("--hostname", hostname, "hostname TLV contents");
    daemon->add_option("--stats-out", stats_out, "JSON-lines stats file (default stdout)");

    // sim
    auto* sim = app.add_subcommand("sim", "run a multi-node scenario in virtual time");
    std::string scenario_path, pcap_out, trace_out;
    sim->add_option("--scenario", scenario_path, "scenario file")->required();
    sim->add_option("--pcap-out", pcap_out, "capture all channel frames to this pcap");
    sim->add_option("--trace-out", trace_out, "trace JSON-lines file (default stdout)");

    // dissect
    auto* dissect = app.add_subcommand("dissect", "per-frame dissection of a capture file");
    std::string dissect_path;
    bool dissect_json = false;
    dissect->add_option("file", dissect_path, "pcap file")->required();
    dissect->add_flag("--json", dissect_json, "one JSON object per frame");

    // analyze
    auto* analyze = app.add_subcommand("analyze", "election timeline and sync accuracy");
    std::string analyze_path;
    bool analyze_json = false;
    analyze->add_option("file", analyze_path, "pcap file")->required();
    analyze->add_flag("--json", analyze_json, "JSON document output");

    CLI11_PARSE(app, argc, argv);

    if (daemon->parsed())
        return run_daemon(iface, mac_str, channel, metric, seed, hostname, stats_out);
    if (sim->parsed()) return run_sim(scenario_path, pcap_out, trace_out);
    if (dissect->parsed()) return run_dissect(dissect_path, dissect_json);
    if (analyze->parsed()) return run_analyze(analyze_path, analyze_json);
    return 1;
}
