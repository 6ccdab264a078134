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

#include "awdl/engine.hpp"

#include <algorithm>

namespace awdl {

namespace {

constexpr std::uint8_t kDeviceVersion = 1;
constexpr std::uint8_t kDeviceClass = 1;

std::uint32_t draw_metric(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return static_cast<std::uint32_t>(1 + rng() % 65535);  // [1, 2^16)
}

}  // namespace

const char* to_string(LogEvent e) {
    switch (e) {
        case LogEvent::NodeStarted: return "node_started";
        case LogEvent::MasterChanged: return "master_changed";
        case LogEvent::PeerAdded: return "peer_added";
        case LogEvent::PeerExpired: return "peer_expired";
        case LogEvent::AfSent: return "af_sent";
        case LogEvent::DataSent: return "data_sent";
        case LogEvent::DataReceived: return "data_received";
        case LogEvent::ParseError: return "parse_error";
        case LogEvent::Stats: return "stats";
    }
    return "unknown";
}

std::string LogRecord::to_json_line() const {
    Json j;
    j["t_us"] = t;
    j["event"] = to_string(event);
    for (auto it = fields.begin(); it != fields.end(); ++it) j[it.key()] = it.value();
    return j.dump();
}

Engine::Engine(NodeConfig cfg, TimeMicros start_time)
    : cfg_(std::move(cfg)),
      peers_(static_cast<std::uint64_t>(cfg_.peer_timeout_ms) * 1000) {
    const std::uint32_t metric = cfg_.metric ? *cfg_.metric : draw_metric(cfg_.rng_seed);
    election_ = ElectionState::self_master(cfg_.mac, metric);
    sync_.anchor_time = start_time;
    sync_.anchor_seq = 0;
    sync_.af_period = tu_to_micros(cfg_.af_period_tu);
    sync_.channel_sequence = ChannelSequence::uniform(cfg_.channel);
    next_af_ = next_af_time(sync_, start_time);
}

void Engine::log(std::vector<EngineAction>& out, TimeMicros t, LogEvent e, Json fields) const {
    out.push_back(LogRecord{t, e, std::move(fields)});
}

std::vector<EngineAction> Engine::start() {
    std::vector<EngineAction> out;
    log(out, sync_.anchor_time, LogEvent::NodeStarted,
        {{"mac", cfg_.mac.str()},
         {"metric", election_.self_metric},
         {"channel", cfg_.channel},
         {"hostname", cfg_.hostname}});
    out.push_back(SetTimer{next_af_});
    return out;
}

std::vector<EngineAction> Engine::step(const EngineEvent& event, TimeMicros now) {
    return std::visit(
        [&](const auto& ev) -> std::vector<EngineAction> {
            using T = std::decay_t<decltype(ev)>;
            if constexpr (std::is_same_v<T, LinkFrameIn>) return on_link_frame(ev.frame, now);
            if constexpr (std::is_same_v<T, HostFrameIn>) return on_host_frame(ev.frame, now);
            if constexpr (std::is_same_v<T, TimerFired>) return on_timer(now);
        },
        event);
}

std::vector<PeerVote> Engine::collect_votes(TimeMicros now) const {
    std::vector<PeerVote> votes;
    votes.reserve(peers_.size());
    for (const auto& [addr, peer] : peers_.peers()) {
        if (!peer.election) continue;
        PeerVote v;
        v.addr = addr;
        v.params = *peer.election;
        v.fresh = time_delta(now, peer.last_seen) <= static_cast<std::int64_t>(kElectionFreshMicros);
        votes.push_back(v);
    }
    return votes;
}

std::vector<EngineAction> Engine::on_link_frame(const LinkFrame& f, TimeMicros now) {
    std::vector<EngineAction> out;
    ++counters_.frames_in;
    const ByteSpan raw(f.bytes);

    switch (classify_frame(raw)) {
        case FrameClass::AwdlAction: {
            // monitor-mode ports can echo our own transmissions
            if (raw.size() >= 16 && MacAddress{raw[10], raw[11], raw[12], raw[13], raw[14],
                                               raw[15]} == cfg_.mac) {
                ++counters_.own_frames;
                return out;
            }
            ++counters_.action_frames;
            auto parsed = parse_action_frame(raw);
            if (!parsed) {
                ++counters_.parse_errors;
                log(out, now, LogEvent::ParseError,
                    {{"kind", to_string(parsed.error().kind)}, {"class", "awdl_action"}});
                return out;
            }
            const ActionFrame& frame = parsed.value();
            auto outcome = peers_.upsert(frame, now);
            counters_.tlv_decode_errors += outcome.tlv_decode_errors;
            if (outcome.is_new) {
                const Peer* p = peers_.find(frame.hdr.addr2);
                log(out, now, LogEvent::PeerAdded,
                    {{"mac", frame.hdr.addr2.str()}, {"ipv6", p->ipv6_ll.str()}});
            }

            const ElectionState before = election_;
            auto votes = collect_votes(now);
            election_ = run_election(before, votes);
            if (election_.top_master != before.top_master) {
                log(out, now, LogEvent::MasterChanged,
                    {{"old", before.top_master.str()},
                     {"new", election_.top_master.str()},
                     {"distance", election_.distance}});
            }

            // Timing comes only from the current sync master, using this
            // frame's own sync TLV anchored at its receive timestamp.
            if (!election_.is_self_master() && frame.hdr.addr2 == election_.sync_master) {
                for (const auto& t : frame.tlvs) {
                    if (t.tlv_type != static_cast<std::uint8_t>(TlvType::SyncParams)) continue;
                    auto sp = decode_sync_params(t);
                    if (!sp) break;
                    auto adopted = adopt_timing(sync_, sp.value(), f.timestamp);
                    if (adopted) {
                        sync_ = adopted.value();
                        next_af_ = next_af_time(sync_, now);
                        out.push_back(SetTimer{next_af_});
                    }
                    break;
                }
            }
            return out;
        }
        case FrameClass::AwdlData: {
            ++counters_.data_frames;
            const MacAddress dst{raw[4], raw[5], raw[6], raw[7], raw[8], raw[9]};
            if (dst != cfg_.mac && !dst.is_multicast()) {
                ++counters_.not_addressed;
                return out;
            }
            auto eth = awdl_to_ethernet(raw);
            if (!eth) {
                ++counters_.parse_errors;
                log(out, now, LogEvent::ParseError,
                    {{"kind", to_string(eth.error().kind)}, {"class", "awdl_data"}});
                return out;
            }
            ++datapath_.rx_frames;
            log(out, now, LogEvent::DataReceived,
                {{"src", eth.value().src.str()},
                 {"ethertype", eth.value().ethertype},
                 {"len", eth.value().payload.size()}});
            out.push_back(HostFrameOut{std::move(eth).value()});
            return out;
        }
        case FrameClass::Other:
            ++counters_.other_dropped;
            return out;
    }
    return out;
}

std::vector<EngineAction> Engine::on_host_frame(const EthernetFrame& f, TimeMicros now) {
    std::vector<EngineAction> out;
    ++counters_.host_frames_in;
    auto tx = ethernet_to_awdl(f, datapath_);
    if (!tx) {
        ++counters_.parse_errors;
        log(out, now, LogEvent::ParseError,
            {{"kind", to_string(tx.error().kind)}, {"class", "host_frame"}});
        return out;
    }
    datapath_ = tx.value().state;
    log(out, now, LogEvent::DataSent,
        {{"dst", f.dst.str()},
         {"ethertype", f.ethertype},
         {"len", f.payload.size()},
         {"seq", static_cast<std::uint16_t>(datapath_.seq_counter - 1)}});
    out.push_back(LinkFrameOut{LinkFrame{now, std::move(tx).value().raw}});
    return out;
}

std::vector<EngineAction> Engine::on_timer(TimeMicros now) {
    std::vector<EngineAction> out;

    ActionFrame frame;
    frame.hdr = Ieee80211Header::action(kBroadcastMac, cfg_.mac);
    frame.hdr.seq_ctrl = static_cast<std::uint16_t>(mgmt_seq_++ << 4);
    frame.subtype = kSubtypeMif;
    frame.phy_tx_time = static_cast<std::uint32_t>(next_af_);
    frame.target_tx_time = static_cast<std::uint32_t>(next_af_);
    const SyncParams sp = build_sync_params(sync_, election_, now, next_af_);
    frame.tlvs.push_back(encode_sync_params(sp));
    frame.tlvs.push_back(build_election_tlv(election_));
    if (!cfg_.hostname.empty()) {
        Tlv host;
        host.tlv_type = static_cast<std::uint8_t>(TlvType::Hostname);
        host.value.assign(cfg_.hostname.begin(), cfg_.hostname.end());
        frame.tlvs.push_back(std::move(host));
    }
    frame.tlvs.push_back(
        Tlv{static_cast<std::uint8_t>(TlvType::Version), {kDeviceVersion, kDeviceClass}});

    auto bytes = serialize_action_frame(frame);
    if (bytes) {
        ++counters_.af_sent;
        log(out, now, LogEvent::AfSent,
            {{"aw_seq", sp.aw_seq_number},
             {"master", election_.top_master.str()},
             {"distance", election_.distance},
             {"self_master", election_.is_self_master()}});
        out.push_back(LinkFrameOut{LinkFrame{now, std::move(bytes).value()}});
    } else {
        ++counters_.parse_errors;
        log(out, now, LogEvent::ParseError,
            {{"kind", to_string(bytes.error().kind)}, {"class", "af_build"}});
    }

    auto removed = peers_.expire(now);
    bool lost_sync_master = false;
    for (const auto& mac : removed) {
        log(out, now, LogEvent::PeerExpired, {{"mac", mac.str()}});
        if (mac == election_.sync_master) lost_sync_master = true;
    }
    if (lost_sync_master && !election_.is_self_master()) {
        const ElectionState before = election_;
        election_ = run_election(before, collect_votes(now));
        if (election_.top_master != before.top_master) {
            log(out, now, LogEvent::MasterChanged,
                {{"old", before.top_master.str()},
                 {"new", election_.top_master.str()},
                 {"distance", election_.distance}});
        }
    }

    next_af_ = next_af_time(sync_, std::max(now, next_af_));
    out.push_back(SetTimer{next_af_});
    return out;
}

std::vector<LogRecord> Engine::final_stats(TimeMicros now) const {
    std::vector<LogRecord> out;
    for (const auto& [addr, peer] : peers_.peers()) {
        Json j{{"mac", addr.str()},
               {"ipv6", peer.ipv6_ll.str()},
               {"age_ms", time_delta(now, peer.last_seen) / 1000}};
        if (peer.election) {
            j["master"] = peer.election->master_address.str();
            j["distance"] = peer.election->distance_to_master;
            j["metric"] = peer.election->self_metric;
        } else {
            j["master"] = nullptr;
            j["distance"] = nullptr;
            j["metric"] = nullptr;
        }
        out.push_back(LogRecord{now, LogEvent::Stats, std::move(j)});
        out.back().fields["record"] = "peer";
    }
    Json c{{"record", "counters"},
           {"frames_in", counters_.frames_in},
           {"action_frames", counters_.action_frames},
           {"data_frames", counters_.data_frames},
           {"other_dropped", counters_.other_dropped},
           {"not_addressed", counters_.not_addressed},
           {"parse_errors", counters_.parse_errors},
           {"tlv_decode_errors", counters_.tlv_decode_errors},
           {"af_sent", counters_.af_sent},
           {"host_frames_in", counters_.host_frames_in},
           {"peers", peers_.size()},
           {"master", election_.top_master.str()},
           {"distance", election_.distance}};
    out.push_back(LogRecord{now, LogEvent::Stats, std::move(c)});
    return out;
}

RunLoopStats run_loop(const NodeConfig& cfg, FramePort& port, HostPort* host,
                      const std::function<void(const LogRecord&)>& on_log) {
    RunLoopStats stats;

    auto first = port.recv();
    const bool have_first = first.ok() && first.value().has_value();
    const TimeMicros start = have_first ? first.value()->timestamp : 0;

    Engine engine(cfg, start);
    TimeMicros now = start;
    std::optional<TimeMicros> timer;

    auto handle = [&](std::vector<EngineAction>&& actions) {
        for (auto& a : actions) {
            if (auto* lf = std::get_if<LinkFrameOut>(&a)) {
                (void)port.send(lf->frame);
            } else if (auto* hf = std::get_if<HostFrameOut>(&a)) {
                if (host) host->send(hf->frame);
            } else if (auto* st = std::get_if<SetTimer>(&a)) {
                timer = st->at;
            } else if (auto* lr = std::get_if<LogRecord>(&a)) {
                if (on_log) on_log(*lr);
            }
        }
    };

    handle(engine.start());

    std::optional<LinkFrame> pending = have_first ? first.value() : std::nullopt;
    bool closed = !have_first && !first.ok();

    while (pending || (timer && !closed)) {
        // Host traffic is injected at the current virtual time.
        if (host) {
            while (auto hf = host->recv()) {
                handle(engine.step(HostFrameIn{*hf}, now));
                ++stats.steps;
            }
        }

        if (pending && (!timer || pending->timestamp <= *timer)) {
            now = std::max(now, pending->timestamp);
            handle(engine.step(LinkFrameIn{std::move(*pending)}, now));
            ++stats.steps;
            ++stats.frames_in;
            pending.reset();
            auto next = port.recv();
            if (!next.ok()) {
                closed = true;
            } else if (next.value().has_value()) {
                pending = std::move(next).value();
            } else {
                closed = true;  // non-blocking port drained; treat as end of input
            }
        } else if (timer && pending) {
            const TimeMicros t = *timer;
            timer.reset();
            now = std::max(now, t);
            handle(engine.step(TimerFired{t}, t));
            ++stats.steps;
            ++stats.timer_steps;
        } else {
            break;  // input exhausted; do not free-run the timer
        }
    }

    for (const auto& rec : engine.final_stats(now))
        if (on_log) on_log(rec);
    return stats;
}

}  // namespace awdl
