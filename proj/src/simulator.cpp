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

#include "awdl/simulator.hpp"

#include <algorithm>
#include <optional>
#include <queue>

#include "awdl/pcap.hpp"

namespace awdl {

namespace {

// Application framing for the byte-exchange directive, carried over
// ethertype 0x88b5 (local experimental).
constexpr std::uint16_t kEthertypeStream = 0x88b5;
constexpr std::uint8_t kStreamMagic0 = 'A';
constexpr std::uint8_t kStreamMagic1 = 'S';
constexpr std::uint8_t kStreamData = 0;
constexpr std::uint8_t kStreamAck = 1;

Bytes ping_payload(std::uint16_t id, std::uint16_t seq, std::uint32_t len) {
    Bytes p(len);
    for (std::uint32_t i = 0; i < len; ++i)
        p[i] = static_cast<std::uint8_t>(i + id * 7 + seq * 13);
    return p;
}

EthernetFrame stream_chunk(const MacAddress& from, const MacAddress& to, std::uint8_t stream_id,
                           std::uint32_t offset, ByteSpan data) {
    ByteWriter w(8 + data.size());
    w.u8(kStreamMagic0);
    w.u8(kStreamMagic1);
    w.u8(kStreamData);
    w.u8(stream_id);
    w.u32le(offset);
    w.bytes(data);
    EthernetFrame f;
    f.dst = to;
    f.src = from;
    f.ethertype = kEthertypeStream;
    f.payload = w.take();
    return f;
}

EthernetFrame stream_ack(const MacAddress& from, const MacAddress& to, std::uint8_t stream_id,
                         std::uint32_t received_total) {
    ByteWriter w(8);
    w.u8(kStreamMagic0);
    w.u8(kStreamMagic1);
    w.u8(kStreamAck);
    w.u8(stream_id);
    w.u32le(received_total);
    EthernetFrame f;
    f.dst = to;
    f.src = from;
    f.ethertype = kEthertypeStream;
    f.payload = w.take();
    return f;
}

struct StreamMsg {
    std::uint8_t kind = 0;
    std::uint8_t stream_id = 0;
    std::uint32_t value = 0;  // offset for data, received total for ack
    ByteSpan data;
};

std::optional<StreamMsg> parse_stream(const EthernetFrame& f) {
    if (f.ethertype != kEthertypeStream) return std::nullopt;
    ByteReader r{ByteSpan(f.payload)};
    std::uint8_t m0 = 0, m1 = 0;
    StreamMsg m;
    if (!r.read_u8(m0) || !r.read_u8(m1) || !r.read_u8(m.kind) || !r.read_u8(m.stream_id) ||
        !r.read_u32le(m.value))
        return std::nullopt;
    if (m0 != kStreamMagic0 || m1 != kStreamMagic1) return std::nullopt;
    m.data = r.rest();
    return m;
}

}  // namespace

const char* to_string(TraceKind k) {
    switch (k) {
        case TraceKind::MasterChanged: return "master_changed";
        case TraceKind::PeerAdded: return "peer_added";
        case TraceKind::PeerExpired: return "peer_expired";
        case TraceKind::AfSent: return "af_sent";
        case TraceKind::DataSent: return "data_sent";
        case TraceKind::DataReceived: return "data_received";
        case TraceKind::EchoReplied: return "echo_replied";
    }
    return "unknown";
}

std::string TraceEvent::to_json_line() const {
    Json j;
    j["t_us"] = t;
    j["node"] = node.str();
    j["event"] = to_string(kind);
    for (auto it = detail.begin(); it != detail.end(); ++it) j[it.key()] = it.value();
    return j.dump();
}

std::string SimResult::trace_json_lines() const {
    std::string out;
    for (const auto& ev : trace) {
        out += ev.to_json_line();
        out += '\n';
    }
    return out;
}

namespace {

// Clocks: a node's local clock runs at (1 + ppm * 1e-6) of global time,
// shared epoch. Conversions are exact in 128-bit then floored; timers use
// the ceiling so a rescheduled local instant is never reached early.
TimeMicros to_local(TimeMicros global, std::int32_t ppm) {
    const __int128 n = static_cast<__int128>(global) * (1'000'000 + ppm);
    return static_cast<TimeMicros>(n / 1'000'000);
}

TimeMicros to_global_ceil(TimeMicros local, std::int32_t ppm) {
    const __int128 n = static_cast<__int128>(local) * 1'000'000;
    const __int128 d = 1'000'000 + ppm;
    return static_cast<TimeMicros>((n + d - 1) / d);
}

struct SimNode {
    ScenarioNode cfg;
    std::optional<Engine> engine;
    SimNodeId chan_id = 0;
    bool joined = false;
    std::uint64_t timer_gen = 0;
};

struct OwnEvent {
    TimeMicros t = 0;
    std::uint64_t seq = 0;
    enum class Kind { Join, Timer, HostIn, Traffic } kind = Kind::Join;
    std::size_t node = 0;       // Join/Timer/HostIn
    std::uint64_t timer_gen = 0;
    EthernetFrame host_frame;   // HostIn
    std::size_t directive = 0;  // Traffic
    std::uint32_t repeat = 0;   // Traffic
    std::uint64_t stream_offset = 0;

    bool operator>(const OwnEvent& o) const { return t != o.t ? t > o.t : seq > o.seq; }
};

class ScenarioRun {
  public:
    ScenarioRun(const Scenario& s, const std::string& pcap_path) : scenario_(s) {
        channel_.emplace(s.channel);
        channel_->on_transmit = [this](const LinkFrame& f) {
            result_.channel_frames.push_back(f);
            if (pcap_) (void)pcap_->write(f);
        };
        if (!pcap_path.empty()) {
            auto w = PcapWriter::open(pcap_path);
            if (w) pcap_ = std::move(w).value();
        }
        for (const auto& n : s.nodes) {
            SimNode sn;
            sn.cfg = n;
            nodes_.push_back(std::move(sn));
            mac_to_index_[n.config.mac] = nodes_.size() - 1;
        }
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            OwnEvent ev;
            ev.t = nodes_[i].cfg.join_at;
            ev.seq = next_seq_++;
            ev.kind = OwnEvent::Kind::Join;
            ev.node = i;
            push(std::move(ev));
        }
        for (std::size_t d = 0; d < s.traffic.size(); ++d) {
            OwnEvent ev;
            ev.t = s.traffic[d].at;
            ev.seq = next_seq_++;
            ev.kind = OwnEvent::Kind::Traffic;
            ev.directive = d;
            push(std::move(ev));
        }
        result_.echo.resize(count_directives(TrafficDirective::Kind::Ping));
        result_.streams.resize(count_directives(TrafficDirective::Kind::Bytes));
        echo_sent_payloads_.resize(result_.echo.size());
    }

    SimResult run() {
        while (true) {
            const auto chan_t = channel_->next_delivery_time();
            const bool have_own = !queue_.empty();
            if (!chan_t && !have_own) break;

            TimeMicros t;
            const bool channel_first =
                chan_t && (!have_own || *chan_t <= queue_.top().t);
            t = channel_first ? *chan_t : queue_.top().t;
            if (t > scenario_.duration) break;

            if (channel_first) {
                for (auto& d : channel_->advance(t)) deliver(d, t);
            } else {
                OwnEvent ev = queue_.top();
                queue_.pop();
                process(ev);
            }
        }
        finish();
        return std::move(result_);
    }

  private:
    std::size_t count_directives(TrafficDirective::Kind k) const {
        std::size_t n = 0;
        for (const auto& d : scenario_.traffic)
            if (d.kind == k) ++n;
        return n;
    }

    // Directive index -> position among directives of its kind.
    std::size_t kind_index(std::size_t directive) const {
        std::size_t n = 0;
        for (std::size_t i = 0; i < directive; ++i)
            if (scenario_.traffic[i].kind == scenario_.traffic[directive].kind) ++n;
        return n;
    }

    void push(OwnEvent ev) { queue_.push(std::move(ev)); }

    void trace(TimeMicros t, const MacAddress& node, TraceKind kind, Json detail) {
        result_.trace.push_back(TraceEvent{t, node, kind, std::move(detail)});
    }

    void deliver(SimDelivery& d, TimeMicros t_global) {
        // Channel ids are assigned at join time in join order.
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            auto& sn = nodes_[i];
            if (!sn.joined || sn.chan_id != d.node) continue;
            const TimeMicros local_ts = to_local(t_global, sn.cfg.ppm);
            LinkFrame local = std::move(d.frame);
            local.timestamp = local_ts;
            dispatch(i, t_global, sn.engine->step(LinkFrameIn{std::move(local)}, local_ts));
            return;
        }
    }

    void process(const OwnEvent& ev) {
        switch (ev.kind) {
            case OwnEvent::Kind::Join: {
                auto& sn = nodes_[ev.node];
                sn.chan_id = channel_->register_node();
                sn.joined = true;
                apply_blocks(ev.node);
                const TimeMicros local = to_local(ev.t, sn.cfg.ppm);
                sn.engine.emplace(sn.cfg.config, local);
                dispatch(ev.node, ev.t, sn.engine->start());
                break;
            }
            case OwnEvent::Kind::Timer: {
                auto& sn = nodes_[ev.node];
                if (!sn.joined || ev.timer_gen != sn.timer_gen) break;  // superseded
                const TimeMicros local = to_local(ev.t, sn.cfg.ppm);
                dispatch(ev.node, ev.t, sn.engine->step(TimerFired{local}, local));
                break;
            }
            case OwnEvent::Kind::HostIn: {
                auto& sn = nodes_[ev.node];
                if (!sn.joined) break;
                const TimeMicros local = to_local(ev.t, sn.cfg.ppm);
                dispatch(ev.node, ev.t, sn.engine->step(HostFrameIn{ev.host_frame}, local));
                break;
            }
            case OwnEvent::Kind::Traffic:
                run_traffic(ev);
                break;
        }
    }

    void apply_blocks(std::size_t node) {
        const auto& mac = nodes_[node].cfg.config.mac;
        for (const auto& [a, b] : scenario_.blocked) {
            const MacAddress* other = nullptr;
            if (a == mac)
                other = &b;
            else if (b == mac)
                other = &a;
            else
                continue;
            const std::size_t oi = mac_to_index_.at(*other);
            if (nodes_[oi].joined)
                channel_->set_blocked(nodes_[node].chan_id, nodes_[oi].chan_id, true);
        }
    }

    void run_traffic(const OwnEvent& ev) {
        const auto& d = scenario_.traffic[ev.directive];
        const std::size_t from = mac_to_index_.at(d.from);
        if (d.kind == TrafficDirective::Kind::Ping) {
            const std::size_t pi = kind_index(ev.directive);
            const std::uint16_t id = static_cast<std::uint16_t>(ev.directive);
            const std::uint16_t seq = static_cast<std::uint16_t>(ev.repeat);
            Bytes payload = ping_payload(id, seq, d.payload_len);
            echo_sent_payloads_[pi][seq] = payload;
            ++result_.echo[pi].requests;
            inject_host(from, ev.t,
                        build_echo_request(d.from, d.to, id, seq, ByteSpan(payload)));
            if (ev.repeat + 1 < d.count) {
                OwnEvent next = ev;
                next.t = ev.t + d.interval;
                next.seq = next_seq_++;
                next.repeat = ev.repeat + 1;
                push(std::move(next));
            }
        } else {
            const std::size_t si = kind_index(ev.directive);
            auto& stream = result_.streams[si];
            if (ev.repeat == 0 && stream.sent.empty()) {
                stream.sent.resize(d.size);
                for (std::uint64_t i = 0; i < d.size; ++i)
                    stream.sent[i] = static_cast<std::uint8_t>(i * 2654435761u >> 3);
            }
            const std::uint64_t offset = ev.stream_offset;
            const std::uint64_t n = std::min<std::uint64_t>(d.chunk_len, d.size - offset);
            inject_host(from, ev.t,
                        stream_chunk(d.from, d.to, static_cast<std::uint8_t>(ev.directive),
                                     static_cast<std::uint32_t>(offset),
                                     ByteSpan(stream.sent.data() + offset, n)));
            stream.bytes_sent += n;
            if (offset + n < d.size) {
                OwnEvent next = ev;
                next.t = ev.t + 1000;  // 1 ms chunk spacing
                next.seq = next_seq_++;
                next.repeat = ev.repeat + 1;
                next.stream_offset = offset + n;
                push(std::move(next));
            }
        }
    }

    void inject_host(std::size_t node, TimeMicros t, EthernetFrame frame) {
        OwnEvent ev;
        ev.t = t;
        ev.seq = next_seq_++;
        ev.kind = OwnEvent::Kind::HostIn;
        ev.node = node;
        ev.host_frame = std::move(frame);
        push(std::move(ev));
    }

    void dispatch(std::size_t node, TimeMicros t_global, std::vector<EngineAction> actions) {
        auto& sn = nodes_[node];
        for (auto& a : actions) {
            if (auto* lf = std::get_if<LinkFrameOut>(&a)) {
                lf->frame.timestamp = t_global;  // channel time is global
                (void)channel_->send(sn.chan_id, lf->frame);
            } else if (auto* hf = std::get_if<HostFrameOut>(&a)) {
                host_deliver(node, t_global, std::move(hf->frame));
            } else if (auto* st = std::get_if<SetTimer>(&a)) {
                OwnEvent ev;
                ev.t = to_global_ceil(st->at, sn.cfg.ppm);
                ev.seq = next_seq_++;
                ev.kind = OwnEvent::Kind::Timer;
                ev.node = node;
                ev.timer_gen = ++sn.timer_gen;
                push(std::move(ev));
            } else if (auto* lr = std::get_if<LogRecord>(&a)) {
                switch (lr->event) {
                    case LogEvent::MasterChanged:
                        trace(t_global, sn.cfg.config.mac, TraceKind::MasterChanged, lr->fields);
                        break;
                    case LogEvent::PeerAdded:
                        trace(t_global, sn.cfg.config.mac, TraceKind::PeerAdded, lr->fields);
                        break;
                    case LogEvent::PeerExpired:
                        trace(t_global, sn.cfg.config.mac, TraceKind::PeerExpired, lr->fields);
                        break;
                    case LogEvent::AfSent:
                        trace(t_global, sn.cfg.config.mac, TraceKind::AfSent, lr->fields);
                        break;
                    case LogEvent::DataSent:
                        trace(t_global, sn.cfg.config.mac, TraceKind::DataSent, lr->fields);
                        break;
                    case LogEvent::DataReceived:
                        trace(t_global, sn.cfg.config.mac, TraceKind::DataReceived, lr->fields);
                        break;
                    default:
                        break;  // start/stats/parse errors stay out of the trace
                }
            }
        }
    }

    // Host-side applications: the echo responder, the stream sink, and the
    // requester-side bookkeeping that the acceptance checks read.
    void host_deliver(std::size_t node, TimeMicros t, EthernetFrame frame) {
        auto& sn = nodes_[node];
        const MacAddress self = sn.cfg.config.mac;

        if (auto reply = echo_responder(self, frame)) {
            trace(t, self, TraceKind::EchoReplied, Json{{"to", frame.src.str()}});
            inject_host(node, t, std::move(*reply));
        } else if (auto echo = parse_echo(frame);
                   echo && echo->type == kIcmpv6EchoReply && echo->dst_ip == ipv6_from_mac(self)) {
            record_echo_reply(*echo);
        } else if (auto msg = parse_stream(frame)) {
            handle_stream(node, t, frame, *msg);
        }

        result_.host_rx[self].push_back(std::move(frame));
    }

    void record_echo_reply(const EchoMessage& echo) {
        if (echo.id >= scenario_.traffic.size()) return;
        if (scenario_.traffic[echo.id].kind != TrafficDirective::Kind::Ping) return;
        const std::size_t pi = kind_index(echo.id);
        auto& stats = result_.echo[pi];
        ++stats.replies;
        if (!echo.checksum_ok) ++stats.bad_checksums;
        auto it = echo_sent_payloads_[pi].find(echo.seq);
        if (it == echo_sent_payloads_[pi].end() || it->second != echo.payload)
            ++stats.payload_mismatches;
    }

    void handle_stream(std::size_t node, TimeMicros t, const EthernetFrame& frame,
                       const StreamMsg& msg) {
        if (msg.stream_id >= scenario_.traffic.size()) return;
        if (scenario_.traffic[msg.stream_id].kind != TrafficDirective::Kind::Bytes) return;
        const std::size_t si = kind_index(msg.stream_id);
        auto& stream = result_.streams[si];
        if (msg.kind == kStreamData) {
            if (msg.value != stream.received.size()) stream.in_order = false;
            if (msg.value == stream.received.size())
                stream.received.insert(stream.received.end(), msg.data.begin(), msg.data.end());
            inject_host(node, t,
                        stream_ack(nodes_[node].cfg.config.mac, frame.src, msg.stream_id,
                                   static_cast<std::uint32_t>(stream.received.size())));
        } else if (msg.kind == kStreamAck) {
            stream.acked_bytes = std::max<std::uint64_t>(stream.acked_bytes, msg.value);
        }
    }

    void finish() {
        std::stable_sort(result_.trace.begin(), result_.trace.end(),
                         [](const TraceEvent& a, const TraceEvent& b) { return a.t < b.t; });
        for (const auto& sn : nodes_) {
            if (!sn.joined) continue;
            const auto& mac = sn.cfg.config.mac;
            result_.final_election[mac] = sn.engine->election();
            auto& peers = result_.final_peers[mac];
            for (const auto& [addr, peer] : sn.engine->peers().peers()) peers.push_back(addr);
        }
        if (pcap_) pcap_->flush();
    }

    const Scenario& scenario_;
    std::optional<SimChannel> channel_;
    std::unique_ptr<PcapWriter> pcap_;
    std::vector<SimNode> nodes_;
    std::map<MacAddress, std::size_t> mac_to_index_;
    std::priority_queue<OwnEvent, std::vector<OwnEvent>, std::greater<OwnEvent>> queue_;
    std::uint64_t next_seq_ = 0;
    SimResult result_;
    std::vector<std::map<std::uint16_t, Bytes>> echo_sent_payloads_;
};

}  // namespace

Result<SimResult> run_scenario(const Scenario& s, const std::string& pcap_path) {
    if (s.nodes.empty()) return Error(Err::InvalidScenario, "scenario has no nodes");
    ScenarioRun run(s, pcap_path);
    return run.run();
}

}  // namespace awdl
