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

#include "awdl/analyzer.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "awdl/pcap.hpp"
#include "awdl/sync.hpp"
#include "awdl/time_units.hpp"

namespace awdl {

FrameRecord dissect_frame(TimeMicros t, ByteSpan frame) {
    FrameRecord rec;
    rec.t = t;
    rec.cls = classify_frame(frame);

    if (frame.size() >= kIeee80211HeaderLen) {
        for (int i = 0; i < 6; ++i) {
            rec.dst.octets[i] = frame[4 + i];
            rec.src.octets[i] = frame[10 + i];
        }
    }

    switch (rec.cls) {
        case FrameClass::AwdlAction: {
            auto parsed = parse_action_frame(frame);
            if (!parsed) {
                rec.cls = FrameClass::Other;
                rec.parse_errors.push_back(parsed.error().kind);
                return rec;
            }
            const ActionFrame& f = parsed.value();
            rec.subtype = f.subtype;
            rec.seq_ctrl = f.hdr.seq_ctrl;
            for (const auto& tlv : f.tlvs) {
                rec.tlv_types.push_back(tlv.tlv_type);
                switch (static_cast<TlvType>(tlv.tlv_type)) {
                    case TlvType::SyncParams: {
                        auto sp = decode_sync_params(tlv);
                        if (sp)
                            rec.sync = std::move(sp).value();
                        else
                            rec.parse_errors.push_back(sp.error().kind);
                        break;
                    }
                    case TlvType::ElectionParams: {
                        auto ep = decode_election_params(tlv);
                        if (ep)
                            rec.election = ep.value();
                        else
                            rec.parse_errors.push_back(ep.error().kind);
                        break;
                    }
                    case TlvType::Hostname:
                        rec.hostname = std::string(tlv.value.begin(), tlv.value.end());
                        break;
                    default:
                        break;
                }
            }
            break;
        }
        case FrameClass::AwdlData: {
            auto parsed = parse_data_frame(frame);
            if (!parsed) {
                rec.cls = FrameClass::Other;
                rec.parse_errors.push_back(parsed.error().kind);
                break;
            }
            rec.data_hdr = parsed.value().hdr;
            rec.payload_len = static_cast<std::uint32_t>(parsed.value().payload.size());
            break;
        }
        case FrameClass::Other:
            break;
    }
    return rec;
}

Result<DissectReport> dissect_capture(const std::string& path) {
    auto reader = PcapReader::open(path);
    if (!reader) return reader.error();

    DissectReport report;
    PcapRecord rec;
    for (;;) {
        switch (reader.value()->next(rec)) {
            case PcapReadStatus::Eof:
                return report;
            case PcapReadStatus::TailTruncated:
                report.tail_truncated = true;
                return report;
            case PcapReadStatus::Record: {
                FrameRecord fr = dissect_frame(rec.timestamp, ByteSpan(rec.frame));
                if (rec.radiotap_error) {
                    fr.cls = FrameClass::Other;
                    fr.parse_errors.push_back(Err::TruncatedRecord);
                }
                report.records.push_back(std::move(fr));
                break;
            }
        }
    }
}

std::vector<TimelineEntry> election_timeline(const std::vector<FrameRecord>& records) {
    std::vector<TimelineEntry> timeline;
    std::map<MacAddress, std::pair<MacAddress, std::uint32_t>> last;
    for (const auto& rec : records) {
        if (rec.cls != FrameClass::AwdlAction || !rec.election) continue;
        const auto adv = std::make_pair(rec.election->master_address,
                                        rec.election->distance_to_master);
        auto it = last.find(rec.src);
        if (it != last.end() && it->second == adv) continue;
        last[rec.src] = adv;
        timeline.push_back(TimelineEntry{rec.t, rec.src, adv.first, adv.second});
    }
    return timeline;
}

namespace {

// Predicted start of the AW after this frame on the capture clock, by the
// adopt-timing arithmetic: anchor the advertised AW phase at the capture
// timestamp, then step one AW forward.
TimeMicros predicted_next_aw(const FrameRecord& rec) {
    const std::uint64_t elapsed = tu_to_micros(rec.sync->aw_common_length) -
                                  tu_to_micros(rec.sync->remaining_aw_length);
    return rec.t - elapsed + kAwDurationMicros;
}

std::uint32_t median_of(std::vector<std::uint32_t>& v) {
    std::sort(v.begin(), v.end());
    return v[(v.size() - 1) / 2];  // lower middle for even counts
}

}  // namespace

Result<SyncAccuracyReport> sync_accuracy(const std::vector<FrameRecord>& records) {
    std::map<MacAddress, std::vector<const FrameRecord*>> by_node;
    for (const auto& rec : records) {
        if (rec.cls != FrameClass::AwdlAction || !rec.sync) continue;
        by_node[rec.src].push_back(&rec);
    }
    if (by_node.size() < 2)
        return Error(Err::InsufficientData, "sync TLVs from fewer than 2 nodes");

    SyncAccuracyReport report;
    for (auto ia = by_node.begin(); ia != by_node.end(); ++ia) {
        for (auto ib = std::next(ia); ib != by_node.end(); ++ib) {
            std::vector<std::uint32_t> errors;
            for (const auto* fa : ia->second) {
                const std::uint64_t window =
                    fa->sync->af_period ? tu_to_micros(fa->sync->af_period)
                                        : tu_to_micros(kDefaultAfPeriodTu);
                for (const auto* fb : ib->second) {
                    const std::int64_t dt = time_delta(fb->t, fa->t);
                    if (dt < -static_cast<std::int64_t>(window) ||
                        dt > static_cast<std::int64_t>(window))
                        continue;
                    errors.push_back(sync_error(predicted_next_aw(*fa), predicted_next_aw(*fb),
                                                kAwDurationMicros));
                }
            }
            if (errors.empty()) continue;
            SyncAccuracyPair pair;
            pair.a = ia->first;
            pair.b = ib->first;
            pair.samples = errors.size();
            pair.max_error_us = *std::max_element(errors.begin(), errors.end());
            pair.median_error_us = median_of(errors);
            report.pairs.push_back(pair);
        }
    }
    if (report.pairs.empty())
        return Error(Err::InsufficientData, "no overlapping sync samples");
    return report;
}

nlohmann::json to_json(const FrameRecord& r) {
    nlohmann::json j;
    j["t_us"] = r.t;
    j["class"] = to_string(r.cls);
    j["src"] = r.src.str();
    j["dst"] = r.dst.str();
    if (r.cls == FrameClass::AwdlAction) {
        j["subtype"] = r.subtype == kSubtypeMif ? "mif" : (r.subtype == kSubtypePsf ? "psf" : std::to_string(r.subtype));
        j["seq_ctrl"] = r.seq_ctrl;
        j["tlv_types"] = r.tlv_types;
        if (r.election) {
            j["election"] = {{"master", r.election->master_address.str()},
                             {"sync", r.election->sync_address.str()},
                             {"master_counter", r.election->master_counter},
                             {"distance", r.election->distance_to_master},
                             {"master_metric", r.election->master_metric},
                             {"self_metric", r.election->self_metric},
                             {"self_counter", r.election->self_counter}};
        }
        if (r.sync) {
            j["sync"] = {{"aw_seq", r.sync->aw_seq_number},
                         {"remaining_tu", r.sync->remaining_aw_length},
                         {"common_tu", r.sync->aw_common_length},
                         {"af_period_tu", r.sync->af_period},
                         {"master", r.sync->master_address.str()},
                         {"channel", r.sync->master_channel}};
        }
        if (r.hostname) j["hostname"] = *r.hostname;
    } else if (r.cls == FrameClass::AwdlData && r.data_hdr) {
        j["data"] = {{"seq", r.data_hdr->sequence},
                     {"ethertype", r.data_hdr->ethertype},
                     {"payload_len", r.payload_len}};
    }
    if (!r.parse_errors.empty()) {
        std::vector<std::string> errs;
        for (auto e : r.parse_errors) errs.emplace_back(to_string(e));
        j["parse_errors"] = errs;
    }
    return j;
}

nlohmann::json to_json(const TimelineEntry& e) {
    return {{"t_us", e.t},
            {"node", e.node.str()},
            {"master", e.master.str()},
            {"distance", e.distance}};
}

nlohmann::json to_json(const SyncAccuracyReport& r) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& p : r.pairs) {
        pairs.push_back({{"a", p.a.str()},
                         {"b", p.b.str()},
                         {"samples", p.samples},
                         {"median_error_us", p.median_error_us},
                         {"max_error_us", p.max_error_us}});
    }
    return {{"pairs", pairs}};
}

std::string frame_record_line(std::size_t index, const FrameRecord& r) {
    std::ostringstream os;
    os << index << "\t" << r.t << "\t" << to_string(r.cls) << "\t" << r.src.str() << " -> "
       << r.dst.str();
    if (r.cls == FrameClass::AwdlAction) {
        os << "\t" << (r.subtype == kSubtypeMif ? "MIF" : r.subtype == kSubtypePsf ? "PSF" : "?");
        os << " tlvs=[";
        for (std::size_t i = 0; i < r.tlv_types.size(); ++i) {
            if (i) os << ",";
            os << "0x" << std::hex << static_cast<int>(r.tlv_types[i]) << std::dec;
        }
        os << "]";
        if (r.election)
            os << " master=" << r.election->master_address.str()
               << " dist=" << r.election->distance_to_master;
    } else if (r.cls == FrameClass::AwdlData && r.data_hdr) {
        os << "\tseq=" << r.data_hdr->sequence << " ethertype=0x" << std::hex
           << r.data_hdr->ethertype << std::dec << " len=" << r.payload_len;
    }
    for (auto e : r.parse_errors) os << " !" << to_string(e);
    return os.str();
}

}  // namespace awdl
