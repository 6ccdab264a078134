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

#include "awdl/pcap.hpp"

#include <array>

namespace awdl {

namespace {

constexpr std::uint32_t kMagicSwapped = 0xd4c3b2a1;
constexpr std::size_t kGlobalHeaderLen = 24;
constexpr std::size_t kRecordHeaderLen = 16;
constexpr std::size_t kRadiotapMinLen = 8;

std::uint16_t get_u16(const std::uint8_t* p, bool swapped) {
    return swapped ? static_cast<std::uint16_t>((p[0] << 8) | p[1])
                   : static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t get_u32(const std::uint8_t* p, bool swapped) {
    if (swapped)
        return (static_cast<std::uint32_t>(p[0]) << 24) | (static_cast<std::uint32_t>(p[1]) << 16) |
               (static_cast<std::uint32_t>(p[2]) << 8) | p[3];
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u16le(std::uint8_t* p, std::uint16_t v) {
    p[0] = static_cast<std::uint8_t>(v & 0xff);
    p[1] = static_cast<std::uint8_t>(v >> 8);
}

void put_u32le(std::uint8_t* p, std::uint32_t v) {
    p[0] = static_cast<std::uint8_t>(v & 0xff);
    p[1] = static_cast<std::uint8_t>((v >> 8) & 0xff);
    p[2] = static_cast<std::uint8_t>((v >> 16) & 0xff);
    p[3] = static_cast<std::uint8_t>((v >> 24) & 0xff);
}

}  // namespace

Result<std::unique_ptr<PcapReader>> PcapReader::open(const std::string& path) {
    auto reader = std::unique_ptr<PcapReader>(new PcapReader());
    reader->in_.open(path, std::ios::binary);
    if (!reader->in_) return Error(Err::BadMagic, "cannot open " + path);

    std::array<std::uint8_t, kGlobalHeaderLen> hdr;
    reader->in_.read(reinterpret_cast<char*>(hdr.data()), hdr.size());
    if (reader->in_.gcount() != static_cast<std::streamsize>(hdr.size()))
        return Error(Err::BadMagic, "short pcap global header");

    const std::uint32_t magic_le = get_u32(hdr.data(), false);
    if (magic_le == kPcapMagicMicros)
        reader->swapped_ = false;
    else if (magic_le == kMagicSwapped)
        reader->swapped_ = true;
    else
        return Error(Err::BadMagic, "not a microsecond pcap file");

    reader->linktype_ = get_u32(hdr.data() + 20, reader->swapped_);
    if (reader->linktype_ != kLinktypeRadiotap && reader->linktype_ != kLinktypeIeee80211)
        return Error(Err::UnsupportedLinktype,
                     "linktype " + std::to_string(reader->linktype_));
    return reader;
}

PcapReadStatus PcapReader::next(PcapRecord& out) {
    std::array<std::uint8_t, kRecordHeaderLen> rh;
    in_.read(reinterpret_cast<char*>(rh.data()), rh.size());
    if (in_.gcount() == 0) return PcapReadStatus::Eof;
    if (in_.gcount() != static_cast<std::streamsize>(rh.size())) return PcapReadStatus::TailTruncated;

    const std::uint32_t ts_sec = get_u32(rh.data(), swapped_);
    const std::uint32_t ts_usec = get_u32(rh.data() + 4, swapped_);
    const std::uint32_t incl_len = get_u32(rh.data() + 8, swapped_);

    Bytes body(incl_len);
    in_.read(reinterpret_cast<char*>(body.data()), incl_len);
    if (in_.gcount() != static_cast<std::streamsize>(incl_len)) return PcapReadStatus::TailTruncated;

    out.timestamp = static_cast<TimeMicros>(ts_sec) * 1'000'000 + ts_usec;
    out.radiotap_error = false;

    if (linktype_ == kLinktypeIeee80211) {
        out.frame = std::move(body);
        return PcapReadStatus::Record;
    }

    // Radiotap: length at bytes 2-3 little-endian regardless of file byte
    // order; strip exactly that many bytes, never reading beyond them.
    if (body.size() < kRadiotapMinLen) {
        out.frame = std::move(body);
        out.radiotap_error = true;
        return PcapReadStatus::Record;
    }
    const std::uint16_t rt_len = get_u16(body.data() + 2, false);
    if (rt_len < kRadiotapMinLen || rt_len > body.size()) {
        out.frame = std::move(body);
        out.radiotap_error = true;
        return PcapReadStatus::Record;
    }
    out.frame.assign(body.begin() + rt_len, body.end());
    return PcapReadStatus::Record;
}

Result<std::unique_ptr<PcapWriter>> PcapWriter::open(const std::string& path) {
    auto writer = std::unique_ptr<PcapWriter>(new PcapWriter());
    writer->out_.open(path, std::ios::binary | std::ios::trunc);
    if (!writer->out_) return Error(Err::BadMagic, "cannot open " + path);

    std::array<std::uint8_t, kGlobalHeaderLen> hdr{};
    put_u32le(hdr.data(), kPcapMagicMicros);
    put_u16le(hdr.data() + 4, 2);   // version major
    put_u16le(hdr.data() + 6, 4);   // version minor
    put_u32le(hdr.data() + 8, 0);   // thiszone
    put_u32le(hdr.data() + 12, 0);  // sigfigs
    put_u32le(hdr.data() + 16, 65535);
    put_u32le(hdr.data() + 20, kLinktypeRadiotap);
    writer->out_.write(reinterpret_cast<const char*>(hdr.data()), hdr.size());
    return writer;
}

Status PcapWriter::write(const LinkFrame& f) {
    if (!out_) return Error(Err::TruncatedRecord, "pcap writer in failed state");
    std::array<std::uint8_t, kRecordHeaderLen + kRadiotapMinLen> pre{};
    const std::uint32_t len = static_cast<std::uint32_t>(f.bytes.size() + kRadiotapMinLen);
    put_u32le(pre.data(), static_cast<std::uint32_t>(f.timestamp / 1'000'000));
    put_u32le(pre.data() + 4, static_cast<std::uint32_t>(f.timestamp % 1'000'000));
    put_u32le(pre.data() + 8, len);
    put_u32le(pre.data() + 12, len);
    // minimal radiotap: version 0, pad 0, length 8, present flags 0
    pre[kRecordHeaderLen + 2] = kRadiotapMinLen;
    out_.write(reinterpret_cast<const char*>(pre.data()), pre.size());
    out_.write(reinterpret_cast<const char*>(f.bytes.data()),
               static_cast<std::streamsize>(f.bytes.size()));
    return ok_status();
}

void PcapWriter::flush() { out_.flush(); }

Result<std::unique_ptr<PcapReplayPort>> PcapReplayPort::open(const std::string& path) {
    auto reader = PcapReader::open(path);
    if (!reader) return reader.error();
    auto port = std::unique_ptr<PcapReplayPort>(new PcapReplayPort());
    port->reader_ = std::move(reader).value();
    return port;
}

Result<std::optional<LinkFrame>> PcapReplayPort::recv() {
    for (;;) {
        PcapRecord rec;
        switch (reader_->next(rec)) {
            case PcapReadStatus::Eof:
            case PcapReadStatus::TailTruncated:
                return Err::PortClosed;
            case PcapReadStatus::Record:
                if (rec.radiotap_error || rec.frame.empty()) {
                    ++dropped_;
                    continue;
                }
                return std::optional<LinkFrame>(LinkFrame{rec.timestamp, std::move(rec.frame)});
        }
    }
}

Status PcapReplayPort::send(const LinkFrame&) {
    ++sent_;
    return ok_status();
}

}  // namespace awdl
