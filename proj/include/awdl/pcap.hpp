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

#pragma once

#include <cstdint>
#include <fstream>
#include <memory>
#include <string>

#include "awdl/error.hpp"
#include "awdl/linklayer.hpp"

namespace awdl {

inline constexpr std::uint32_t kPcapMagicMicros = 0xa1b2c3d4;
inline constexpr std::uint32_t kLinktypeRadiotap = 127;
inline constexpr std::uint32_t kLinktypeIeee80211 = 105;

/// One capture record. On a malformed radiotap header the raw record bytes
/// are kept and radiotap_error is set, so dissection can report the record
/// instead of dropping it.
struct PcapRecord {
    TimeMicros timestamp = 0;
    Bytes frame;  // radiotap stripped when present and well-formed
    bool radiotap_error = false;
};

enum class PcapReadStatus { Record, Eof, TailTruncated };

/// Microsecond-resolution pcap reader for linktypes 127 (radiotap) and 105
/// (bare 802.11). Handles both byte orders of the magic.
class PcapReader {
  public:
    static Result<std::unique_ptr<PcapReader>> open(const std::string& path);

    PcapReadStatus next(PcapRecord& out);

    std::uint32_t linktype() const { return linktype_; }

  private:
    PcapReader() = default;

    std::ifstream in_;
    bool swapped_ = false;
    std::uint32_t linktype_ = 0;
};

/// Writes linktype-127 files with a minimal 8-byte radiotap header so
/// standard dissection tools open them directly.
class PcapWriter {
  public:
    static Result<std::unique_ptr<PcapWriter>> open(const std::string& path);

    Status write(const LinkFrame& f);
    void flush();

  private:
    PcapWriter() = default;

    std::ofstream out_;
};

/// FramePort replaying a capture in timestamp order; send counts frames and
/// discards them. recv reports PortClosed at end of file.
class PcapReplayPort final : public FramePort {
  public:
    static Result<std::unique_ptr<PcapReplayPort>> open(const std::string& path);

    Result<std::optional<LinkFrame>> recv() override;
    Status send(const LinkFrame& f) override;

    std::uint64_t frames_dropped() const { return dropped_; }
    std::uint64_t frames_sent() const { return sent_; }

  private:
    PcapReplayPort() = default;

    std::unique_ptr<PcapReader> reader_;
    std::uint64_t dropped_ = 0;
    std::uint64_t sent_ = 0;
};

}  // namespace awdl
