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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace awdl {

using Bytes = std::vector<std::uint8_t>;
using ByteSpan = std::span<const std::uint8_t>;

/// Bounds-checked cursor over a byte span. All take_/read_ calls report
/// exhaustion through the return value; nothing reads past the span.
class ByteReader {
  public:
    explicit ByteReader(ByteSpan data) : data_(data) {}

    std::size_t remaining() const { return data_.size() - pos_; }
    std::size_t position() const { return pos_; }
    bool can_read(std::size_t n) const { return remaining() >= n; }

    bool read_u8(std::uint8_t& out) {
        if (!can_read(1)) return false;
        out = data_[pos_++];
        return true;
    }

    bool read_u16le(std::uint16_t& out) {
        if (!can_read(2)) return false;
        out = static_cast<std::uint16_t>(data_[pos_] | (data_[pos_ + 1] << 8));
        pos_ += 2;
        return true;
    }

    bool read_u16be(std::uint16_t& out) {
        if (!can_read(2)) return false;
        out = static_cast<std::uint16_t>((data_[pos_] << 8) | data_[pos_ + 1]);
        pos_ += 2;
        return true;
    }

    bool read_u32le(std::uint32_t& out) {
        if (!can_read(4)) return false;
        out = static_cast<std::uint32_t>(data_[pos_]) |
              (static_cast<std::uint32_t>(data_[pos_ + 1]) << 8) |
              (static_cast<std::uint32_t>(data_[pos_ + 2]) << 16) |
              (static_cast<std::uint32_t>(data_[pos_ + 3]) << 24);
        pos_ += 4;
        return true;
    }

    bool read_bytes(std::uint8_t* out, std::size_t n) {
        if (!can_read(n)) return false;
        for (std::size_t i = 0; i < n; ++i) out[i] = data_[pos_ + i];
        pos_ += n;
        return true;
    }

    bool take(std::size_t n, ByteSpan& out) {
        if (!can_read(n)) return false;
        out = data_.subspan(pos_, n);
        pos_ += n;
        return true;
    }

    bool skip(std::size_t n) {
        if (!can_read(n)) return false;
        pos_ += n;
        return true;
    }

    ByteSpan rest() const { return data_.subspan(pos_); }

  private:
    ByteSpan data_;
    std::size_t pos_ = 0;
};

class ByteWriter {
  public:
    ByteWriter() = default;
    explicit ByteWriter(std::size_t reserve) { buf_.reserve(reserve); }

    void u8(std::uint8_t v) { buf_.push_back(v); }

    void u16le(std::uint16_t v) {
        buf_.push_back(static_cast<std::uint8_t>(v & 0xff));
        buf_.push_back(static_cast<std::uint8_t>(v >> 8));
    }

    void u16be(std::uint16_t v) {
        buf_.push_back(static_cast<std::uint8_t>(v >> 8));
        buf_.push_back(static_cast<std::uint8_t>(v & 0xff));
    }

    void u32le(std::uint32_t v) {
        buf_.push_back(static_cast<std::uint8_t>(v & 0xff));
        buf_.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
        buf_.push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
        buf_.push_back(static_cast<std::uint8_t>((v >> 24) & 0xff));
    }

    void bytes(ByteSpan data) { buf_.insert(buf_.end(), data.begin(), data.end()); }
    void bytes(const std::uint8_t* data, std::size_t n) { buf_.insert(buf_.end(), data, data + n); }

    std::size_t size() const { return buf_.size(); }
    Bytes take() { return std::move(buf_); }
    const Bytes& view() const { return buf_; }

  private:
    Bytes buf_;
};

}  // namespace awdl
