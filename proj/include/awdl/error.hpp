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

#include <cassert>
#include <string>
#include <utility>
#include <variant>

namespace awdl {

/// Error kinds shared across the codec, capture, and simulation layers.
enum class Err {
    TruncatedFrame,
    TruncatedTlv,
    TruncatedValue,
    WrongTlvType,
    InvariantViolation,
    OversizeFrame,
    BadMagic,
    BadEncodingId,
    UnsupportedLinktype,
    TruncatedRecord,
    UnknownNode,
    PortClosed,
    InvalidScenario,
    InsufficientData,
};

const char* to_string(Err kind);

struct Error {
    Err kind;
    std::string msg;  // optional detail, may be empty

    explicit Error(Err k, std::string m = {}) : kind(k), msg(std::move(m)) {}
};

/// Minimal value-or-error carrier. Parsers must stay total over arbitrary
/// bytes, so the codec reports failures through this instead of throwing.
template <typename T>
class Result {
  public:
    Result(T value) : v_(std::move(value)) {}
    Result(Error error) : v_(std::move(error)) {}
    Result(Err kind, std::string msg = {}) : v_(Error(kind, std::move(msg))) {}

    bool ok() const { return std::holds_alternative<T>(v_); }
    explicit operator bool() const { return ok(); }

    const T& value() const& {
        assert(ok());
        return std::get<T>(v_);
    }
    T& value() & {
        assert(ok());
        return std::get<T>(v_);
    }
    T&& value() && {
        assert(ok());
        return std::get<T>(std::move(v_));
    }

    const Error& error() const& {
        assert(!ok());
        return std::get<Error>(v_);
    }
    Err error_kind() const { return error().kind; }

  private:
    std::variant<T, Error> v_;
};

struct Unit {};
using Status = Result<Unit>;

inline Status ok_status() { return Status(Unit{}); }

}  // namespace awdl
