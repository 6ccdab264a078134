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

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>

namespace awdl {

/// 48-bit IEEE 802 address. Ordering is lexicographic on octets, octet 0
/// most significant, so comparisons behave like comparing the colon form.
struct MacAddress {
    std::array<std::uint8_t, 6> octets{};

    constexpr MacAddress() = default;
    constexpr MacAddress(std::uint8_t a, std::uint8_t b, std::uint8_t c, std::uint8_t d,
                         std::uint8_t e, std::uint8_t f)
        : octets{a, b, c, d, e, f} {}

    auto operator<=>(const MacAddress&) const = default;

    bool is_multicast() const { return (octets[0] & 0x01) != 0; }
    bool is_broadcast() const {
        for (auto o : octets)
            if (o != 0xff) return false;
        return true;
    }

    std::string str() const;

    /// Accepts the aa:bb:cc:dd:ee:ff form (also '-' separators).
    static std::optional<MacAddress> parse(const std::string& text);
};

/// Fixed BSSID carried in addr3 of every AWDL action and data frame.
inline constexpr MacAddress kAwdlBssid{0x00, 0x25, 0x00, 0xff, 0x94, 0x73};

inline constexpr MacAddress kBroadcastMac{0xff, 0xff, 0xff, 0xff, 0xff, 0xff};

}  // namespace awdl
