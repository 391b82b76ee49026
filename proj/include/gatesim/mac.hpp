// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <cstdio>
#include <compare>
#include <stdexcept>
#include <string>

namespace gatesim {

/// 48-bit Ethernet address, stored in the low 48 bits.
struct MacAddress {
    std::uint64_t value{0};

    constexpr MacAddress() = default;
    constexpr explicit MacAddress(std::uint64_t v) : value(v & 0xFFFFFFFFFFFFULL) {}

    friend constexpr auto operator<=>(MacAddress, MacAddress) = default;

    bool is_multicast() const { return (value >> 40) & 0x01; }

    std::string to_string() const {
        char buf[18];
        std::snprintf(buf, sizeof(buf), "%02X:%02X:%02X:%02X:%02X:%02X",
                      static_cast<unsigned>((value >> 40) & 0xFF),
                      static_cast<unsigned>((value >> 32) & 0xFF),
                      static_cast<unsigned>((value >> 24) & 0xFF),
                      static_cast<unsigned>((value >> 16) & 0xFF),
                      static_cast<unsigned>((value >> 8) & 0xFF),
                      static_cast<unsigned>(value & 0xFF));
        return buf;
    }

    static MacAddress parse(const std::string& text) {
        unsigned b[6];
        if (std::sscanf(text.c_str(), "%2x:%2x:%2x:%2x:%2x:%2x",
                        &b[0], &b[1], &b[2], &b[3], &b[4], &b[5]) != 6) {
            throw std::invalid_argument("bad MAC address: " + text);
        }
        std::uint64_t v = 0;
        for (unsigned octet : b) v = (v << 8) | octet;
        return MacAddress{v};
    }
};

} // namespace gatesim
