#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace addrhash {

/// A 48-bit IEEE 802 station address.
///
/// Octets are stored in wire order: octet(1) is the first octet transmitted.
/// Bit 0 is the most significant bit of octet(1) and bit 47 the least
/// significant bit of octet(6), so bits 32..39 are exactly octet(5).
class Address {
public:
    static constexpr unsigned kOctets = 6;
    static constexpr unsigned kBits = 48;

    constexpr Address() = default;
    constexpr explicit Address(const std::array<std::uint8_t, kOctets>& octets) : octets_(octets) {}

    /// Builds an address from the low 48 bits of `value` (bit 47 of `value`
    /// becomes address bit 0).
    static constexpr Address from_u64(std::uint64_t value) {
        std::array<std::uint8_t, kOctets> o{};
        for (unsigned i = 0; i < kOctets; ++i)
            o[i] = static_cast<std::uint8_t>(value >> (8 * (kOctets - 1 - i)));
        return Address(o);
    }

    /// Parses `aa-bb-cc-dd-ee-ff` or `aa:bb:cc:dd:ee:ff`, case-insensitive.
    /// Throws ParseError on anything else.
    static Address parse(std::string_view text);

    constexpr std::uint64_t to_u64() const {
        std::uint64_t v = 0;
        for (auto b : octets_) v = (v << 8) | b;
        return v;
    }

    /// 1-based octet access matching b[1]..b[6].
    constexpr std::uint8_t octet(unsigned index) const { return octets_.at(index - 1); }

    constexpr const std::array<std::uint8_t, kOctets>& octets() const { return octets_; }

    /// Lower-case, `-` separated.
    std::string to_string(char separator = '-') const;

    constexpr auto operator<=>(const Address&) const = default;

private:
    std::array<std::uint8_t, kOctets> octets_{};
};

}  // namespace addrhash

template <>
struct std::hash<addrhash::Address> {
    std::size_t operator()(const addrhash::Address& a) const noexcept {
        return std::hash<std::uint64_t>{}(a.to_u64());
    }
};
