#include "addrhash/address.hpp"

#include "addrhash/errors.hpp"

#include <cstdio>

namespace addrhash {

namespace {

int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

Address Address::parse(std::string_view text) {
    // "xx" + 5 * "-xx"
    if (text.size() != 17)
        throw ParseError("malformed address '" + std::string(text) + "'", 0, std::string(text));

    std::array<std::uint8_t, kOctets> o{};
    for (unsigned i = 0; i < kOctets; ++i) {
        const std::size_t pos = i * 3;
        if (i > 0 && text[pos - 1] != '-' && text[pos - 1] != ':')
            throw ParseError("bad separator in address '" + std::string(text) + "'", 0,
                             std::string(text));
        const int hi = hex_digit(text[pos]);
        const int lo = hex_digit(text[pos + 1]);
        if (hi < 0 || lo < 0)
            throw ParseError("invalid hex in address '" + std::string(text) + "'", 0,
                             std::string(text));
        o[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return Address(o);
}

std::string Address::to_string(char separator) const {
    char buf[18];
    std::snprintf(buf, sizeof buf, "%02x%c%02x%c%02x%c%02x%c%02x%c%02x", octets_[0], separator,
                  octets_[1], separator, octets_[2], separator, octets_[3], separator, octets_[4],
                  separator, octets_[5]);
    return buf;
}

}  // namespace addrhash
