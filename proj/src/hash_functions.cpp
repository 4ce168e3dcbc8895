#include "addrhash/hash_functions.hpp"

#include "addrhash/errors.hpp"

#include <charconv>
#include <stdexcept>

namespace addrhash {

void validate_window(BitWindow window, unsigned width) {
    if (window.length < 1 || window.length > BitWindow::kMaxLength)
        throw RangeError("window length " + std::to_string(window.length) + " outside 1.." +
                         std::to_string(BitWindow::kMaxLength));
    if (window.start + window.length > width)
        throw RangeError("window bits " + std::to_string(window.start) + ".." +
                         std::to_string(window.start + window.length - 1) +
                         " exceed width " + std::to_string(width));
}

HashValue extract(HashValue value, BitWindow window) {
    validate_window(window, value.width);
    const unsigned shift = value.width - window.start - window.length;
    const std::uint64_t mask = (std::uint64_t{1} << window.length) - 1;
    return {(value.bits >> shift) & mask, window.length};
}

BitWindow parse_window(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos)
        throw ParseError("window '" + std::string(text) + "' is not start:length");
    auto number = [&](std::string_view part) {
        unsigned v = 0;
        const auto* end = part.data() + part.size();
        auto [ptr, ec] = std::from_chars(part.data(), end, v);
        if (part.empty() || ec != std::errc{} || ptr != end)
            throw ParseError("window '" + std::string(text) + "' is not start:length");
        return v;
    };
    return {number(text.substr(0, colon)), number(text.substr(colon + 1))};
}

CrcEngine::CrcEngine(unsigned width, std::uint32_t polynomial, std::uint32_t initial)
    : width_(width), polynomial_(polynomial), initial_(initial) {
    if (width < 1 || width > 32) throw RangeError("CRC width must be 1..32");
    const std::uint64_t limit = std::uint64_t{1} << width;
    if (polynomial == 0 || polynomial >= limit)
        throw RangeError("CRC polynomial does not fit in " + std::to_string(width) + " bits");
    if (initial >= limit)
        throw RangeError("CRC initial register does not fit in " + std::to_string(width) + " bits");

    const std::uint32_t aligned = polynomial << (32 - width);
    for (std::uint32_t b = 0; b < 256; ++b) {
        std::uint32_t r = b << 24;
        for (int i = 0; i < 8; ++i) r = (r & 0x80000000u) ? (r << 1) ^ aligned : r << 1;
        table_[b] = r;
    }
}

std::uint32_t CrcEngine::compute(std::span<const std::uint8_t> data) const {
    std::uint32_t reg = initial_ << (32 - width_);
    for (std::uint8_t byte : data) reg = (reg << 8) ^ table_[(reg >> 24) ^ byte];
    return reg >> (32 - width_);
}

HashScheme::HashScheme(SchemeKind kind, unsigned width, std::string name)
    : kind_(kind), width_(width), name_(std::move(name)) {}

HashScheme HashScheme::address_bits() { return {SchemeKind::AddressBits, Address::kBits, "bits"}; }

HashScheme HashScheme::crc32(std::uint32_t polynomial, std::uint32_t initial) {
    HashScheme s{SchemeKind::Crc32Ieee802, 32, "crc32"};
    s.crc_ = std::make_shared<const CrcEngine>(32, polynomial, initial);
    return s;
}

HashScheme HashScheme::crc16(std::uint32_t polynomial, std::uint32_t initial) {
    HashScheme s{SchemeKind::Crc16, 16, "crc16"};
    s.crc_ = std::make_shared<const CrcEngine>(16, polynomial, initial);
    return s;
}

HashScheme HashScheme::crc8(std::uint32_t polynomial, std::uint32_t initial) {
    HashScheme s{SchemeKind::Crc8, 8, "crc8"};
    s.crc_ = std::make_shared<const CrcEngine>(8, polynomial, initial);
    return s;
}

HashScheme HashScheme::fletcher(unsigned modulus) {
    if (modulus != 255 && modulus != 256)
        throw std::invalid_argument("Fletcher modulus must be 255 or 256");
    HashScheme s{SchemeKind::Fletcher, 16, modulus == 255 ? "fletcher" : "fletcher256"};
    s.modulus_ = modulus;
    return s;
}

HashScheme HashScheme::mod_checksum() { return {SchemeKind::ModChecksum, 16, "modsum"}; }

HashScheme HashScheme::xor_fold() { return {SchemeKind::XorFold, 8, "xor"}; }

const std::vector<std::string>& HashScheme::names() {
    static const std::vector<std::string> all{"bits",     "crc32",       "crc16",  "crc8",
                                              "fletcher", "fletcher256", "modsum", "xor"};
    return all;
}

HashScheme HashScheme::parse(std::string_view name) {
    if (name == "bits") return address_bits();
    if (name == "crc32") return crc32();
    if (name == "crc16") return crc16();
    if (name == "crc8") return crc8();
    if (name == "fletcher") return fletcher(255);
    if (name == "fletcher256") return fletcher(256);
    if (name == "modsum") return mod_checksum();
    if (name == "xor") return xor_fold();
    throw ParseError("unknown scheme '" + std::string(name) + "'");
}

HashValue HashScheme::apply(const Address& addr) const {
    switch (kind_) {
        case SchemeKind::AddressBits:
            return {addr.to_u64(), Address::kBits};
        case SchemeKind::Crc32Ieee802:
        case SchemeKind::Crc16:
        case SchemeKind::Crc8:
            return {crc_->compute(addr.octets()), width_};
        case SchemeKind::Fletcher:
            return addrhash::fletcher(addr, modulus_);
        case SchemeKind::ModChecksum:
            return addrhash::mod_checksum(addr);
        case SchemeKind::XorFold:
            return addrhash::xor_fold(addr);
    }
    throw std::logic_error("unhandled scheme kind");
}

HashValue bit_extract(const Address& addr, BitWindow window) {
    return extract({addr.to_u64(), Address::kBits}, window);
}

HashValue crc(const Address& addr, const HashScheme& scheme) {
    const CrcEngine* engine = scheme.crc_engine();
    if (engine == nullptr) throw std::invalid_argument("scheme '" + scheme.name() + "' is not a CRC");
    return {engine->compute(addr.octets()), engine->width()};
}

HashValue fletcher(const Address& addr, unsigned modulus) {
    unsigned c0 = 0;
    unsigned c1 = 0;
    for (std::uint8_t b : addr.octets()) {
        c0 = (c0 + b) % modulus;
        c1 = (c1 + c0) % modulus;
    }
    return {(std::uint64_t{c0} << 8) | c1, 16};
}

HashValue mod_checksum(const Address& addr) {
    const std::uint64_t high = 4u * addr.octet(1) + 2u * addr.octet(3) + addr.octet(5);
    const std::uint64_t low = 4u * addr.octet(2) + 2u * addr.octet(4) + addr.octet(6);
    return {((high << 8) + low) % 65535u, 16};
}

HashValue xor_fold(const Address& addr) {
    std::uint8_t c = 0;
    for (std::uint8_t b : addr.octets()) c ^= b;
    return {c, 8};
}

std::uint32_t hash_index(const Address& addr, const HashScheme& scheme, BitWindow window) {
    validate_window(window, scheme.width());
    return static_cast<std::uint32_t>(extract(scheme.apply(addr), window).bits);
}

}  // namespace addrhash
