#pragma once

#include "addrhash/address.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace addrhash {

/// A fixed-width hash output. Bit 0 is the most significant bit.
struct HashValue {
    std::uint64_t bits = 0;
    unsigned width = 0;

    friend bool operator==(const HashValue&, const HashValue&) = default;
};

/// Bits start..start+length-1 of a value, bit `start` ending up as the MSB.
struct BitWindow {
    static constexpr unsigned kMaxLength = 16;

    unsigned start = 0;
    unsigned length = 1;

    std::uint32_t cell_count() const { return std::uint32_t{1} << length; }

    friend bool operator==(const BitWindow&, const BitWindow&) = default;
};

/// Throws RangeError unless 1 <= length <= 16 and start + length <= width.
void validate_window(BitWindow window, unsigned width);

/// Extracts a window from any hash value.
HashValue extract(HashValue value, BitWindow window);

/// Parses the `start:length` form.
BitWindow parse_window(std::string_view text);

// Table-driven MSB-first CRC over a register of 1..32 bits. No input or
// output reflection and no final complement.
class CrcEngine {
public:
    CrcEngine(unsigned width, std::uint32_t polynomial, std::uint32_t initial);

    std::uint32_t compute(std::span<const std::uint8_t> data) const;

    unsigned width() const { return width_; }
    std::uint32_t polynomial() const { return polynomial_; }
    std::uint32_t initial() const { return initial_; }

private:
    unsigned width_;
    std::uint32_t polynomial_;
    std::uint32_t initial_;
    // Register is kept left-aligned in 32 bits so one table serves every width.
    std::array<std::uint32_t, 256> table_{};
};

enum class SchemeKind { AddressBits, Crc32Ieee802, Crc16, Crc8, Fletcher, ModChecksum, XorFold };

/// An immutable, named hash function from addresses to fixed-width values.
///
/// Output widths: AddressBits 48, Crc32Ieee802 32, Crc16/Fletcher/ModChecksum
/// 16, Crc8/XorFold 8. Copies share the CRC table and are safe to use from
/// several threads.
class HashScheme {
public:
    static constexpr std::uint32_t kCrc32Polynomial = 0x04C11DB7;  // IEEE 802
    static constexpr std::uint32_t kCrc16Polynomial = 0x1021;      // CCITT
    static constexpr std::uint32_t kCrc8Polynomial = 0x07;         // ATM HEC

    static HashScheme address_bits();
    static HashScheme crc32(std::uint32_t polynomial = kCrc32Polynomial,
                            std::uint32_t initial = 0xFFFFFFFF);
    static HashScheme crc16(std::uint32_t polynomial = kCrc16Polynomial, std::uint32_t initial = 0);
    static HashScheme crc8(std::uint32_t polynomial = kCrc8Polynomial, std::uint32_t initial = 0);
    /// `modulus` is 255 (Fletcher's ones-complement sums) or 256 (octet wraparound).
    static HashScheme fletcher(unsigned modulus = 255);
    static HashScheme mod_checksum();
    static HashScheme xor_fold();

    /// Accepts bits, crc32, crc16, crc8, fletcher, fletcher256, modsum, xor.
    static HashScheme parse(std::string_view name);
    static const std::vector<std::string>& names();

    SchemeKind kind() const { return kind_; }
    unsigned width() const { return width_; }
    const std::string& name() const { return name_; }
    unsigned fletcher_modulus() const { return modulus_; }
    /// Null for non-CRC schemes.
    const CrcEngine* crc_engine() const { return crc_.get(); }

    HashValue apply(const Address& addr) const;

private:
    HashScheme(SchemeKind kind, unsigned width, std::string name);

    SchemeKind kind_;
    unsigned width_;
    std::string name_;
    unsigned modulus_ = 0;
    std::shared_ptr<const CrcEngine> crc_;
};

HashValue bit_extract(const Address& addr, BitWindow window);

/// Throws std::invalid_argument if `scheme` is not a CRC kind.
HashValue crc(const Address& addr, const HashScheme& scheme);

/// (C0 << 8) | C1 from the two running sums, each reduced by `modulus`.
HashValue fletcher(const Address& addr, unsigned modulus = 255);

/// (2^8 (4 b1 + 2 b3 + b5) + (4 b2 + 2 b4 + b6)) mod 65535.
HashValue mod_checksum(const Address& addr);

HashValue xor_fold(const Address& addr);

/// Applies the scheme, then extracts the window: an index in [0, 2^length).
std::uint32_t hash_index(const Address& addr, const HashScheme& scheme, BitWindow window);

}  // namespace addrhash
