#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace addrhash {

// A bit window, hash width, or size parameter that does not fit.
class RangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// Malformed text input. `line()` is 1-based, 0 when not line-oriented.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line = 0, std::string text = {})
        : std::runtime_error(what), line_(line), text_(std::move(text)) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& text() const noexcept { return text_; }

private:
    std::size_t line_;
    std::string text_;
};

class EmptyTraceError : public std::runtime_error {
public:
    EmptyTraceError() : std::runtime_error("empty trace") {}
};

// Requested station count exceeds the address space under the configured prefixes.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A sweep whose (start, length) ranges select no valid window.
class EmptyRangeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A rejection-rate target no finite mask can reach.
class UnsatisfiableError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace addrhash
