#pragma once

#include "addrhash/address.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace addrhash {

/// An ordered sequence of destination address references.
///
/// frame_count() is R and distinct_count() is N. The distinct set is kept
/// sorted by address value together with each address's reference count.
class Trace {
public:
    /// Throws EmptyTraceError if `refs` is empty.
    explicit Trace(std::vector<Address> refs);

    const std::vector<Address>& refs() const { return refs_; }
    const std::vector<Address>& distinct() const { return distinct_; }
    /// Reference count of distinct()[i].
    const std::vector<std::uint64_t>& counts() const { return counts_; }

    std::uint64_t frame_count() const { return refs_.size(); }
    std::uint64_t distinct_count() const { return distinct_.size(); }

    friend bool operator==(const Trace& a, const Trace& b) { return a.refs_ == b.refs_; }

private:
    std::vector<Address> refs_;
    std::vector<Address> distinct_;
    std::vector<std::uint64_t> counts_;
};

// One address per line; blank lines and lines starting with '#' are skipped,
// CR before LF is tolerated. Errors carry the 1-based line number.
Trace parse_trace(std::istream& in);
Trace read_trace_file(const std::string& path);
void write_trace(std::ostream& out, const Trace& trace);

struct VendorPrefix {
    std::uint32_t oui = 0;  // first three octets, b[1] in bits 23..16
    double weight = 1.0;

    /// Parses `aa:bb:cc@weight` (weight optional, default 1).
    static VendorPrefix parse(std::string_view text);
};

struct SynthConfig {
    std::uint64_t stations = 500;
    std::uint64_t frames = 100000;
    double skew = 1.0;
    std::uint64_t seed = 1989;
    // Mean number of stations per run of nearby serial numbers under one
    // prefix (consecutive serials 1..3 apart). 1 draws every suffix uniformly.
    double serial_run = 1.0;
    std::vector<VendorPrefix> prefixes;  // empty means a single 08:00:2b prefix

    /// Throws std::invalid_argument if the invariants do not hold.
    void validate() const;
};

/// Reads `key = value` lines (keys stations, frames, skew, seed, prefix,
/// serial_run; prefix repeatable) on top of `base`. '#' starts a comment.
SynthConfig parse_synth_config(std::istream& in, SynthConfig base = {});

/// Generates `stations` distinct addresses with weighted vendor prefixes and
/// unique suffixes, references each once, fills the remaining frames
/// from a Zipf(skew) popularity law over stations, and shuffles. The result
/// depends only on the config.
Trace synthesize(const SynthConfig& config);

struct TraceStats {
    std::uint64_t frames = 0;
    std::uint64_t distinct = 0;
    std::vector<std::pair<Address, std::uint64_t>> top;  // by count desc, then address
    double top1_share = 0;
    double top10_share = 0;
    std::uint64_t stations_for_half = 0;  // fewest stations covering >= 50% of frames
    std::uint64_t stations_for_90 = 0;
};

TraceStats trace_stats(const Trace& trace, std::size_t top_n = 10);
void print_stats(std::ostream& out, const TraceStats& stats);

}  // namespace addrhash
