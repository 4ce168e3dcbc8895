#pragma once

#include "addrhash/hash_functions.hpp"
#include "addrhash/trace.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace addrhash {

/// Per-cell occupancy after hashing a trace into 2^m cells.
///
/// n[i] counts distinct addresses and r[i] counts frame references landing
/// in cell i. p(i) = n[i]/N and q(i) = r[i]/R.
struct CellDistribution {
    std::vector<std::uint64_t> n;
    std::vector<std::uint64_t> r;
    std::uint64_t distinct = 0;  // N
    std::uint64_t frames = 0;    // R

    std::size_t cell_count() const { return n.size(); }
    double p(std::size_t i) const { return static_cast<double>(n[i]) / static_cast<double>(distinct); }
    double q(std::size_t i) const { return static_cast<double>(r[i]) / static_cast<double>(frames); }
};

CellDistribution bucket(const Trace& trace, const HashScheme& scheme, BitWindow window);

/// Lookups saved per frame: sum over referenced cells of -q_i log2(p_i).
double info_content(const CellDistribution& dist);

/// sum over occupied cells of -p_i log2(p_i).
double address_entropy(const CellDistribution& dist);

struct LookupCost {
    double avg_lookups = 0;   // mean log2(2 n_cell) over frames
    double saved = 0;         // log2(2N) - avg_lookups
    double avg_steps = 0;     // mean integer binary-search steps, floor(log2 n) + 1
    double baseline_steps = 0;  // same for one table holding all N addresses
};

/// Walks every frame of the trace, charging log2(2 n) lookups for the
/// subtable its address hashes into.
LookupCost simulate_lookups(const Trace& trace, const HashScheme& scheme, BitWindow window);

struct Range {
    unsigned lo = 0;
    unsigned hi = 0;  // inclusive

    /// Parses `lo..hi` or a single number.
    static Range parse(std::string_view text);
};

struct SweepRow {
    unsigned start = 0;
    unsigned length = 0;
    double info_bits = 0;

    friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

struct SweepReport {
    std::string scheme;
    unsigned width = 0;
    Range lengths;
    Range starts;
    std::vector<SweepRow> rows;  // ordered by (length, start)
};

/// info_content for every window (i, m) with m in `lengths`, i in `starts`
/// and i + m <= scheme width. Throws EmptyRangeError when nothing qualifies.
/// `threads` = 0 picks hardware concurrency; the rows do not depend on it.
SweepReport sweep(const Trace& trace, const HashScheme& scheme, Range lengths, Range starts,
                  unsigned threads = 0);

void write_sweep_csv(std::ostream& out, const SweepReport& report);

/// Line chart with one curve per window length.
void write_sweep_svg(std::ostream& out, const SweepReport& report);

}  // namespace addrhash
