#include "addrhash/entropy.hpp"

#include "addrhash/errors.hpp"
#include "addrhash/plot.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>

namespace addrhash {

namespace {

// Hash values of trace.distinct(), computed once and re-windowed.
CellDistribution bucket_values(const std::vector<HashValue>& values, const Trace& trace,
                               BitWindow window) {
    CellDistribution d;
    d.n.assign(window.cell_count(), 0);
    d.r.assign(window.cell_count(), 0);
    d.distinct = trace.distinct_count();
    d.frames = trace.frame_count();
    for (std::size_t a = 0; a < values.size(); ++a) {
        const auto cell = extract(values[a], window).bits;
        ++d.n[cell];
        d.r[cell] += trace.counts()[a];
    }
    return d;
}

std::vector<HashValue> hash_distinct(const Trace& trace, const HashScheme& scheme) {
    std::vector<HashValue> values;
    values.reserve(trace.distinct().size());
    for (const Address& a : trace.distinct()) values.push_back(scheme.apply(a));
    return values;
}

}  // namespace

CellDistribution bucket(const Trace& trace, const HashScheme& scheme, BitWindow window) {
    validate_window(window, scheme.width());
    return bucket_values(hash_distinct(trace, scheme), trace, window);
}

double info_content(const CellDistribution& dist) {
    long double sum = 0;
    for (std::size_t i = 0; i < dist.cell_count(); ++i) {
        if (dist.r[i] == 0) continue;
        sum -= static_cast<long double>(dist.q(i)) * std::log2(static_cast<long double>(dist.p(i)));
    }
    return std::max(0.0, static_cast<double>(sum));
}

double address_entropy(const CellDistribution& dist) {
    long double sum = 0;
    for (std::size_t i = 0; i < dist.cell_count(); ++i) {
        if (dist.n[i] == 0) continue;
        const long double p = dist.p(i);
        sum -= p * std::log2(p);
    }
    return std::max(0.0, static_cast<double>(sum));
}

LookupCost simulate_lookups(const Trace& trace, const HashScheme& scheme, BitWindow window) {
    validate_window(window, scheme.width());

    // Subtable sizes come from the distinct set; cost is then charged per frame.
    std::vector<std::uint64_t> subtable(window.cell_count(), 0);
    for (const Address& a : trace.distinct()) ++subtable[hash_index(a, scheme, window)];

    long double cost = 0;
    std::uint64_t steps = 0;
    for (const Address& a : trace.refs()) {
        const std::uint64_t n = subtable[hash_index(a, scheme, window)];
        cost += std::log2(2.0L * static_cast<long double>(n));
        steps += std::bit_width(n);
    }

    const long double frames = static_cast<long double>(trace.frame_count());
    LookupCost out;
    out.avg_lookups = static_cast<double>(cost / frames);
    out.saved = static_cast<double>(
        std::log2(2.0L * static_cast<long double>(trace.distinct_count())) - cost / frames);
    out.avg_steps = static_cast<double>(static_cast<long double>(steps) / frames);
    out.baseline_steps = static_cast<double>(std::bit_width(trace.distinct_count()));
    return out;
}

Range Range::parse(std::string_view text) {
    auto number = [&](std::string_view part) {
        unsigned v = 0;
        const auto* end = part.data() + part.size();
        auto [ptr, ec] = std::from_chars(part.data(), end, v);
        if (part.empty() || ec != std::errc{} || ptr != end)
            throw ParseError("range '" + std::string(text) + "' is not lo..hi");
        return v;
    };
    const auto dots = text.find("..");
    if (dots == std::string_view::npos) {
        const unsigned v = number(text);
        return {v, v};
    }
    Range r{number(text.substr(0, dots)), number(text.substr(dots + 2))};
    if (r.lo > r.hi) throw ParseError("range '" + std::string(text) + "' has lo > hi");
    return r;
}

SweepReport sweep(const Trace& trace, const HashScheme& scheme, Range lengths, Range starts,
                  unsigned threads) {
    SweepReport report;
    report.scheme = scheme.name();
    report.width = scheme.width();
    report.lengths = lengths;
    report.starts = starts;

    if (lengths.lo < 1 || lengths.hi > BitWindow::kMaxLength || lengths.lo > lengths.hi)
        throw RangeError("window lengths " + std::to_string(lengths.lo) + ".." +
                         std::to_string(lengths.hi) + " outside 1.." +
                         std::to_string(BitWindow::kMaxLength));
    for (unsigned m = lengths.lo; m <= lengths.hi; ++m)
        for (unsigned i = starts.lo; i <= starts.hi && i + m <= scheme.width(); ++i)
            report.rows.push_back({i, m, 0.0});
    if (report.rows.empty())
        throw EmptyRangeError("no window of length " + std::to_string(lengths.lo) + ".." +
                              std::to_string(lengths.hi) + " starting at " +
                              std::to_string(starts.lo) + ".." + std::to_string(starts.hi) +
                              " fits scheme '" + scheme.name() + "' (width " +
                              std::to_string(scheme.width()) + ")");

    const auto values = hash_distinct(trace, scheme);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k; (k = next.fetch_add(1)) < report.rows.size();) {
            SweepRow& row = report.rows[k];
            row.info_bits = info_content(bucket_values(values, trace, {row.start, row.length}));
        }
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, report.rows.size()));
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    return report;
}

void write_sweep_csv(std::ostream& out, const SweepReport& report) {
    out << "scheme,start_bit,window_len,info_bits\n";
    char buf[64];
    for (const SweepRow& row : report.rows) {
        std::snprintf(buf, sizeof buf, "%.17g", row.info_bits);
        out << report.scheme << ',' << row.start << ',' << row.length << ',' << buf << '\n';
    }
}

void write_sweep_svg(std::ostream& out, const SweepReport& report) {
    std::vector<PlotSeries> series;
    PlotAxes axes;
    axes.title = "Information in " + report.scheme + " bits";
    axes.x_label = "start bit i";
    axes.y_label = "information (bits)";
    axes.x_min = report.rows.empty() ? 0 : report.rows.front().start;
    axes.x_max = axes.x_min;
    axes.y_max = 1;
    for (const SweepRow& row : report.rows) {
        if (series.empty() || series.back().label != "m=" + std::to_string(row.length))
            series.push_back({"m=" + std::to_string(row.length), {}});
        series.back().points.emplace_back(row.start, row.info_bits);
        axes.x_min = std::min<double>(axes.x_min, row.start);
        axes.x_max = std::max<double>(axes.x_max, row.start);
        axes.y_max = std::max(axes.y_max, std::ceil(row.info_bits));
    }
    write_line_chart(out, axes, series);
}

}  // namespace addrhash
