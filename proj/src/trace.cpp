#include "addrhash/trace.hpp"

#include "addrhash/errors.hpp"
#include "addrhash/random.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace addrhash {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

constexpr std::uint64_t kSuffixSpace = std::uint64_t{1} << 24;
constexpr std::uint32_t kDefaultOui = 0x08002B;

}  // namespace

Trace::Trace(std::vector<Address> refs) : refs_(std::move(refs)) {
    if (refs_.empty()) throw EmptyTraceError();

    std::vector<Address> sorted = refs_;
    std::sort(sorted.begin(), sorted.end());
    for (const Address& a : sorted) {
        if (distinct_.empty() || distinct_.back() != a) {
            distinct_.push_back(a);
            counts_.push_back(0);
        }
        ++counts_.back();
    }
}

Trace parse_trace(std::istream& in) {
    std::vector<Address> refs;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        const std::string_view body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        try {
            refs.push_back(Address::parse(body));
        } catch (const ParseError&) {
            throw ParseError("line " + std::to_string(number) + ": malformed address '" +
                                 std::string(body) + "'",
                             number, std::string(body));
        }
    }
    if (in.bad()) throw std::runtime_error("read error in trace input");
    return Trace(std::move(refs));
}

Trace read_trace_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open trace file '" + path + "'");
    try {
        return parse_trace(in);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what(), e.line(), e.text());
    }
}

void write_trace(std::ostream& out, const Trace& trace) {
    for (const Address& a : trace.refs()) out << a.to_string(':') << '\n';
}

VendorPrefix VendorPrefix::parse(std::string_view text) {
    VendorPrefix p;
    std::string_view oui = text;
    if (const auto at = text.find('@'); at != std::string_view::npos) {
        oui = text.substr(0, at);
        const std::string w(text.substr(at + 1));
        std::size_t used = 0;
        try {
            p.weight = std::stod(w, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (w.empty() || used != w.size() || !(p.weight > 0) || !std::isfinite(p.weight))
            throw ParseError("bad prefix weight in '" + std::string(text) + "'");
    }
    // Reuse the address parser by padding with three zero octets.
    if (oui.size() != 8) throw ParseError("bad vendor prefix '" + std::string(text) + "'");
    const char sep = oui[2];
    const std::string padded = std::string(oui) + sep + "00" + sep + "00" + sep + "00";
    try {
        p.oui = static_cast<std::uint32_t>(Address::parse(padded).to_u64() >> 24);
    } catch (const ParseError&) {
        throw ParseError("bad vendor prefix '" + std::string(text) + "'");
    }
    return p;
}

void SynthConfig::validate() const {
    if (stations < 1) throw std::invalid_argument("stations must be >= 1");
    if (frames < stations) throw std::invalid_argument("frames must be >= stations");
    if (!(skew >= 0) || !std::isfinite(skew)) throw std::invalid_argument("skew must be >= 0");
    if (!(serial_run >= 1) || !std::isfinite(serial_run))
        throw std::invalid_argument("serial_run must be >= 1");
    for (const auto& p : prefixes) {
        if (!(p.weight > 0) || !std::isfinite(p.weight))
            throw std::invalid_argument("prefix weights must be positive");
        if (p.oui >= kSuffixSpace) throw std::invalid_argument("prefix exceeds 24 bits");
    }
}

SynthConfig parse_synth_config(std::istream& in, SynthConfig base) {
    bool prefixes_replaced = false;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        std::string_view body = line;
        if (const auto hash = body.find('#'); hash != std::string_view::npos)
            body = body.substr(0, hash);
        body = trim(body);
        if (body.empty()) continue;

        const auto eq = body.find('=');
        if (eq == std::string_view::npos)
            throw ParseError("line " + std::to_string(number) + ": expected key = value", number,
                             std::string(body));
        const std::string_view key = trim(body.substr(0, eq));
        const std::string_view value = trim(body.substr(eq + 1));
        auto fail = [&] {
            return ParseError("line " + std::to_string(number) + ": bad value for '" +
                                  std::string(key) + "'",
                              number, std::string(body));
        };
        auto as_u64 = [&] {
            std::uint64_t v = 0;
            auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
            if (value.empty() || ec != std::errc{} || ptr != value.data() + value.size())
                throw fail();
            return v;
        };
        auto as_double = [&] {
            const std::string v(value);
            std::size_t used = 0;
            double d = 0;
            try {
                d = std::stod(v, &used);
            } catch (const std::exception&) {
                throw fail();
            }
            if (used != v.size()) throw fail();
            return d;
        };

        if (key == "stations") {
            base.stations = as_u64();
        } else if (key == "frames") {
            base.frames = as_u64();
        } else if (key == "seed") {
            base.seed = as_u64();
        } else if (key == "skew") {
            base.skew = as_double();
        } else if (key == "serial_run") {
            base.serial_run = as_double();
        } else if (key == "prefix") {
            if (!prefixes_replaced) {
                base.prefixes.clear();
                prefixes_replaced = true;
            }
            try {
                base.prefixes.push_back(VendorPrefix::parse(value));
            } catch (const ParseError&) {
                throw fail();
            }
        } else {
            throw ParseError("line " + std::to_string(number) + ": unknown key '" +
                                 std::string(key) + "'",
                             number, std::string(body));
        }
    }
    return base;
}

Trace synthesize(const SynthConfig& config) {
    config.validate();
    std::vector<VendorPrefix> prefixes = config.prefixes;
    if (prefixes.empty()) prefixes.push_back({kDefaultOui, 1.0});

    std::set<std::uint32_t> unique_ouis;
    for (const auto& p : prefixes) unique_ouis.insert(p.oui);
    if (config.stations > unique_ouis.size() * kSuffixSpace)
        throw CapacityError("cannot place " + std::to_string(config.stations) + " stations under " +
                            std::to_string(unique_ouis.size()) + " vendor prefixes");

    Rng rng(config.seed);

    std::vector<double> prefix_cdf;
    double total = 0;
    for (const auto& p : prefixes) prefix_cdf.push_back(total += p.weight);

    std::vector<Address> stations;
    stations.reserve(config.stations);
    std::unordered_set<std::uint64_t> used;
    std::vector<std::uint64_t> per_prefix(prefixes.size(), 0);
    auto oui_full = [&](std::size_t idx) {
        std::uint64_t n = 0;
        for (std::size_t j = 0; j < prefixes.size(); ++j)
            if (prefixes[j].oui == prefixes[idx].oui) n += per_prefix[j];
        return n >= kSuffixSpace;
    };

    // A run continues the previous station's serial number under the same
    // prefix; with serial_run == 1 every station starts a fresh run.
    const double continue_run = 1.0 - 1.0 / config.serial_run;
    bool in_run = false;
    std::size_t idx = 0;
    std::uint64_t suffix = 0;
    while (stations.size() < config.stations) {
        std::uint64_t value = 0;
        if (in_run) {
            suffix = (suffix + 1 + rng.below(3)) % kSuffixSpace;
            value = (std::uint64_t{prefixes[idx].oui} << 24) | suffix;
            if (!used.insert(value).second) continue;
        } else {
            idx = static_cast<std::size_t>(
                std::upper_bound(prefix_cdf.begin(), prefix_cdf.end(), rng.unit() * total) -
                prefix_cdf.begin());
            idx = std::min(idx, prefixes.size() - 1);
            while (oui_full(idx)) idx = (idx + 1) % prefixes.size();

            const std::uint64_t base = std::uint64_t{prefixes[idx].oui} << 24;
            do {
                suffix = rng.below(kSuffixSpace);
                value = base | suffix;
            } while (!used.insert(value).second);
        }
        ++per_prefix[idx];
        stations.push_back(Address::from_u64(value));
        in_run = config.serial_run > 1 && rng.unit() < continue_run && !oui_full(idx);
    }

    // Rank j (0-based) is referenced with weight (j + 1)^-skew.
    std::vector<double> zipf_cdf;
    zipf_cdf.reserve(stations.size());
    double zipf_total = 0;
    for (std::size_t j = 0; j < stations.size(); ++j)
        zipf_cdf.push_back(zipf_total += std::pow(static_cast<double>(j + 1), -config.skew));

    std::vector<Address> refs = stations;
    refs.reserve(config.frames);
    for (std::uint64_t f = stations.size(); f < config.frames; ++f) {
        auto it = std::upper_bound(zipf_cdf.begin(), zipf_cdf.end(), rng.unit() * zipf_total);
        const std::size_t j =
            std::min(static_cast<std::size_t>(it - zipf_cdf.begin()), stations.size() - 1);
        refs.push_back(stations[j]);
    }

    for (std::size_t i = refs.size() - 1; i > 0; --i) std::swap(refs[i], refs[rng.below(i + 1)]);

    return Trace(std::move(refs));
}

TraceStats trace_stats(const Trace& trace, std::size_t top_n) {
    TraceStats s;
    s.frames = trace.frame_count();
    s.distinct = trace.distinct_count();

    std::vector<std::pair<Address, std::uint64_t>> ranked;
    ranked.reserve(trace.distinct().size());
    for (std::size_t i = 0; i < trace.distinct().size(); ++i)
        ranked.emplace_back(trace.distinct()[i], trace.counts()[i]);
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });

    const double r = static_cast<double>(s.frames);
    s.top1_share = static_cast<double>(ranked.front().second) / r;
    std::uint64_t cumulative = 0;
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        cumulative += ranked[i].second;
        if (i < 10) s.top10_share = static_cast<double>(cumulative) / r;
        if (s.stations_for_half == 0 && 2 * cumulative >= s.frames) s.stations_for_half = i + 1;
        if (s.stations_for_90 == 0 && 10 * cumulative >= 9 * s.frames) s.stations_for_90 = i + 1;
    }
    ranked.resize(std::min(top_n, ranked.size()));
    s.top = std::move(ranked);
    return s;
}

void print_stats(std::ostream& out, const TraceStats& s) {
    out << "frames: " << s.frames << '\n'
        << "distinct: " << s.distinct << '\n'
        << std::setprecision(6) << "top1_share: " << s.top1_share << '\n'
        << "top10_share: " << s.top10_share << '\n'
        << "stations_for_50pct: " << s.stations_for_half << '\n'
        << "stations_for_90pct: " << s.stations_for_90 << '\n'
        << "top:\n";
    for (const auto& [addr, count] : s.top)
        out << "  " << addr.to_string() << ' ' << count << ' '
            << static_cast<double>(count) / static_cast<double>(s.frames) << '\n';
}

}  // namespace addrhash
