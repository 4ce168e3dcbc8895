#include "addrhash/cli.hpp"

#include "addrhash/entropy.hpp"
#include "addrhash/errors.hpp"
#include "addrhash/hash_functions.hpp"
#include "addrhash/mask_filter.hpp"
#include "addrhash/trace.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

namespace addrhash::cli {

namespace {

// A flag value that parsed as a string but is not valid for its flag.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <typename F>
auto flag_value(const std::string& flag, const std::string& text, F&& parse) {
    try {
        return parse(text);
    } catch (const std::exception& e) {
        throw UsageError("invalid value '" + text + "' for " + flag + ": " + e.what());
    }
}

class Output {
public:
    Output(const std::string& path, std::ostream& standard) {
        if (path == "-") {
            stream_ = &standard;
        } else {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) throw std::runtime_error("cannot open '" + path + "' for writing");
            stream_ = file_.get();
        }
    }
    std::ostream& operator*() { return *stream_; }

    void close() {
        stream_->flush();
        if (!*stream_) throw std::runtime_error("write failed");
    }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_ = nullptr;
};

Trace load_trace(const std::string& path, std::istream& in) {
    if (path == "-") {
        try {
            return parse_trace(in);
        } catch (const ParseError& e) {
            throw ParseError(std::string("<stdin>: ") + e.what(), e.line(), e.text());
        }
    }
    return read_trace_file(path);
}

std::string fixed(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::vector<std::uint64_t> parse_sizes(const std::string& text) {
    std::vector<std::uint64_t> sizes;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        const auto v = std::stoull(item, &used);
        if (used != item.size() || v == 0) throw std::invalid_argument("expected positive integers");
        sizes.push_back(v);
    }
    if (sizes.empty()) throw std::invalid_argument("empty list");
    return sizes;
}

struct KRange {
    std::uint64_t lo = 0, hi = 0;
};

KRange parse_k(const std::string& text) {
    const auto dots = text.find("..");
    auto number = [](const std::string& s) {
        std::size_t used = 0;
        const auto v = std::stoull(s, &used);
        if (used != s.size() || s.front() == '-') throw std::invalid_argument("expected integer");
        return v;
    };
    if (dots == std::string::npos) return {number(text), number(text)};
    KRange r{number(text.substr(0, dots)), number(text.substr(dots + 2))};
    if (r.lo > r.hi) throw std::invalid_argument("lo > hi");
    return r;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
    CLI::App app{"Address hashing analysis: information content of hash schemes and hash-mask filter sizing",
                 "addrhash"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "Write a synthetic address trace");
    std::string synth_config, synth_out = "-";
    std::uint64_t stations = 0, frames = 0, seed = 0;
    double skew = 0, serial_run = 1;
    std::vector<std::string> prefixes;
    synth->add_option("--config", synth_config, "key = value file (stations, frames, skew, seed, prefix, serial_run)");
    auto* o_stations = synth->add_option("--stations", stations, "Distinct stations N");
    auto* o_frames = synth->add_option("--frames", frames, "Frames R");
    auto* o_skew = synth->add_option("--skew", skew, "Zipf exponent (0 = uniform)");
    auto* o_seed = synth->add_option("--seed", seed, "RNG seed (default 1989)");
    auto* o_serial = synth->add_option("--serial-run", serial_run, "Mean stations per run of nearby serial numbers (default 1)");
    synth->add_option("--prefix", prefixes, "Vendor prefix aa:bb:cc[@weight], repeatable");
    synth->add_option("--out", synth_out, "Output path, - for stdout");

    // stats
    auto* stats = app.add_subcommand("stats", "Summarize a trace");
    std::string stats_trace;
    std::size_t top = 10;
    stats->add_option("--trace", stats_trace, "Trace file, - for stdin")->required();
    stats->add_option("--top", top, "Number of top addresses to list");

    // info / lookup share flags
    std::string trace_path, scheme_name, window_text;
    auto add_window_flags = [&](CLI::App* cmd) {
        cmd->add_option("--trace", trace_path, "Trace file, - for stdin")->required();
        cmd->add_option("--scheme", scheme_name, "Hash scheme (see `schemes`)")->required();
        cmd->add_option("--window", window_text, "Bit window start:length")->required();
    };
    auto* info = app.add_subcommand("info", "Information content of one hash window");
    add_window_flags(info);
    auto* lookup = app.add_subcommand("lookup", "Simulated binary-search lookups per frame");
    add_window_flags(lookup);

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "Information content over all bit windows");
    std::string sweep_trace, sweep_scheme, m_text = "1..8", i_text, sweep_out = "-", sweep_svg;
    sweep_cmd->add_option("--trace", sweep_trace, "Trace file, - for stdin")->required();
    sweep_cmd->add_option("--scheme", sweep_scheme, "Hash scheme")->required();
    sweep_cmd->add_option("--m", m_text, "Window lengths lo..hi (default 1..8)");
    sweep_cmd->add_option("--i", i_text, "Start bits lo..hi (default every start)");
    sweep_cmd->add_option("--out", sweep_out, "CSV output path, - for stdout");
    sweep_cmd->add_option("--svg", sweep_svg, "Also write an SVG chart here");

    // mask
    auto* mask = app.add_subcommand("mask", "Hash-mask rejection rates and sizing");
    bool analytic = false, approx = false, empirical = false, curve_flag = false;
    std::string k_text, m_sizes, mask_out, mask_svg, mask_scheme = "crc32", wanted_path, mask_window;
    double target = 0;
    std::uint64_t trials = 10000, mask_seed = 1989;
    auto* o_analytic = mask->add_flag("--analytic", analytic, "(1 - 1/M)^k model (default)");
    auto* o_approx = mask->add_flag("--approx", approx, "1 - k/M model");
    auto* o_empirical = mask->add_flag("--empirical", empirical, "Monte-Carlo with --scheme");
    o_analytic->excludes(o_approx)->excludes(o_empirical);
    o_approx->excludes(o_empirical);
    mask->add_option("--k", k_text, "Wanted addresses, n or lo..hi");
    mask->add_option("--M", m_sizes, "Mask size(s), comma separated");
    auto* o_target = mask->add_option("--target", target, "Report the mask size reaching this rejection rate");
    mask->add_flag("--curve", curve_flag, "Emit a CSV curve even for a single point");
    auto* o_mask_out = mask->add_option("--out", mask_out, "CSV output path, - for stdout");
    mask->add_option("--svg", mask_svg, "Also write an SVG chart here");
    mask->add_option("--scheme", mask_scheme, "Scheme for --empirical and --wanted (default crc32)");
    mask->add_option("--trials", trials, "Monte-Carlo trials per point (default 10000)");
    mask->add_option("--seed", mask_seed, "Monte-Carlo seed (default 1989)");
    auto* o_wanted = mask->add_option("--wanted", wanted_path, "Build a mask from the addresses in this file and print it");
    mask->add_option("--window", mask_window, "Window start:length for --wanted");
    o_wanted->excludes(o_target);

    auto* schemes = app.add_subcommand("schemes", "List hash schemes and output widths");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*schemes) {
            for (const auto& name : HashScheme::names())
                out << name << ' ' << HashScheme::parse(name).width() << '\n';
            return kExitOk;
        }

        if (*synth) {
            SynthConfig config;
            if (!synth_config.empty()) {
                std::ifstream file(synth_config);
                if (!file) throw std::runtime_error("cannot open config '" + synth_config + "'");
                try {
                    config = parse_synth_config(file, config);
                } catch (const ParseError& e) {
                    throw ParseError(synth_config + ": " + e.what(), e.line(), e.text());
                }
            }
            if (o_stations->count()) config.stations = stations;
            if (o_frames->count()) config.frames = frames;
            if (o_skew->count()) config.skew = skew;
            if (o_seed->count()) config.seed = seed;
            if (o_serial->count()) config.serial_run = serial_run;
            if (!prefixes.empty()) {
                config.prefixes.clear();
                for (const auto& p : prefixes)
                    config.prefixes.push_back(flag_value("--prefix", p, VendorPrefix::parse));
            }
            try {
                config.validate();
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
            const Trace trace = synthesize(config);
            Output sink(synth_out, out);
            write_trace(*sink, trace);
            sink.close();
            return kExitOk;
        }

        if (*stats) {
            print_stats(out, trace_stats(load_trace(stats_trace, in), top));
            return kExitOk;
        }

        if (*info || *lookup) {
            const auto scheme = flag_value("--scheme", scheme_name, HashScheme::parse);
            const auto window = flag_value("--window", window_text, parse_window);
            try {
                validate_window(window, scheme.width());
            } catch (const RangeError& e) {
                throw UsageError(std::string("--window: ") + e.what());
            }
            const Trace trace = load_trace(trace_path, in);
            const auto dist = bucket(trace, scheme, window);
            if (*info) {
                out << "scheme: " << scheme.name() << '\n'
                    << "window: " << window.start << ':' << window.length << '\n'
                    << "frames: " << trace.frame_count() << '\n'
                    << "distinct: " << trace.distinct_count() << '\n'
                    << "cells: " << dist.cell_count() << '\n'
                    << "occupied_cells: "
                    << std::count_if(dist.n.begin(), dist.n.end(), [](auto n) { return n > 0; }) << '\n'
                    << "info_bits: " << fixed(info_content(dist), 12) << '\n'
                    << "address_entropy_bits: " << fixed(address_entropy(dist), 12) << '\n';
            } else {
                const auto cost = simulate_lookups(trace, scheme, window);
                out << "scheme: " << scheme.name() << '\n'
                    << "window: " << window.start << ':' << window.length << '\n'
                    << "baseline_lookups: " << fixed(std::log2(2.0 * static_cast<double>(trace.distinct_count())), 12) << '\n'
                    << "avg_lookups: " << fixed(cost.avg_lookups, 12) << '\n'
                    << "saved_per_frame: " << fixed(cost.saved, 12) << '\n'
                    << "info_bits: " << fixed(info_content(dist), 12) << '\n'
                    << "baseline_steps: " << fixed(cost.baseline_steps) << '\n'
                    << "avg_steps: " << fixed(cost.avg_steps) << '\n';
            }
            return kExitOk;
        }

        if (*sweep_cmd) {
            const auto scheme = flag_value("--scheme", sweep_scheme, HashScheme::parse);
            const auto lengths = flag_value("--m", m_text, Range::parse);
            const auto starts = i_text.empty() ? Range{0, scheme.width() - 1}
                                               : flag_value("--i", i_text, Range::parse);
            const Trace trace = load_trace(sweep_trace, in);
            const auto report = sweep(trace, scheme, lengths, starts);
            Output sink(sweep_out, out);
            write_sweep_csv(*sink, report);
            sink.close();
            if (!sweep_svg.empty()) {
                Output svg(sweep_svg, out);
                write_sweep_svg(*svg, report);
                svg.close();
            }
            return kExitOk;
        }

        if (*mask) {
            const RateModel model = empirical ? RateModel::Empirical
                                    : approx  ? RateModel::Approximate
                                              : RateModel::Analytic;
            const auto scheme = flag_value("--scheme", mask_scheme, HashScheme::parse);

            if (!wanted_path.empty()) {
                if (mask_window.empty()) throw UsageError("--wanted requires --window");
                const auto window = flag_value("--window", mask_window, parse_window);
                const Trace wanted = load_trace(wanted_path, in);
                const auto built = build_mask(wanted.distinct(), scheme, window);
                out << "M: " << built.size() << '\n'
                    << "k: " << built.wanted_count() << '\n'
                    << "set_bits: " << built.set_count() << '\n'
                    << "mask: " << built.to_hex() << '\n'
                    << "analytic_rate: " << fixed(analytic_rejection_rate(built.wanted_count(), built.size())) << '\n'
                    << "actual_rate: " << fixed(1.0 - static_cast<double>(built.set_count()) / static_cast<double>(built.size())) << '\n';
                return kExitOk;
            }

            if (o_target->count()) {
                if (k_text.empty()) throw UsageError("--target requires --k");
                const auto k = flag_value("--k", k_text, parse_k);
                if (k.lo != k.hi) throw UsageError("--target takes a single --k");
                const auto sizing = mask_size_for(target, k.lo);
                out << "M: " << sizing.power_of_two << '\n'
                    << "linear_M: " << sizing.linear << '\n'
                    << "rate_at_M: " << fixed(analytic_rejection_rate(k.lo, sizing.power_of_two)) << '\n';
                return kExitOk;
            }

            const auto k = k_text.empty() ? KRange{1, 100} : flag_value("--k", k_text, parse_k);
            const auto sizes =
                m_sizes.empty() ? default_mask_sizes() : flag_value("--M", m_sizes, parse_sizes);
            EmpiricalOptions options{scheme, trials, mask_seed};
            if (model == RateModel::Empirical && trials == 0) throw UsageError("--trials must be >= 1");

            const bool single = k.lo == k.hi && sizes.size() == 1;
            if (single && !curve_flag && !o_mask_out->count() && mask_svg.empty()) {
                if (model == RateModel::Empirical) {
                    if (!std::has_single_bit(sizes[0]) || sizes[0] < 2)
                        throw UsageError("--empirical needs --M a power of two >= 2");
                    const BitWindow window{0, static_cast<unsigned>(std::countr_zero(sizes[0]))};
                    const auto e = empirical_rejection_rate(scheme, window, k.lo, trials, mask_seed);
                    out << fixed(e.rate) << " +/- " << fixed(e.ci_halfwidth) << '\n';
                } else {
                    out << fixed(model == RateModel::Analytic ? analytic_rejection_rate(k.lo, sizes[0])
                                                              : approx_rejection_rate(k.lo, sizes[0]))
                        << '\n';
                }
                return kExitOk;
            }

            const auto curve = rejection_curve(sizes, k.lo, k.hi, model, options);
            Output sink(mask_out.empty() ? "-" : mask_out, out);
            write_curve_csv(*sink, curve);
            sink.close();
            if (!mask_svg.empty()) {
                Output svg(mask_svg, out);
                write_curve_svg(*svg, curve);
                svg.close();
            }
            return kExitOk;
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}

}  // namespace addrhash::cli
