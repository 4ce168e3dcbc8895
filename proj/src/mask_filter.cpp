#include "addrhash/mask_filter.hpp"

#include "addrhash/errors.hpp"
#include "addrhash/plot.hpp"
#include "addrhash/random.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <unordered_set>

namespace addrhash {

HashMask::HashMask(HashScheme scheme, BitWindow window)
    : scheme_(std::move(scheme)), window_(window) {
    validate_window(window_, scheme_.width());
    bits_.assign(window_.cell_count(), false);
}

HashMask HashMask::build(std::span<const Address> wanted, const HashScheme& scheme,
                         BitWindow window) {
    HashMask mask(scheme, window);
    std::unordered_set<Address> seen;
    for (const Address& a : wanted) {
        mask.bits_[hash_index(a, scheme, window)] = true;
        seen.insert(a);
    }
    mask.wanted_ = seen.size();
    return mask;
}

std::size_t HashMask::set_count() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), true));
}

std::string HashMask::to_hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    for (std::size_t i = 0; i < bits_.size(); i += 4) {
        unsigned nibble = 0;
        for (std::size_t j = 0; j < 4; ++j)
            nibble = (nibble << 1) | (i + j < bits_.size() && bits_[i + j] ? 1u : 0u);
        out += kDigits[nibble];
    }
    return out;
}

HashMask build_mask(std::span<const Address> wanted, const HashScheme& scheme, BitWindow window) {
    return HashMask::build(wanted, scheme, window);
}

bool filter_accepts(const HashMask& mask, const Address& addr) { return mask.accepts(addr); }

double analytic_rejection_rate(std::uint64_t k, std::uint64_t mask_size) {
    if (mask_size == 0) throw std::invalid_argument("mask size must be >= 1");
    return std::pow(1.0 - 1.0 / static_cast<double>(mask_size), static_cast<double>(k));
}

double approx_rejection_rate(std::uint64_t k, std::uint64_t mask_size) {
    if (mask_size == 0) throw std::invalid_argument("mask size must be >= 1");
    return std::max(0.0, 1.0 - static_cast<double>(k) / static_cast<double>(mask_size));
}

MaskSizing mask_size_for(double target_rate, std::uint64_t k) {
    if (std::isnan(target_rate) || target_rate < 0)
        throw std::invalid_argument("target rate must be in [0, 1)");
    if (target_rate >= 1)
        throw UnsatisfiableError("no finite mask rejects every unwanted frame");

    MaskSizing out;
    // 1 - 0.8 is not exact in binary; snap quotients within rounding noise of
    // an integer before taking the ceiling.
    const double linear = static_cast<double>(k) / (1.0 - target_rate);
    const double nearest = std::round(linear);
    out.linear = static_cast<std::uint64_t>(std::abs(linear - nearest) <= 1e-9 * std::max(1.0, linear)
                                                ? nearest
                                                : std::ceil(linear));

    while (analytic_rejection_rate(k, out.power_of_two) < target_rate) {
        if (out.power_of_two >= (std::uint64_t{1} << 62))
            throw UnsatisfiableError("target rate needs a mask beyond 2^62 cells");
        out.power_of_two <<= 1;
    }
    return out;
}

namespace {

// Counter-based stream so each trial's draws depend only on its own seed.
class TrialStream {
public:
    explicit TrialStream(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() {
        const std::uint64_t out = splitmix64(state_);
        state_ += 0x9E3779B97F4A7C15ull;
        return out;
    }
    Address address() { return Address::from_u64(next() >> 16); }

private:
    std::uint64_t state_;
};

bool rejected_in_trial(const HashScheme& scheme, BitWindow window, std::uint64_t k,
                       std::uint64_t trial_seed) {
    TrialStream rng(trial_seed);
    std::vector<Address> wanted;
    wanted.reserve(k);
    std::unordered_set<Address> members;
    members.reserve(k);
    while (wanted.size() < k) {
        const Address a = rng.address();
        if (members.insert(a).second) wanted.push_back(a);
    }
    Address unwanted;
    do {
        unwanted = rng.address();
    } while (members.count(unwanted) != 0);
    return !HashMask::build(wanted, scheme, window).accepts(unwanted);
}

}  // namespace

EmpiricalRate empirical_rejection_rate(const HashScheme& scheme, BitWindow window, std::uint64_t k,
                                       std::uint64_t trials, std::uint64_t seed,
                                       unsigned threads) {
    if (trials == 0) throw std::invalid_argument("trials must be >= 1");
    validate_window(window, scheme.width());

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, trials));
    std::vector<std::uint64_t> rejected(threads, 0);
    auto worker = [&](unsigned t) {
        const std::uint64_t lo = trials * t / threads;
        const std::uint64_t hi = trials * (t + 1) / threads;
        for (std::uint64_t i = lo; i < hi; ++i)
            rejected[t] += rejected_in_trial(scheme, window, k, splitmix64(seed ^ splitmix64(i)));
    };
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker, t);
        worker(0);
    }

    EmpiricalRate out;
    out.trials = trials;
    for (auto r : rejected) out.rejections += r;
    out.rate = static_cast<double>(out.rejections) / static_cast<double>(trials);
    out.standard_error = std::sqrt(out.rate * (1 - out.rate) / static_cast<double>(trials));
    out.ci_halfwidth = 1.96 * out.standard_error;
    return out;
}

const char* to_string(RateModel model) {
    switch (model) {
        case RateModel::Analytic: return "analytic";
        case RateModel::Approximate: return "approximate";
        case RateModel::Empirical: return "empirical";
    }
    return "?";
}

const std::vector<std::uint64_t>& default_mask_sizes() {
    static const std::vector<std::uint64_t> sizes{2, 4, 8, 16, 32, 64, 128, 512};
    return sizes;
}

RejectionCurve rejection_curve(std::vector<std::uint64_t> mask_sizes, std::uint64_t k_lo,
                               std::uint64_t k_hi, RateModel model,
                               const EmpiricalOptions& options) {
    if (mask_sizes.empty()) throw std::invalid_argument("no mask sizes given");
    if (k_lo > k_hi) throw std::invalid_argument("empty k range");
    std::sort(mask_sizes.begin(), mask_sizes.end());
    mask_sizes.erase(std::unique(mask_sizes.begin(), mask_sizes.end()), mask_sizes.end());

    RejectionCurve curve;
    curve.model = model;
    for (std::uint64_t m : mask_sizes) {
        if (m == 0) throw std::invalid_argument("mask size must be >= 1");
        if (model == RateModel::Empirical && (!std::has_single_bit(m) || m < 2))
            throw RangeError("empirical mask size " + std::to_string(m) +
                             " is not a power of two >= 2");
        const BitWindow window{0, static_cast<unsigned>(std::countr_zero(m))};
        for (std::uint64_t k = k_lo; k <= k_hi; ++k) {
            CurveRow row{k, m, 0.0, std::nullopt};
            switch (model) {
                case RateModel::Analytic: row.rate = analytic_rejection_rate(k, m); break;
                case RateModel::Approximate: row.rate = approx_rejection_rate(k, m); break;
                case RateModel::Empirical: {
                    const auto e = empirical_rejection_rate(options.scheme, window, k,
                                                            options.trials, options.seed);
                    row.rate = e.rate;
                    row.ci_halfwidth = e.ci_halfwidth;
                    break;
                }
            }
            curve.rows.push_back(row);
        }
    }
    return curve;
}

void write_curve_csv(std::ostream& out, const RejectionCurve& curve) {
    out << "model,M,k,rate,ci_halfwidth\n";
    char buf[64];
    for (const CurveRow& row : curve.rows) {
        std::snprintf(buf, sizeof buf, "%.17g", row.rate);
        out << to_string(curve.model) << ',' << row.mask_size << ',' << row.k << ',' << buf << ',';
        if (row.ci_halfwidth) {
            std::snprintf(buf, sizeof buf, "%.17g", *row.ci_halfwidth);
            out << buf;
        }
        out << '\n';
    }
}

void write_curve_svg(std::ostream& out, const RejectionCurve& curve) {
    PlotAxes axes;
    axes.title = std::string("Probability of rejecting unwanted frames (") + to_string(curve.model) + ")";
    axes.x_label = "addresses wanted k";
    axes.y_label = "unwanted-rejection rate";
    axes.x_min = curve.rows.empty() ? 0 : static_cast<double>(curve.rows.front().k);
    axes.x_max = axes.x_min + 1;
    std::vector<PlotSeries> series;
    for (const CurveRow& row : curve.rows) {
        const std::string label = "M=" + std::to_string(row.mask_size);
        if (series.empty() || series.back().label != label) series.push_back({label, {}});
        series.back().points.emplace_back(static_cast<double>(row.k), row.rate);
        axes.x_min = std::min(axes.x_min, static_cast<double>(row.k));
        axes.x_max = std::max(axes.x_max, static_cast<double>(row.k));
    }
    write_line_chart(out, axes, series);
}

}  // namespace addrhash
