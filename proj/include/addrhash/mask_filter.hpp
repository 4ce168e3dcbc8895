#pragma once

#include "addrhash/hash_functions.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace addrhash {

/// An M x 1 bit rejection filter: a frame is accepted iff the mask bit at
/// its hash index is set. Wanted addresses are never rejected.
class HashMask {
public:
    /// An all-zero mask of 2^window.length cells.
    HashMask(HashScheme scheme, BitWindow window);

    /// Sets the bit of every wanted address. Duplicates count once toward k.
    static HashMask build(std::span<const Address> wanted, const HashScheme& scheme,
                          BitWindow window);

    bool accepts(const Address& addr) const { return bits_[hash_index(addr, scheme_, window_)]; }

    std::size_t size() const { return bits_.size(); }  // M
    std::size_t wanted_count() const { return wanted_; }  // k
    std::size_t set_count() const;
    bool bit(std::size_t i) const { return bits_.at(i); }
    const HashScheme& scheme() const { return scheme_; }
    BitWindow window() const { return window_; }

    /// Cell 0 is the most significant bit of the first hex digit.
    std::string to_hex() const;

private:
    HashScheme scheme_;
    BitWindow window_;
    std::vector<bool> bits_;
    std::size_t wanted_ = 0;
};

HashMask build_mask(std::span<const Address> wanted, const HashScheme& scheme, BitWindow window);
bool filter_accepts(const HashMask& mask, const Address& addr);

/// (1 - 1/M)^k: expected fraction of zero cells after k uniform insertions.
double analytic_rejection_rate(std::uint64_t k, std::uint64_t mask_size);

/// max(0, 1 - k/M), the M >> k regime.
double approx_rejection_rate(std::uint64_t k, std::uint64_t mask_size);

struct MaskSizing {
    std::uint64_t power_of_two = 1;  // smallest 2^j with analytic rate >= target
    std::uint64_t linear = 0;        // ceil(k / (1 - target))
};

/// Throws UnsatisfiableError for target >= 1 and std::invalid_argument for
/// negative or NaN targets.
MaskSizing mask_size_for(double target_rate, std::uint64_t k);

struct EmpiricalRate {
    double rate = 0;
    double standard_error = 0;
    double ci_halfwidth = 0;  // 95% normal approximation
    std::uint64_t trials = 0;
    std::uint64_t rejections = 0;
};

/// Monte-Carlo unwanted-rejection rate. Each trial draws k distinct wanted
/// addresses and one unwanted address uniformly from the 48-bit space, with
/// randomness derived from (seed, trial index) only.
EmpiricalRate empirical_rejection_rate(const HashScheme& scheme, BitWindow window, std::uint64_t k,
                                       std::uint64_t trials, std::uint64_t seed,
                                       unsigned threads = 0);

enum class RateModel { Analytic, Approximate, Empirical };

const char* to_string(RateModel model);

struct CurveRow {
    std::uint64_t k = 0;
    std::uint64_t mask_size = 0;
    double rate = 0;
    std::optional<double> ci_halfwidth;
};

struct RejectionCurve {
    RateModel model = RateModel::Analytic;
    std::vector<CurveRow> rows;  // ordered by (M, k)
};

struct EmpiricalOptions {
    HashScheme scheme = HashScheme::crc32();
    std::uint64_t trials = 10000;
    std::uint64_t seed = 1989;
};

/// Mask sizes of the classic figure: 2, 4, ..., 128 and 512.
const std::vector<std::uint64_t>& default_mask_sizes();

/// Evaluates `model` at every (k, M), k in [k_lo, k_hi]. Empirical rows use
/// window (0, log2 M) of options.scheme, so M must be a power of two there.
RejectionCurve rejection_curve(std::vector<std::uint64_t> mask_sizes, std::uint64_t k_lo,
                               std::uint64_t k_hi, RateModel model,
                               const EmpiricalOptions& options = {});

void write_curve_csv(std::ostream& out, const RejectionCurve& curve);
void write_curve_svg(std::ostream& out, const RejectionCurve& curve);

}  // namespace addrhash
