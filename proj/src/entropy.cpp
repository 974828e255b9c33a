#include "qrng/entropy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "qrng/stats.hpp"

namespace qrng {

void AdcGeometry::validate() const {
    if (bits == 0 || bits > 16)
        throw std::invalid_argument("adc: bits must be in 1..16");
    if (!(full_scale_mv > 0.0))
        throw std::invalid_argument("adc: full scale must be positive");
}

void EntropyModel::validate() const {
    if (!(gamma > 0.0))
        throw std::invalid_argument("entropy model: gamma must be positive");
    if (!(mean_square_voltage_mv2 > 0.0))
        throw std::invalid_argument("entropy model: <V^2> must be positive");
    adc.validate();
}

double sigma_q_mv(const EntropyModel& model) {
    model.validate();
    return std::sqrt(model.gamma / (model.gamma + 1.0) * model.mean_square_voltage_mv2);
}

MinEntropyResult min_entropy_gaussian(double sigma_mv, const AdcGeometry& adc,
                                      std::optional<double> mean_mv) {
    adc.validate();
    if (!(sigma_mv > 0.0))
        throw std::invalid_argument("min_entropy_gaussian: sigma must be positive");

    const double mu = mean_mv.value_or(adc.mid_scale_mv());
    const double lsb = adc.lsb_mv();
    const std::uint32_t codes = adc.codes();

    MinEntropyResult r;
    r.p_max = 0.0;
    for (std::uint32_t c = 0; c < codes; ++c) {
        // Edge codes absorb the clipped tails (saturating quantizer).
        const double lo = c == 0 ? -HUGE_VAL : (adc.offset_mv + c * lsb - mu) / sigma_mv;
        const double hi = c == codes - 1 ? HUGE_VAL : (adc.offset_mv + (c + 1) * lsb - mu) / sigma_mv;
        const double p = stats::normal_cdf(hi) - stats::normal_cdf(lo);
        if (p > r.p_max) {
            r.p_max = p;
            r.argmax_code = c;
        }
    }
    r.degenerate = r.p_max >= 1.0 - std::ldexp(1.0, -64);
    r.h_min_bits = r.p_max >= 1.0 ? 0.0 : -std::log2(r.p_max);
    return r;
}

DiscardBudget budget_after_discard(double h_per_sample, std::uint8_t keep_mask) {
    if (keep_mask == 0)
        throw std::invalid_argument("budget_after_discard: keep_mask must be nonzero");
    if (h_per_sample < 0.0)
        throw std::invalid_argument("budget_after_discard: entropy must be nonnegative");
    const int kept = std::popcount(keep_mask);
    const int dropped = 8 - kept;
    DiscardBudget b;
    b.h_per_sample_bits = std::max(h_per_sample - dropped, 0.0);
    b.h_per_raw_bit = b.h_per_sample_bits / kept;
    return b;
}

std::uint32_t leftover_hash_m(std::uint32_t n, double h_per_bit,
                              std::uint32_t epsilon_exponent) {
    if (n == 0 || epsilon_exponent == 0)
        throw std::invalid_argument("leftover_hash_m: n and epsilon_exponent must be positive");
    if (!(h_per_bit > 0.0) || h_per_bit > 1.0)
        throw std::invalid_argument("leftover_hash_m: h_per_bit must be in (0, 1]");
    // Floor, never round up; the 1e-9 nudge only absorbs representation
    // error in the product (0.7 * 1520 must yield exactly 1064).
    const double raw = static_cast<double>(n) * h_per_bit - 2.0 * epsilon_exponent;
    const double m = std::floor(raw + 1e-9);
    if (m < 1.0)
        throw std::invalid_argument("leftover_hash_m: entropy budget too small for security bound");
    return static_cast<std::uint32_t>(m);
}

double extraction_efficiency(std::uint32_t m, std::uint32_t n, double h_per_bit) {
    if (m == 0 || n == 0 || !(h_per_bit > 0.0))
        throw std::invalid_argument("extraction_efficiency: arguments must be positive");
    return static_cast<double>(m) / (static_cast<double>(n) * h_per_bit);
}

EntropyBudget compute_budget(const EntropyModel& model, std::uint8_t keep_mask,
                             std::uint32_t n, std::uint32_t epsilon_exponent) {
    EntropyBudget b;
    b.gamma = model.gamma;
    b.sigma_q_mv = sigma_q_mv(model);
    const auto me = min_entropy_gaussian(b.sigma_q_mv, model.adc);
    b.h_min_per_sample = me.h_min_bits;
    b.p_max = me.p_max;
    b.kept_bits_per_sample = std::popcount(keep_mask);
    const auto discard = budget_after_discard(me.h_min_bits, keep_mask);
    b.h_min_after_discard = discard.h_per_sample_bits;
    b.h_min_per_raw_bit = discard.h_per_raw_bit;
    b.n = n;
    b.epsilon_exponent = epsilon_exponent;
    b.m = leftover_hash_m(n, discard.h_per_raw_bit, epsilon_exponent);
    b.efficiency = extraction_efficiency(b.m, n, discard.h_per_raw_bit);
    return b;
}

}  // namespace qrng
