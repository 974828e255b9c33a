#pragma once

#include <cstdint>
#include <optional>

namespace qrng {

// Quantizer geometry. Codes saturate at 0 and 2^bits - 1; code boundaries
// sit at offset_mv + c * lsb_mv().
struct AdcGeometry {
    std::uint32_t bits = 8;
    double full_scale_mv = 601.0;  // reconstructed so sigma_q = 85.2 mV gives p_max = 0.011
    double offset_mv = -300.5;     // voltage of the lower edge of code 0

    std::uint32_t codes() const { return 1u << bits; }
    double lsb_mv() const { return full_scale_mv / codes(); }
    double mid_scale_mv() const { return offset_mv + full_scale_mv / 2.0; }
    void validate() const;
};

struct EntropyModel {
    double gamma = 6.87;                    // quantum / classical noise power
    double mean_square_voltage_mv2 = 8311;  // <V(t)^2>
    AdcGeometry adc;

    void validate() const;
};

// Standard deviation of the quantum part: sqrt(gamma/(gamma+1) * <V^2>).
double sigma_q_mv(const EntropyModel& model);

struct MinEntropyResult {
    double h_min_bits = 0.0;
    double p_max = 1.0;
    std::uint32_t argmax_code = 0;
    bool degenerate = false;  // one bin holds >= 1 - 2^-64 of the mass
};

// Min-entropy of a Gaussian of width sigma quantized by `adc`, with the two
// edge codes absorbing the clipped tails. The mean defaults to mid-scale.
MinEntropyResult min_entropy_gaussian(double sigma_mv, const AdcGeometry& adc,
                                      std::optional<double> mean_mv = std::nullopt);

struct DiscardBudget {
    double h_per_sample_bits = 0.0;  // after discard, floored at zero
    double h_per_raw_bit = 0.0;
};

// Worst-case accounting: each dropped bit removes a full bit of min-entropy.
DiscardBudget budget_after_discard(double h_per_sample, std::uint8_t keep_mask);

// Leftover Hash Lemma output size: floor(n*h - 2*eps_exp). Throws when the
// budget cannot support at least one output bit.
std::uint32_t leftover_hash_m(std::uint32_t n, double h_per_bit, std::uint32_t epsilon_exponent);

double extraction_efficiency(std::uint32_t m, std::uint32_t n, double h_per_bit);

// The full chain from model to extractor sizing, as reported by the CLI.
struct EntropyBudget {
    double gamma = 0.0;
    double sigma_q_mv = 0.0;
    double h_min_per_sample = 0.0;
    double p_max = 0.0;
    std::uint32_t kept_bits_per_sample = 0;
    double h_min_after_discard = 0.0;
    double h_min_per_raw_bit = 0.0;
    std::uint32_t n = 0;
    std::uint32_t epsilon_exponent = 0;
    std::uint32_t m = 0;
    double efficiency = 0.0;
};

EntropyBudget compute_budget(const EntropyModel& model, std::uint8_t keep_mask,
                             std::uint32_t n, std::uint32_t epsilon_exponent);

}  // namespace qrng
