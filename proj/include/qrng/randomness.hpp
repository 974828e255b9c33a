#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qrng/bitblock.hpp"

namespace qrng {

struct TestReport {
    enum class Status { Pass, Fail, NotApplicable, Error };

    std::string name;
    double statistic = 0.0;
    double p_value = 0.0;
    double alpha = 0.01;
    Status status = Status::Error;
    std::string note;

    bool passed() const { return status == Status::Pass; }
};

// Normalized sample autocorrelation r(1..max_lag). The estimator is the
// lagged Pearson correlation: numerator over the N-lag overlapping pairs,
// each factor of the denominator over its own window, so |r| <= 1 holds
// exactly and a strictly alternating sequence gives r(1) = -1 exactly.
// Requires length > 10 * max_lag and nonzero variance.
std::vector<double> autocorrelation(std::span<const double> series, std::size_t max_lag);

// Same estimator on a packed bit sequence, computed with popcount kernels.
std::vector<double> autocorrelation_bits(const BitBlock& bits, std::size_t max_lag);

// NIST SP 800-22 style monobit statistic; exposed separately so short
// reference vectors can be evaluated directly.
double frequency_p_value(std::uint64_t ones, std::uint64_t zeros);

TestReport frequency_test(const BitBlock& bits, double alpha = 0.01);
TestReport block_frequency_test(const BitBlock& bits, std::size_t block_len,
                                double alpha = 0.01);
TestReport runs_test(const BitBlock& bits, double alpha = 0.01);

// One-sample Kolmogorov-Smirnov test of p-values against Uniform[0,1];
// requires at least 10 values.
TestReport ks_uniformity(std::span<const double> p_values, double alpha = 0.01);

// p-value for the largest |r(l)|, l = 1..max_lag, under the null that all
// lags are independent N(0, 1/N) (two-sided, extreme-value corrected).
TestReport autocorrelation_test(const BitBlock& bits, std::size_t max_lag,
                                double alpha = 0.01);

struct SuiteConfig {
    std::size_t sub_block_bits = 1'000'000;
    double alpha = 0.01;
    std::size_t max_lag = 100;
    // NIST second-level thresholds: proportion band is phat +- 3 sigma, the
    // p-value uniformity KS must clear this significance.
    double uniformity_alpha = 0.0001;
};

struct SuiteTestSummary {
    std::string name;
    std::size_t sub_blocks = 0;
    std::size_t passed = 0;
    std::size_t not_applicable = 0;
    double proportion = 0.0;
    double proportion_lower_bound = 0.0;  // NIST confidence band
    double ks_p = 0.0;                    // uniformity of the sub-block p-values
    bool pass = false;
    std::vector<double> p_values;
};

struct SuiteResult {
    std::vector<SuiteTestSummary> tests;
    bool pass = false;
};

// Partitions the input into sub-blocks, runs every test per sub-block, and
// aggregates: per-test pass proportion against the NIST band plus a KS
// uniformity check over the collected p-values. Requires >= 1e6 bits.
SuiteResult run_suite(const BitBlock& bits, const SuiteConfig& config = {});

}  // namespace qrng
