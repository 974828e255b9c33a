#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qrng/entropy.hpp"

using namespace qrng;

namespace {

// Independent oracle: per-bin probabilities by composite Simpson quadrature
// of the normal density, never through the implementation's erfc path.
double simpson_bin(double lo, double hi, double mu, double sigma) {
    const double span_lo = std::max(lo, mu - 15.0 * sigma);
    const double span_hi = std::min(hi, mu + 15.0 * sigma);
    if (span_lo >= span_hi) return 0.0;
    const int n = 128;  // even
    const double h = (span_hi - span_lo) / n;
    auto pdf = [&](double x) {
        const double z = (x - mu) / sigma;
        return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
    };
    double acc = pdf(span_lo) + pdf(span_hi);
    for (int i = 1; i < n; ++i) acc += pdf(span_lo + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

double min_entropy_oracle(double sigma, const AdcGeometry& adc) {
    const double mu = adc.mid_scale_mv();
    double p_max = 0.0;
    for (std::uint32_t c = 0; c < adc.codes(); ++c) {
        const double lo = c == 0 ? mu - 20.0 * sigma - adc.full_scale_mv
                                 : adc.offset_mv + c * adc.lsb_mv();
        const double hi = c == adc.codes() - 1 ? mu + 20.0 * sigma + adc.full_scale_mv
                                               : adc.offset_mv + (c + 1) * adc.lsb_mv();
        p_max = std::max(p_max, simpson_bin(lo, hi, mu, sigma));
    }
    return -std::log2(p_max);
}

}  // namespace

TEST_CASE("sigma_q from the quantum/classical power split") {
    CHECK(sigma_q_mv({.gamma = 6.87, .mean_square_voltage_mv2 = 8311.0}) ==
          doctest::Approx(85.2).epsilon(0.0012));
    CHECK(sigma_q_mv({.gamma = 1e9, .mean_square_voltage_mv2 = 100.0}) ==
          doctest::Approx(10.0).epsilon(1e-6));
    CHECK(sigma_q_mv({.gamma = 1.0, .mean_square_voltage_mv2 = 8.0}) ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK_THROWS_AS(sigma_q_mv({.gamma = 0.0}), std::invalid_argument);
}

TEST_CASE("gaussian min-entropy reproduces the reference operating point") {
    const AdcGeometry adc{};
    const auto r = min_entropy_gaussian(85.2, adc);
    CHECK(std::abs(r.p_max - 0.011) < 0.0005);
    CHECK(std::abs(r.h_min_bits - 6.5) < 0.1);
    CHECK_FALSE(r.degenerate);
}

TEST_CASE("min-entropy limits") {
    const AdcGeometry adc{};
    SUBCASE("huge sigma is clipping-bounded, below the code width") {
        const auto r = min_entropy_gaussian(1e6 * adc.full_scale_mv, adc);
        CHECK(r.h_min_bits <= 8.0);
        CHECK(r.h_min_bits > 0.0);
    }
    SUBCASE("tiny sigma degenerates to one code") {
        const auto r = min_entropy_gaussian(adc.full_scale_mv / 1e6, adc);
        CHECK(r.degenerate);
        CHECK(r.h_min_bits == doctest::Approx(0.0).epsilon(1e-9));
    }
    SUBCASE("entropy is bounded by the code width across a sweep") {
        for (double frac : {0.001, 0.01, 0.1, 0.5, 2.0, 100.0}) {
            const auto r = min_entropy_gaussian(frac * adc.full_scale_mv, adc);
            CHECK(r.h_min_bits >= 0.0);
            CHECK(r.h_min_bits <= 8.0);
        }
    }
}

TEST_CASE("min-entropy agrees with brute-force quadrature to 1e-6 bits") {
    const AdcGeometry adc{};
    for (double frac : {0.01, 0.05, 0.14, 0.3, 1.0}) {
        const double sigma = frac * adc.full_scale_mv;
        const auto fast = min_entropy_gaussian(sigma, adc);
        CHECK(std::abs(fast.h_min_bits - min_entropy_oracle(sigma, adc)) < 1e-6);
    }
}

TEST_CASE("min-entropy is non-decreasing below the clipping regime") {
    const AdcGeometry adc{};
    double prev = 0.0;
    for (int i = 1; i <= 20; ++i) {
        const double sigma = adc.full_scale_mv * 0.01 * i;  // 0.01 .. 0.2
        const double h = min_entropy_gaussian(sigma, adc).h_min_bits;
        CHECK(h >= prev);
        prev = h;
    }
}

TEST_CASE("discard accounting") {
    const auto paper = budget_after_discard(6.5, kDefaultKeepMask);
    CHECK(paper.h_per_sample_bits == doctest::Approx(3.5).epsilon(1e-12));
    CHECK(paper.h_per_raw_bit == doctest::Approx(0.7).epsilon(1e-12));

    const auto full = budget_after_discard(6.5, 0xff);
    CHECK(full.h_per_sample_bits == doctest::Approx(6.5));
    CHECK(full.h_per_raw_bit == doctest::Approx(0.8125));

    const auto floored = budget_after_discard(2.0, kDefaultKeepMask);
    CHECK(floored.h_per_sample_bits == 0.0);
    CHECK(floored.h_per_raw_bit == 0.0);

    CHECK_THROWS_AS(budget_after_discard(6.5, 0), std::invalid_argument);
}

TEST_CASE("leftover hash sizing") {
    CHECK(leftover_hash_m(1520, 0.7, 20) == 1024);
    CHECK(leftover_hash_m(100, 1.0, 10) == 80);
    CHECK_THROWS_WITH_AS(leftover_hash_m(1520, 0.7, 532),
                         "leftover_hash_m: entropy budget too small for security bound",
                         std::invalid_argument);
    CHECK_THROWS_AS(leftover_hash_m(0, 0.7, 20), std::invalid_argument);
    CHECK_THROWS_AS(leftover_hash_m(1520, 1.5, 20), std::invalid_argument);
}

TEST_CASE("leftover output never exceeds the entropy budget") {
    for (std::uint32_t n : {100u, 1520u, 4096u})
        for (double h : {0.1, 0.29, 0.5, 0.7, 1.0})
            for (std::uint32_t e : {1u, 10u, 20u}) {
                std::uint32_t m = 0;
                try {
                    m = leftover_hash_m(n, h, e);
                } catch (const std::invalid_argument&) {
                    continue;
                }
                CHECK(static_cast<double>(m) <= n * h + 1e-6);
            }
}

TEST_CASE("extraction efficiency") {
    CHECK(extraction_efficiency(1024, 1520, 0.7) == doctest::Approx(0.962).epsilon(0.0052));
    CHECK(std::abs(extraction_efficiency(1024, 1520, 0.7) - 0.96) < 0.005);
    CHECK(extraction_efficiency(500, 1000, 0.5) == doctest::Approx(1.0));
    CHECK(extraction_efficiency(512, 1520, 0.7) == doctest::Approx(0.481).epsilon(0.002));
}

TEST_CASE("full budget chain at the default operating point") {
    const EntropyModel model{};
    const auto b = compute_budget(model, kDefaultKeepMask, 1520, 20);
    CHECK(std::abs(b.sigma_q_mv - 85.2) < 0.1);
    CHECK(std::abs(b.h_min_per_sample - 6.5) < 0.1);
    CHECK(b.kept_bits_per_sample == 5);
    CHECK(b.h_min_after_discard == doctest::Approx(b.h_min_per_sample - 3.0));
    CHECK(b.m >= 1024);  // the computed entropy supports the paper geometry
    CHECK(static_cast<double>(b.m) <= 1520.0 * b.h_min_per_raw_bit);
}
