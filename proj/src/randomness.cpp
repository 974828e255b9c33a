#include "qrng/randomness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "qrng/gf2_kernels.hpp"
#include "qrng/stats.hpp"

namespace qrng {

namespace {

TestReport make_report(std::string name, double statistic, double p, double alpha) {
    TestReport r;
    r.name = std::move(name);
    r.statistic = statistic;
    r.p_value = p;
    r.alpha = alpha;
    r.status = p >= alpha ? TestReport::Status::Pass : TestReport::Status::Fail;
    return r;
}

}  // namespace

std::vector<double> autocorrelation(std::span<const double> series, std::size_t max_lag) {
    const std::size_t n = series.size();
    if (max_lag == 0) throw std::invalid_argument("autocorrelation: max_lag must be positive");
    if (n <= max_lag * 10)
        throw std::invalid_argument("autocorrelation: series must be longer than 10*max_lag");

    double sum = 0.0;
    for (double x : series) sum += x;
    const double mean = sum / n;

    std::vector<double> d(n);
    std::vector<double> prefix_sq(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        d[i] = series[i] - mean;
        prefix_sq[i + 1] = prefix_sq[i] + d[i] * d[i];
    }
    if (prefix_sq[n] == 0.0)
        throw std::invalid_argument("autocorrelation: series has zero variance");

    std::vector<double> r(max_lag);
    for (std::size_t lag = 1; lag <= max_lag; ++lag) {
        double num = 0.0;
        for (std::size_t i = 0; i + lag < n; ++i) num += d[i] * d[i + lag];
        const double head_ss = prefix_sq[n - lag];              // i < n-lag
        const double tail_ss = prefix_sq[n] - prefix_sq[lag];   // i >= lag
        const double den = std::sqrt(head_ss * tail_ss);
        r[lag - 1] = den == 0.0 ? 0.0 : num / den;
    }
    return r;
}

std::vector<double> autocorrelation_bits(const BitBlock& bits, std::size_t max_lag) {
    const std::size_t n = bits.size();
    if (max_lag == 0) throw std::invalid_argument("autocorrelation: max_lag must be positive");
    if (n <= max_lag * 10)
        throw std::invalid_argument("autocorrelation: series must be longer than 10*max_lag");

    const auto& kern = gf2::active();
    const std::uint64_t* w = bits.word_data();
    const double ones = static_cast<double>(kern.popcount(w, n));
    if (ones == 0.0 || ones == static_cast<double>(n))
        throw std::invalid_argument("autocorrelation: series has zero variance");
    const double mean = ones / n;

    // For x in {0,1}: (x - m)^2 = x(1 - 2m) + m^2, so the windowed sums of
    // squares reduce to popcounts.
    std::vector<double> r(max_lag);
    for (std::size_t lag = 1; lag <= max_lag; ++lag) {
        const double len = static_cast<double>(n - lag);
        const double s11 = static_cast<double>(kern.and_shifted_popcount(w, lag, n - lag));
        const double head_ones = static_cast<double>(kern.popcount(w, n - lag));
        const double tail_ones = ones - static_cast<double>(kern.popcount(w, lag));
        const double num = s11 - mean * (head_ones + tail_ones) + len * mean * mean;
        const double head_ss = head_ones * (1.0 - 2.0 * mean) + len * mean * mean;
        const double tail_ss = tail_ones * (1.0 - 2.0 * mean) + len * mean * mean;
        const double den = std::sqrt(head_ss * tail_ss);
        r[lag - 1] = den == 0.0 ? 0.0 : num / den;
    }
    return r;
}

double frequency_p_value(std::uint64_t ones, std::uint64_t zeros) {
    const double n = static_cast<double>(ones + zeros);
    if (n == 0.0) throw std::invalid_argument("frequency: empty input");
    const double s = std::abs(static_cast<double>(ones) - static_cast<double>(zeros)) /
                     std::sqrt(n);
    return std::erfc(s / std::numbers::sqrt2);
}

TestReport frequency_test(const BitBlock& bits, double alpha) {
    if (bits.size() < 100)
        throw std::invalid_argument("frequency_test: need at least 100 bits");
    const std::uint64_t ones = gf2::active().popcount(bits.word_data(), bits.size());
    const std::uint64_t zeros = bits.size() - ones;
    const double s = std::abs(static_cast<double>(ones) - static_cast<double>(zeros)) /
                     std::sqrt(static_cast<double>(bits.size()));
    return make_report("frequency", s, frequency_p_value(ones, zeros), alpha);
}

TestReport block_frequency_test(const BitBlock& bits, std::size_t block_len, double alpha) {
    if (block_len == 0)
        throw std::invalid_argument("block_frequency_test: block length must be positive");
    const std::size_t n_blocks = bits.size() / block_len;
    if (n_blocks < 20)
        throw std::invalid_argument("block_frequency_test: need at least 20 full blocks");
    const auto& kern = gf2::active();
    double chi2 = 0.0;
    for (std::size_t b = 0; b < n_blocks; ++b) {
        // popcount over [b*block_len, (b+1)*block_len) via prefix difference
        const std::uint64_t upto_hi = kern.popcount(bits.word_data(), (b + 1) * block_len);
        const std::uint64_t upto_lo = kern.popcount(bits.word_data(), b * block_len);
        const double pi = static_cast<double>(upto_hi - upto_lo) / block_len;
        chi2 += (pi - 0.5) * (pi - 0.5);
    }
    chi2 *= 4.0 * static_cast<double>(block_len);
    const double p = stats::gamma_q(static_cast<double>(n_blocks) / 2.0, chi2 / 2.0);
    return make_report("block_frequency", chi2, p, alpha);
}

TestReport runs_test(const BitBlock& bits, double alpha) {
    const std::size_t n = bits.size();
    if (n < 100) throw std::invalid_argument("runs_test: need at least 100 bits");
    const auto& kern = gf2::active();
    const std::uint64_t* w = bits.word_data();
    const double ones = static_cast<double>(kern.popcount(w, n));
    const double pi = ones / n;
    const double tau = 2.0 / std::sqrt(static_cast<double>(n));
    if (std::abs(pi - 0.5) >= tau) {
        TestReport r;
        r.name = "runs";
        r.alpha = alpha;
        r.status = TestReport::Status::NotApplicable;
        r.note = "frequency precondition failed";
        return r;
    }
    // transitions = sum over adjacent pairs of x_i xor x_{i+1}
    const double s11 = static_cast<double>(kern.and_shifted_popcount(w, 1, n - 1));
    const double head = static_cast<double>(kern.popcount(w, n - 1));
    const double tail = ones - static_cast<double>(kern.popcount(w, 1));
    const double transitions = head + tail - 2.0 * s11;
    const double v_obs = transitions + 1.0;
    const double num = std::abs(v_obs - 2.0 * n * pi * (1.0 - pi));
    const double den = 2.0 * std::sqrt(2.0 * n) * pi * (1.0 - pi);
    const double p = std::erfc(num / den);
    return make_report("runs", v_obs, p, alpha);
}

TestReport ks_uniformity(std::span<const double> p_values, double alpha) {
    if (p_values.size() < 10)
        throw std::invalid_argument("ks_uniformity: need at least 10 p-values");
    std::vector<double> sorted(p_values.begin(), p_values.end());
    std::sort(sorted.begin(), sorted.end());
    const double d = stats::ks_statistic_uniform(sorted);
    const double lambda = std::sqrt(static_cast<double>(sorted.size())) * d;
    return make_report("ks_uniformity", d, stats::kolmogorov_q(lambda), alpha);
}

TestReport autocorrelation_test(const BitBlock& bits, std::size_t max_lag, double alpha) {
    const auto r = autocorrelation_bits(bits, max_lag);
    double max_abs = 0.0;
    for (double v : r) max_abs = std::max(max_abs, std::abs(v));
    // Null: each r(l) ~ N(0, 1/N) and lags approximately independent, so the
    // maximum has CDF (2 Phi(z) - 1)^L.
    const double z = max_abs * std::sqrt(static_cast<double>(bits.size()));
    const double per_lag = std::erf(z / std::numbers::sqrt2);
    const double p = 1.0 - std::pow(per_lag, static_cast<double>(max_lag));
    return make_report("autocorrelation", max_abs, p, alpha);
}

SuiteResult run_suite(const BitBlock& bits, const SuiteConfig& config) {
    if (bits.size() < 1'000'000)
        throw std::invalid_argument("run_suite: need at least 1e6 bits");
    const std::size_t n_sub = bits.size() / config.sub_block_bits;

    struct Runner {
        std::string name;
        std::function<TestReport(const BitBlock&)> fn;
    };
    const std::size_t block_freq_len = std::max<std::size_t>(config.sub_block_bits / 50, 20);
    std::vector<Runner> runners{
        {"frequency", [&](const BitBlock& b) { return frequency_test(b, config.alpha); }},
        {"block_frequency",
         [&](const BitBlock& b) { return block_frequency_test(b, block_freq_len, config.alpha); }},
        {"runs", [&](const BitBlock& b) { return runs_test(b, config.alpha); }},
        {"autocorrelation",
         [&](const BitBlock& b) { return autocorrelation_test(b, config.max_lag, config.alpha); }},
    };

    SuiteResult result;
    result.tests.resize(runners.size());
    for (std::size_t t = 0; t < runners.size(); ++t) {
        result.tests[t].name = runners[t].name;
        result.tests[t].sub_blocks = n_sub;
    }

    for (std::size_t s = 0; s < n_sub; ++s) {
        const BitBlock sub = bits.slice(s * config.sub_block_bits, config.sub_block_bits);
        for (std::size_t t = 0; t < runners.size(); ++t) {
            auto& summary = result.tests[t];
            TestReport rep;
            try {
                rep = runners[t].fn(sub);
            } catch (const std::exception& e) {
                rep.status = TestReport::Status::Error;
                rep.note = e.what();
            }
            switch (rep.status) {
                case TestReport::Status::Pass:
                    ++summary.passed;
                    summary.p_values.push_back(rep.p_value);
                    break;
                case TestReport::Status::Fail:
                    summary.p_values.push_back(rep.p_value);
                    break;
                case TestReport::Status::NotApplicable:
                    ++summary.not_applicable;
                    break;
                case TestReport::Status::Error:
                    break;
            }
        }
    }

    result.pass = true;
    for (auto& summary : result.tests) {
        const std::size_t applicable = summary.p_values.size();
        const double phat = 1.0 - config.alpha;
        summary.proportion_lower_bound =
            applicable > 0
                ? phat - 3.0 * std::sqrt(phat * config.alpha / static_cast<double>(applicable))
                : 0.0;
        summary.proportion =
            applicable > 0 ? static_cast<double>(summary.passed) / applicable : 0.0;
        bool ok = applicable > 0 && summary.proportion >= summary.proportion_lower_bound;
        if (applicable >= 10) {
            summary.ks_p = ks_uniformity(summary.p_values, config.uniformity_alpha).p_value;
            ok = ok && summary.ks_p >= config.uniformity_alpha;
        } else {
            summary.ks_p = 1.0;
        }
        summary.pass = ok;
        result.pass = result.pass && ok;
    }
    return result;
}

}  // namespace qrng
