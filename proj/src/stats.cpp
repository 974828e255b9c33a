#include "qrng/stats.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace qrng::stats {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double gamma_q(double a, double x) { return boost::math::gamma_q(a, x); }

double kolmogorov_q(double lambda) {
    if (lambda <= 0.0) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        sum += sign * term;
        if (term < 1e-16) break;
        sign = -sign;
    }
    const double q = 2.0 * sum;
    return q < 0.0 ? 0.0 : (q > 1.0 ? 1.0 : q);
}

double ks_statistic_uniform(std::span<const double> sorted) {
    const std::size_t n = sorted.size();
    if (n == 0) throw std::invalid_argument("ks_statistic_uniform: empty sample");
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = sorted[i];
        const double hi = static_cast<double>(i + 1) / n - x;
        const double lo = x - static_cast<double>(i) / n;
        if (hi > d) d = hi;
        if (lo > d) d = lo;
    }
    return d;
}

MeanVar mean_variance(std::span<const double> xs) {
    MeanVar mv;
    if (xs.empty()) return mv;
    double sum = 0.0;
    for (double x : xs) sum += x;
    mv.mean = sum / xs.size();
    double ss = 0.0;
    for (double x : xs) {
        const double d = x - mv.mean;
        ss += d * d;
    }
    mv.variance = ss / xs.size();
    return mv;
}

}  // namespace qrng::stats
