#pragma once

#include <cstddef>
#include <span>

namespace qrng::stats {

// Standard normal CDF.
double normal_cdf(double x);

// Regularized upper incomplete gamma Q(a, x).
double gamma_q(double a, double x);

// Kolmogorov distribution survival function
// Q(lambda) = 2 * sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2).
double kolmogorov_q(double lambda);

// One-sample KS statistic of `sorted` (ascending) against Uniform[0,1].
double ks_statistic_uniform(std::span<const double> sorted);

struct MeanVar {
    double mean = 0.0;
    double variance = 0.0;  // divide-by-N
};
MeanVar mean_variance(std::span<const double> xs);

}  // namespace qrng::stats
