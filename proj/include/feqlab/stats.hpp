#pragma once

/// @file stats.hpp
/// Deterministic summation and moment helpers shared by the statistical
/// modules.  All reductions use a fixed-arity pairwise tree so results are
/// bit-stable regardless of how callers partition the work.

#include <cstddef>
#include <span>

namespace feqlab::stats {

/// Pairwise (fixed-arity binary tree) sum; fully deterministic order.
double pairwise_sum(std::span<const double> v);

struct Moments {
    std::size_t n = 0;
    double mean = 0.0;
    double sd = 0.0;       // sample sd, n-1 denominator
    double skewness = 0.0; // m3 / m2^(3/2)
    double ex_kurtosis = 0.0; // m4 / m2^2 - 3
    double max_abs = 0.0;
};

/// Two-pass pairwise moments (mean, then centered powers).
Moments moments(std::span<const double> v);

/// Pearson correlation; requires both variances positive (caller checks).
double correlation(std::span<const double> a, std::span<const double> b);

/// Kolmogorov-Smirnov sup distance of sorted samples against a matched-moment
/// normal CDF (samples must already be sorted ascending).
double ks_distance_normal(std::span<const double> sorted, double mean, double sd);

/// Two-sample KS sup distance between sorted samples.
double ks_distance_two_sample(std::span<const double> sorted_a, std::span<const double> sorted_b);

} // namespace feqlab::stats
