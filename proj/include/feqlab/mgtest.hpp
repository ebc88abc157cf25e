#pragma once

/// @file mgtest.hpp
/// Statistical tests on sampled processes: the instrumented moment-condition
/// martingale test E[(X_t - X_s) phi(W_s)] = 0, and the distributional tests
/// (normality, log-normality, Bernstein independence falsifier, symmetry)
/// used as necessary conditions in the theorem suites.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "feqlab/functions.hpp"
#include "feqlab/transforms.hpp"

namespace feqlab::mgtest {

/// Minimum sample size for the CLT-based critical values.
inline constexpr std::size_t kMinSamples = 10000;

struct Instrument {
    std::string name;
    double (*phi)(double); // applied to the conditioning value W_s
};

/// The fixed dictionary {const1, linear, square, sign, gauss}.
std::span<const Instrument> default_instruments();

struct MartingaleCell {
    double s = 0.0;
    double t = 0.0;
    std::string instrument;
    double mean = 0.0; // sample mean of (X_t - X_s) phi(W_s)
    double sd = 0.0;   // sample sd of the same
    double z = 0.0;    // studentized mean
    double p = 0.0;    // two-sided Gaussian p-value
};

struct MartingaleVerdict {
    std::string candidate;
    std::string transform;
    std::vector<MartingaleCell> cells; // ordered: pair-major, instrument-minor
    bool pass = false;                 // all |z| <= critical_z
    std::uint64_t seed = 0;
    std::string seed_label;            // source ensemble stream (W or B)
    double alpha = 0.0;
    double critical_z = 0.0; // Bonferroni-corrected two-sided critical value
    std::size_t n_paths = 0;
    bool degenerate = false;
    // Tail diagnostics (integrability is not decidable from samples; reported,
    // never used as a verdict).
    double max_abs_x = 0.0;
    double increment_ex_kurtosis = 0.0;
};

/// Moment-condition test over every ordered grid pair s < t and instrument.
/// Throws DegenerateInput for degenerate processes, InsufficientSamples below
/// kMinSamples, ConfigError with fewer than two grid times.
MartingaleVerdict test_martingale(const transforms::TransformedProcess& proc,
                                  std::span<const Instrument> instruments, double alpha);

/// sup over paths and ordered pairs of |(X_t - X_s) - A(W_t - W_s)| where A
/// is the additive core of the transform chain (the transform itself applied
/// at the increment).  Zero exactly for true solutions.
double increment_identity_defect(const transforms::TransformedProcess& proc,
                                 std::span<const functions::FunctionSpec> specs,
                                 const transforms::TransformKind& kind);

struct DistReport {
    enum class Test { Normality, LogNormality, BernsteinIndependence, Symmetry };
    Test test = Test::Normality;
    std::vector<std::pair<std::string, double>> statistics; // stable order
    bool pass = false;
};

std::string to_string(DistReport::Test test);

/// Bernstein necessary-condition falsifier: Z = X+Y, V = X-Y; the four
/// cross-correlations corr(Z,V), corr(Z^2,V), corr(Z,V^2), corr(Z^2,V^2) must
/// all satisfy |corr|*sqrt(n) <= Bonferroni critical value at `alpha`.
DistReport bernstein_check(std::span<const double> x_samples, std::span<const double> y_samples,
                           double alpha = 0.01);

/// Moment + ECDF normality check with pinned thresholds: |skew| <= 5 sqrt(6/n),
/// |ex.kurt| <= 5 sqrt(24/n), sup CDF distance <= 1.95/sqrt(n).
DistReport normality_check(std::span<const double> samples);

/// normality_check after taking logarithms (positivity required).
DistReport log_normality_check(std::span<const double> samples);

/// Pass iff sample mean within 5 SE of 0 and ECDFs of the sample and its
/// negation within 1.95/sqrt(n) sup distance.
DistReport symmetry_check(std::span<const double> samples);

struct LinearFit {
    double a = 0.0;
    double b = 0.0;
    double max_deviation = 0.0; // sup |f - (a x + b)| over the grid
};

/// Least-squares affine fit of the function values over the grid.
LinearFit fit_linear(const functions::FunctionSpec& spec, std::span<const double> grid);

/// Least-squares affine fit of explicit (x, value) data.
LinearFit fit_linear_values(std::span<const double> xs, std::span<const double> ys);

/// Two-sided Bonferroni critical z for `cells` simultaneous tests at level alpha.
double bonferroni_critical_z(double alpha, std::size_t cells);

} // namespace feqlab::mgtest
