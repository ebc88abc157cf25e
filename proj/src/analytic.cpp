#include "feqlab/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "feqlab/errors.hpp"
#include "feqlab/stats.hpp"

namespace feqlab::analytic {

namespace {

// Sturm count for the Jacobi matrix of the probabilists' Hermite recurrence
// (zero diagonal, off-diagonal beta_k = sqrt(k)): number of eigenvalues < x,
// via the sign count of the LDL^T pivots.
int sturm_count(int n, double x) {
    int count = 0;
    double d = -x;
    if (d < 0.0) ++count;
    for (int k = 1; k < n; ++k) {
        const double beta2 = static_cast<double>(k);
        if (d == 0.0) d = -1e-300; // nudge a vanishing pivot
        d = -x - beta2 / d;
        if (d < 0.0) ++count;
    }
    return count;
}

// Orthonormal Hermite recurrence: p_{k+1} = (x p_k - sqrt(k) p_{k-1})/sqrt(k+1).
// Returns p_n(x) and p_{n-1}(x).
struct HermitePair {
    double pn;
    double pn1;
};

HermitePair orthonormal_hermite(int n, double x) {
    double pkm1 = 0.0;
    double pk = 1.0; // p_0, unit norm under the standard Gaussian
    for (int k = 0; k < n; ++k) {
        const double pkp1 =
            (x * pk - std::sqrt(static_cast<double>(k)) * pkm1) / std::sqrt(static_cast<double>(k + 1));
        pkm1 = pk;
        pk = pkp1;
    }
    return {pk, pkm1};
}

// Locate the r-th smallest eigenvalue (1-based) by bisection on the Sturm
// count, then polish as a root of p_n with Newton (p_n'(x) = sqrt(n) p_{n-1}).
double jacobi_eigenvalue(int n, int r, double lo, double hi) {
    while (hi - lo > 1e-12 * std::max(1.0, std::abs(hi))) {
        const double mid = 0.5 * (lo + hi);
        if (sturm_count(n, mid) >= r) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    double x = 0.5 * (lo + hi);
    for (int iter = 0; iter < 8; ++iter) {
        const HermitePair p = orthonormal_hermite(n, x);
        const double deriv = std::sqrt(static_cast<double>(n)) * p.pn1;
        if (deriv == 0.0) break;
        const double step = p.pn / deriv;
        x -= step;
        if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) {
            break;
        }
    }
    return x;
}

double christoffel_weight(int n, double x) {
    const HermitePair p = orthonormal_hermite(n, x);
    return 1.0 / (static_cast<double>(n) * p.pn1 * p.pn1);
}

} // namespace

QuadratureRule gauss_hermite(int order) {
    if (order < 1) {
        throw ConfigError("gauss_hermite: order must be >= 1, got " + std::to_string(order));
    }
    const int n = order;
    const int half = n / 2;
    const bool odd = (n % 2) != 0;
    const double upper = 2.0 * std::sqrt(static_cast<double>(n)) + 1.0;

    // Positive roots only; ranks (count of eigenvalues below) start just past
    // the symmetric lower half of the spectrum.
    std::vector<double> pos(half);
    std::vector<double> pos_w(half);
    for (int j = 1; j <= half; ++j) {
        const int rank = (n + 1) / 2 + j; // 1-based rank among all n eigenvalues
        const double x = jacobi_eigenvalue(n, rank, 0.0, upper);
        pos[static_cast<std::size_t>(j - 1)] = x;
        pos_w[static_cast<std::size_t>(j - 1)] = christoffel_weight(n, x);
    }
    const double center_w = odd ? christoffel_weight(n, 0.0) : 0.0;

    // Normalise total mass to exactly 1 while preserving the mirror symmetry.
    double total = odd ? center_w : 0.0;
    for (double w : pos_w) total += 2.0 * w;
    for (double& w : pos_w) w /= total;

    QuadratureRule rule;
    rule.order = n;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < half; ++j) {
        const double x = pos[static_cast<std::size_t>(half - 1 - j)];
        const double w = pos_w[static_cast<std::size_t>(half - 1 - j)];
        rule.nodes[static_cast<std::size_t>(j)] = -x; // exact mirror
        rule.weights[static_cast<std::size_t>(j)] = w;
        rule.nodes[static_cast<std::size_t>(n - 1 - j)] = x;
        rule.weights[static_cast<std::size_t>(n - 1 - j)] = w;
    }
    if (odd) {
        rule.nodes[static_cast<std::size_t>(half)] = 0.0;
        rule.weights[static_cast<std::size_t>(half)] = center_w / total;
    }
    return rule;
}

double QuadratureRule::integrate(const std::function<double(double)>& f) const {
    const std::size_t n = nodes.size();
    if (n == 0) {
        throw ConfigError("QuadratureRule::integrate: empty rule");
    }
    // Walk mirrored pairs from both ends and sum each pair before scaling by
    // the (shared) weight: an odd integrand cancels exactly in floating point.
    double acc = 0.0;
    std::size_t lo = 0;
    std::size_t hi = n - 1;
    while (lo < hi) {
        acc += weights[lo] * (f(nodes[lo]) + f(nodes[hi]));
        ++lo;
        --hi;
    }
    if (lo == hi) {
        acc += weights[lo] * f(nodes[lo]);
    }
    return acc;
}

double heat_smooth(const functions::FunctionSpec& f, double t, double x,
                   const QuadratureRule& rule) {
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw ConfigError("heat_smooth: t must be positive and finite");
    }
    const double s = std::sqrt(t);
    return rule.integrate([&](double xi) { return functions::evaluate(f, x + s * xi); });
}

double time_invariance_defect(const functions::FunctionSpec& f, double t1, double t2,
                              std::span<const double> x_grid, const QuadratureRule& rule) {
    if (!(0.0 < t1 && t1 < t2)) {
        throw ConfigError("time_invariance_defect: need 0 < t1 < t2");
    }
    if (x_grid.empty()) {
        throw ConfigError("time_invariance_defect: empty x grid");
    }
    double worst = 0.0;
    for (double x : x_grid) {
        const double d = std::abs(heat_smooth(f, t1, x, rule) - heat_smooth(f, t2, x, rule));
        worst = std::max(worst, d);
    }
    return worst;
}

double kolmogorov_residual(const functions::FunctionSpec& f, double T,
                           std::span<const double> t_grid, std::span<const double> x_grid,
                           const QuadratureRule& rule, FdSteps steps) {
    if (!(T > 0.0)) {
        throw ConfigError("kolmogorov_residual: horizon T must be positive");
    }
    if (t_grid.empty() || x_grid.empty()) {
        throw ConfigError("kolmogorov_residual: grids must be non-empty");
    }
    const double ht = steps.ht_rel * T;
    const auto [xmin_it, xmax_it] = std::minmax_element(x_grid.begin(), x_grid.end());
    const double span = *xmax_it - *xmin_it;
    if (!(span > 0.0)) {
        throw ConfigError("kolmogorov_residual: x grid must span a positive interval");
    }
    const double hx = steps.hx_rel * span;

    const auto g = [&](double t, double x) { return heat_smooth(f, T - t, x, rule); };

    double worst = 0.0;
    for (double t : t_grid) {
        if (!(t - ht > 0.0) || !(t + ht < T)) {
            throw ConfigError("kolmogorov_residual: t grid point " + std::to_string(t) +
                              " too close to the boundary of (0, T) for the time step");
        }
        for (double x : x_grid) {
            const double dt = (g(t + ht, x) - g(t - ht, x)) / (2.0 * ht);
            const double dxx = (g(t, x + hx) - 2.0 * g(t, x) + g(t, x - hx)) / (hx * hx);
            worst = std::max(worst, std::abs(dt + 0.5 * dxx));
        }
    }
    return worst;
}

std::vector<double> smoothed_derivative(const functions::FunctionSpec& f,
                                        std::span<const double> x_grid,
                                        const QuadratureRule& rule) {
    if (x_grid.empty()) {
        throw ConfigError("smoothed_derivative: empty x grid");
    }
    std::vector<double> out;
    out.reserve(x_grid.size());
    for (double x : x_grid) {
        out.push_back(rule.integrate([&](double xi) { return functions::evaluate(f, x + xi) * xi; }));
    }
    return out;
}

BilinearFit bilinear_fit(const std::function<double(double, double)>& K,
                         std::span<const double> xs, std::span<const double> ys) {
    const std::size_t m = xs.size() * ys.size();
    if (m < 4) {
        throw SingularGrid("bilinear_fit: need at least 4 grid points, got " + std::to_string(m));
    }
    Eigen::MatrixXd A(static_cast<Eigen::Index>(m), 4);
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(m));
    Eigen::Index row = 0;
    for (double x : xs) {
        for (double y : ys) {
            A(row, 0) = x * y;
            A(row, 1) = x;
            A(row, 2) = y;
            A(row, 3) = 1.0;
            rhs(row) = K(x, y);
            ++row;
        }
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    qr.setThreshold(1e-10);
    if (qr.rank() < 4) {
        throw SingularGrid("bilinear_fit: grid does not determine the basis {xy, x, y, 1}");
    }
    const Eigen::Vector4d beta = qr.solve(rhs);
    const Eigen::VectorXd resid = A * beta - rhs;
    BilinearFit fit;
    fit.a = beta(0);
    fit.b = beta(1);
    fit.c = beta(2);
    fit.d = beta(3);
    fit.max_residual = resid.size() > 0 ? resid.cwiseAbs().maxCoeff() : 0.0;
    return fit;
}

QuadraticRecovery recover_quadratic_coefficient(const functions::FunctionSpec& f,
                                                std::span<const double> x_grid) {
    if (x_grid.empty()) {
        throw ConfigError("recover_quadratic_coefficient: empty grid");
    }
    std::vector<double> num_terms;
    std::vector<double> den_terms;
    num_terms.reserve(x_grid.size());
    den_terms.reserve(x_grid.size());
    for (double x : x_grid) {
        if (x == 0.0) {
            throw DomainViolation("recover_quadratic_coefficient: grid must exclude 0");
        }
        const double g = functions::evaluate(f, 2.0 * x) - 2.0 * functions::evaluate(f, x);
        num_terms.push_back(g * x * x);
        den_terms.push_back(x * x * x * x);
    }
    const double den = stats::pairwise_sum(den_terms);
    if (den == 0.0) {
        throw SingularGrid("recover_quadratic_coefficient: degenerate grid");
    }
    QuadraticRecovery rec;
    rec.a = stats::pairwise_sum(num_terms) / den;
    for (double x : x_grid) {
        const double g = functions::evaluate(f, 2.0 * x) - 2.0 * functions::evaluate(f, x);
        rec.max_residual = std::max(rec.max_residual, std::abs(g - rec.a * x * x));
    }
    return rec;
}

} // namespace feqlab::analytic
