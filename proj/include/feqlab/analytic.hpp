#pragma once

/// @file analytic.hpp
/// Deterministic quadrature and finite-difference engine: Gauss-Hermite rules
/// (probabilists' weight), heat smoothing E f(x + sqrt(t) xi), the backward-
/// Kolmogorov residual and time-invariance defect, the smoothed-derivative
/// formula E[f(x+xi) xi], and the small least-squares fits (bilinear surface,
/// quadratic coefficient recovery).

#include <functional>
#include <span>
#include <vector>

#include "feqlab/functions.hpp"

namespace feqlab::analytic {

/// Gauss-Hermite rule for the standard Gaussian weight.  Nodes are exactly
/// symmetric (mirrored in floating point); weights are normalised to unit
/// total mass.  integrate() pairs mirrored nodes so odd integrands cancel
/// exactly.
struct QuadratureRule {
    std::vector<double> nodes;   // ascending
    std::vector<double> weights; // matching order, w[i] == w[n-1-i]
    int order = 0;

    /// E f(xi) over the rule; evaluation errors (DomainViolation) propagate.
    double integrate(const std::function<double(double)>& f) const;
};

/// Build the rule of the given order (number of nodes), default 64.
/// Nodes from Sturm-sequence bisection on the Jacobi matrix, polished by
/// Newton iteration on the orthonormal recurrence; weights from the
/// Christoffel identity w = 1/(n * p_{n-1}(x)^2).
QuadratureRule gauss_hermite(int order = 64);

/// Quadrature approximation of E f(x + sqrt(t) xi).
double heat_smooth(const functions::FunctionSpec& f, double t, double x,
                   const QuadratureRule& rule);

/// sup over the grid of |heat_smooth(f,t1,x) - heat_smooth(f,t2,x)|; zero for
/// affine f (the linearity criterion).
double time_invariance_defect(const functions::FunctionSpec& f, double t1, double t2,
                              std::span<const double> x_grid, const QuadratureRule& rule);

struct FdSteps {
    double ht_rel = 1e-4; // h_t = ht_rel * T
    double hx_rel = 1e-4; // h_x = hx_rel * span(x_grid)
};

/// sup over (t_grid x x_grid) of |d/dt g + 1/2 d2/dx2 g| with central finite
/// differences applied to g(t,x) = heat_smooth(f, T-t, x); vanishes (up to
/// quadrature+FD tolerance) for every smoothable f.
double kolmogorov_residual(const functions::FunctionSpec& f, double T,
                           std::span<const double> t_grid, std::span<const double> x_grid,
                           const QuadratureRule& rule, FdSteps steps = {});

/// E[f(x + xi) xi] at each grid x; constant iff f is affine (the derivative
/// criterion for the stochastic Cauchy equation).
std::vector<double> smoothed_derivative(const functions::FunctionSpec& f,
                                        std::span<const double> x_grid,
                                        const QuadratureRule& rule);

struct BilinearFit {
    double a = 0.0; // xy
    double b = 0.0; // x
    double c = 0.0; // y
    double d = 0.0; // 1
    double max_residual = 0.0;
};

/// Least squares of K over the tensor grid xs x ys onto {xy, x, y, 1}.
/// Throws SingularGrid on a rank-deficient design.
BilinearFit bilinear_fit(const std::function<double(double, double)>& K,
                         std::span<const double> xs, std::span<const double> ys);

struct QuadraticRecovery {
    double a = 0.0;           // least-squares coefficient of x^2
    double max_residual = 0.0; // sup |G(x,x) - a x^2| over the grid
};

/// Regress G(x,x) = f(2x) - 2 f(x) on x^2; for exact quadratic f the
/// coefficient is 2*lambda and the residual vanishes.  Grid must exclude 0.
QuadraticRecovery recover_quadratic_coefficient(const functions::FunctionSpec& f,
                                                std::span<const double> x_grid);

} // namespace feqlab::analytic
