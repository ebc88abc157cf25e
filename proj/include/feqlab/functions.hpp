#pragma once

/// @file functions.hpp
/// Parametric scalar function families, their domains, closed-form solution
/// constructors, and exact residual evaluators for the functional equations
/// under test (additive/exponential/logarithmic/power Cauchy, the conditional
/// Cauchy equation on differences of squares, the Abel equation, and the
/// quadratic equation).

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "feqlab/errors.hpp"

namespace feqlab::functions {

enum class Family {
    Zero,          // f(x) = 0
    Linear,        // f(x) = c x
    Affine,        // f(x) = a x + b
    Exponential,   // f(x) = e^{c x}
    Logarithmic,   // f(x) = c ln x          (domain R+)
    Power,         // f(x) = x^c             (domain R+)
    Quadratic,     // f(x) = lambda x^2 + c0 (c0 defaults to 0)
    Cubic,         // f(x) = x^3
    AbsoluteValue, // f(x) = |x|
    Tabulated,     // piecewise-linear through knots, no extrapolation
};

enum class Domain { AllReals, PositiveReals };

/// One member of a function family.  `p0`/`p1` hold the family parameters
/// (c, (a,b), lambda+offset); Tabulated stores its knots explicitly.
struct FunctionSpec {
    Family family = Family::Zero;
    Domain domain = Domain::AllReals;
    double p0 = 0.0;
    double p1 = 0.0;
    std::vector<std::pair<double, double>> knots; // Tabulated only, ascending x
    std::string source;                           // Tabulated only: origin path for reports

    static FunctionSpec zero();
    static FunctionSpec linear(double c);
    static FunctionSpec affine(double a, double b);
    static FunctionSpec exponential(double c);
    static FunctionSpec logarithmic(double c);
    static FunctionSpec power(double c);
    static FunctionSpec quadratic(double lambda, double c0 = 0.0);
    static FunctionSpec cubic();
    static FunctionSpec absolute_value();
    static FunctionSpec tabulated(std::vector<std::pair<double, double>> knots,
                                  std::string source = {});
};

enum class EquationKind {
    CauchyAdditive,           // f(x+y) = f(x) + f(y)
    CauchyExponential,        // f(x+y) = f(x) f(y)
    CauchyLogarithmic,        // f(x) + f(y) = f(xy),  x,y > 0
    CauchyPower,              // f(xy) = f(x) f(y),    x,y > 0
    ConditionalCauchySquares, // G(x^2 - y^2) = G(x^2) - G(y^2)
    Abel,                     // f(x+y) = h(x-y) + g(xy)
    Quadratic,                // f(x+y) + f(x-y) = 2 f(x) + 2 f(y)
};

/// Pair-grid domain required by an equation kind.
Domain equation_domain(EquationKind kind);

/// Number of FunctionSpec arguments the equation's residual takes
/// (3 for Abel: f, h, g in that order; 1 otherwise).
int equation_arity(EquationKind kind);

struct ResidualReport {
    EquationKind equation;
    std::string grid_description;
    double sup_abs_residual = 0.0;
    double mean_abs_residual = 0.0;
    std::pair<double, double> worst_point{0.0, 0.0};
    /// Candidate is unusable for the equation's multiplicative structure
    /// (identically zero or sign-changing under CauchyExponential/CauchyPower).
    bool degenerate = false;
};

/// Coefficients (a, d, h0) of the Abel solution triple
///   g(x) = a x + d,  h(x) = (a/4) x^2 + h0,  f(x) = (a/4) x^2 + h0 + d.
struct AbelTriple {
    double a = 0.0;
    double d = 0.0;
    double h0 = 0.0;
};

struct AbelSpecs {
    FunctionSpec f, h, g;
};

/// Evaluate the family formula at x.  Throws DomainViolation outside the
/// declared domain (or outside the Tabulated knot range).
double evaluate(const FunctionSpec& spec, double x);

/// True iff x is inside the spec's domain (knot range for Tabulated).
bool in_domain(const FunctionSpec& spec, double x);

/// Pointwise residual LHS - RHS of `kind` at one grid point.
double residual_at(EquationKind kind, std::span<const FunctionSpec> specs, double x, double y);

/// Aggregate |residual| over a pair grid.  `specs` carries one spec, or the
/// (f, h, g) triple for Abel.  Grid points must be valid for the equation's
/// domain; DomainViolation propagates.
ResidualReport residual(EquationKind kind, std::span<const FunctionSpec> specs,
                        std::span<const std::pair<double, double>> pair_grid);

/// Convenience overload for single-spec equations.
ResidualReport residual(EquationKind kind, const FunctionSpec& spec,
                        std::span<const std::pair<double, double>> pair_grid);

/// Expand the closed-form Abel triple into function specs, normalising to the
/// simplest family (Zero / Linear / Affine / Quadratic) that represents each part.
AbelSpecs expand_abel_triple(const AbelTriple& t);

/// sup over the grid of |f(x) + f(-x) - 2 f(0)|: zero exactly for functions
/// that are odd up to an additive constant.  Grid must be symmetric about 0.
double oddness_defect(const FunctionSpec& spec, std::span<const double> grid);

/// Default evaluation axis: 41 equally spaced points on [-5, 5], or 41
/// geometrically spaced points on [0.1, 10] for PositiveReals.
std::vector<double> default_axis(Domain domain);

/// Cartesian square of default_axis(domain).
std::vector<std::pair<double, double>> default_pair_grid(Domain domain);

/// Cartesian square of an explicit axis.
std::vector<std::pair<double, double>> pair_grid(std::span<const double> axis);

/// Scale-aware tolerance for "exactly zero" residuals: 1e-12 * (1 + scale).
inline double zero_tolerance(double scale) { return 1e-12 * (1.0 + scale); }

/// Largest |value| any residual term of `kind` sees on the grid; feeds
/// zero_tolerance so the residual pass criterion tracks the data's magnitude.
double residual_value_scale(EquationKind kind, std::span<const FunctionSpec> specs,
                            std::span<const std::pair<double, double>> pair_grid);

/// Canonical textual forms, e.g. "linear:c=2.5", "quadratic:lambda=1,c0=-0.5",
/// "tabulated:@knots.csv".  parse_spec accepts exactly what to_string emits;
/// Tabulated is parsed from a CSV file with header "x,fx".
std::string to_string(const FunctionSpec& spec);
FunctionSpec parse_spec(std::string_view text);

std::string to_string(EquationKind kind);
EquationKind parse_equation(std::string_view text);

/// Load Tabulated knots from CSV (columns x,fx; header required).
FunctionSpec load_tabulated_csv(const std::string& path);

} // namespace feqlab::functions
