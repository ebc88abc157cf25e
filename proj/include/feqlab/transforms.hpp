#pragma once

/// @file transforms.hpp
/// Builds the theorem-specific processes X_t = T(f; W_t) from function specs
/// and path ensembles: the direct/log/exp-composed transforms, shift-scale
/// embeddings, and the two-variable K / G sections with one argument frozen.
/// Domain violations are data (degenerate flag + first witness), not errors:
/// they are themselves the verdict that a candidate violates a theorem premise.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "feqlab/functions.hpp"
#include "feqlab/simulate.hpp"

namespace feqlab::transforms {

struct TransformKind {
    enum class Type {
        FofW,       // X_t = f(W_t)
        LogFofW,    // X_t = ln f(W_t)
        FofExpW,    // X_t = f(e^{W_t})
        LogFofExpW, // X_t = ln f(e^{W_t})
        ShiftScale, // X_t = G(x0 + sigma W_t)
        KLeft,      // X_t = K(W_t, y) = f(W_t+y) - h(W_t-y)
        KRight,     // X_t = K(x, W_t) = f(x+W_t) - h(x-W_t)
        GLeft,      // X_t = G(W_t, y) = f(W_t+y) - f(W_t) - f(y)
        GRight,     // X_t = G(x, W_t) = f(x+W_t) - f(x) - f(W_t)
    };

    Type type = Type::FofW;
    double x0 = 0.0;    // ShiftScale
    double sigma = 1.0; // ShiftScale
    double fixed = 0.0; // y for KLeft/GLeft, x for KRight/GRight

    static TransformKind fofw() { return {}; }
    static TransformKind log_fofw() { return {Type::LogFofW}; }
    static TransformKind fofexpw() { return {Type::FofExpW}; }
    static TransformKind log_fofexpw() { return {Type::LogFofExpW}; }
    static TransformKind shift_scale(double x0, double sigma) {
        return {Type::ShiftScale, x0, sigma};
    }
    static TransformKind kleft(double y) { return {Type::KLeft, 0.0, 1.0, y}; }
    static TransformKind kright(double x) { return {Type::KRight, 0.0, 1.0, x}; }
    static TransformKind gleft(double y) { return {Type::GLeft, 0.0, 1.0, y}; }
    static TransformKind gright(double x) { return {Type::GRight, 0.0, 1.0, x}; }
};

std::string to_string(const TransformKind& kind);
TransformKind parse_transform(std::string_view text);

/// Number of FunctionSpec arguments: 3 (f, h, g) for K kinds, 1 otherwise.
int transform_arity(const TransformKind& kind);

/// First point at which a transform's inner value left the candidate's domain.
struct Witness {
    std::size_t path = 0;
    std::size_t step = 0;
    double w = 0.0; // underlying Brownian value at the violation
};

struct TransformedProcess {
    TransformKind kind;
    std::string candidate;          // textual spec(s), for reports
    simulate::SimConfig config;     // provenance copied from the source
    simulate::Label source_label = simulate::Label::W;
    std::vector<double> values;       // row-major n_paths x |time_grid|
    std::vector<double> conditioning; // underlying W values, same layout
    bool degenerate = false;          // domain violation hit, or Zero candidate
    std::optional<Witness> witness;

    std::size_t n_paths() const { return config.n_paths; }
    std::size_t n_times() const { return config.time_grid.size(); }
    double at(std::size_t path, std::size_t k) const {
        return values[path * config.time_grid.size() + k];
    }
    double w_at(std::size_t path, std::size_t k) const {
        return conditioning[path * config.time_grid.size() + k];
    }
};

/// Scalar value of the transform at underlying value w.
/// Throws DomainViolation where the candidate's premise fails.
double transform_value(const TransformKind& kind, std::span<const functions::FunctionSpec> specs,
                       double w);

/// Apply the transform pointwise over the ensemble.  A domain violation marks
/// the process degenerate with the first witness (path-major scan order) and
/// stores NaN at violating cells; it never throws.  The Zero family is marked
/// degenerate under the log transforms (positivity premise).
TransformedProcess build(const TransformKind& kind, std::span<const functions::FunctionSpec> specs,
                         const simulate::PathEnsemble& ensemble);

/// Single-spec convenience overload.
TransformedProcess build(const TransformKind& kind, const functions::FunctionSpec& spec,
                         const simulate::PathEnsemble& ensemble);

/// Generic pointwise map for processes outside the named transform table
/// (used by fitted two-variable forms).  `fn` may throw DomainViolation.
TransformedProcess map_ensemble(const std::function<double(double)>& fn, std::string label,
                                const simulate::PathEnsemble& ensemble);

struct ZeroAtZeroResult {
    bool pass = false;       // transform value at W_0 = 0 within 1e-12 of 0
    bool degenerate = false; // the time-0 value itself violates the domain
    double value = 0.0;
};

/// Evaluates the transform at the implicit W_0 = 0 (f(0), ln f(0), f(1),
/// ln f(1) per kind) and checks it vanishes.
ZeroAtZeroResult zero_at_zero(const TransformKind& kind,
                              std::span<const functions::FunctionSpec> specs);
ZeroAtZeroResult zero_at_zero(const TransformKind& kind, const functions::FunctionSpec& spec);

/// CSV dump with the same scheme as ensembles.
void write_csv(const TransformedProcess& proc, std::ostream& out);

} // namespace feqlab::transforms
