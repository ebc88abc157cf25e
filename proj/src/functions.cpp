#include "feqlab/functions.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace feqlab::functions {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

[[noreturn]] void domain_error(const FunctionSpec& spec, double x) {
    throw DomainViolation("argument " + fmt(x) + " outside domain of " + to_string(spec));
}

void validate_knots(const std::vector<std::pair<double, double>>& knots) {
    if (knots.size() < 2)
        throw ConfigError("tabulated spec needs at least two knots");
    for (std::size_t i = 1; i < knots.size(); ++i)
        if (!(knots[i - 1].first < knots[i].first))
            throw ConfigError("tabulated knots must be strictly increasing in x");
}

} // namespace

FunctionSpec FunctionSpec::zero() { return {}; }

FunctionSpec FunctionSpec::linear(double c) {
    return {Family::Linear, Domain::AllReals, c, 0.0, {}, {}};
}

FunctionSpec FunctionSpec::affine(double a, double b) {
    return {Family::Affine, Domain::AllReals, a, b, {}, {}};
}

FunctionSpec FunctionSpec::exponential(double c) {
    return {Family::Exponential, Domain::AllReals, c, 0.0, {}, {}};
}

FunctionSpec FunctionSpec::logarithmic(double c) {
    return {Family::Logarithmic, Domain::PositiveReals, c, 0.0, {}, {}};
}

FunctionSpec FunctionSpec::power(double c) {
    return {Family::Power, Domain::PositiveReals, c, 0.0, {}, {}};
}

FunctionSpec FunctionSpec::quadratic(double lambda, double c0) {
    return {Family::Quadratic, Domain::AllReals, lambda, c0, {}, {}};
}

FunctionSpec FunctionSpec::cubic() {
    return {Family::Cubic, Domain::AllReals, 0.0, 0.0, {}, {}};
}

FunctionSpec FunctionSpec::absolute_value() {
    return {Family::AbsoluteValue, Domain::AllReals, 0.0, 0.0, {}, {}};
}

FunctionSpec FunctionSpec::tabulated(std::vector<std::pair<double, double>> knots,
                                     std::string source) {
    validate_knots(knots);
    // The knot range stands in for the declared domain.
    Domain d = knots.front().first > 0.0 ? Domain::PositiveReals : Domain::AllReals;
    return {Family::Tabulated, d, 0.0, 0.0, std::move(knots), std::move(source)};
}

bool in_domain(const FunctionSpec& spec, double x) {
    if (!std::isfinite(x)) return false;
    switch (spec.family) {
    case Family::Tabulated:
        return x >= spec.knots.front().first && x <= spec.knots.back().first;
    case Family::Logarithmic:
    case Family::Power:
        return x > 0.0;
    default:
        return true;
    }
}

double evaluate(const FunctionSpec& spec, double x) {
    if (!in_domain(spec, x)) domain_error(spec, x);
    switch (spec.family) {
    case Family::Zero:          return 0.0;
    case Family::Linear:        return spec.p0 * x;
    case Family::Affine:        return spec.p0 * x + spec.p1;
    case Family::Exponential:   return std::exp(spec.p0 * x);
    case Family::Logarithmic:   return spec.p0 * std::log(x);
    case Family::Power:         return std::pow(x, spec.p0);
    case Family::Quadratic:     return spec.p0 * x * x + spec.p1;
    case Family::Cubic:         return x * x * x;
    case Family::AbsoluteValue: return std::fabs(x);
    case Family::Tabulated: {
        const auto& k = spec.knots;
        auto it = std::lower_bound(k.begin(), k.end(), x,
                                   [](const auto& kn, double v) { return kn.first < v; });
        if (it == k.begin()) return it->second; // x == first knot
        if (it == k.end() || it->first != x) --it;
        if (it->first == x) return it->second;  // exact knot hit
        auto next = it + 1;
        double u = (x - it->first) / (next->first - it->first);
        return it->second + u * (next->second - it->second);
    }
    }
    throw ConfigError("unhandled function family");
}

Domain equation_domain(EquationKind kind) {
    switch (kind) {
    case EquationKind::CauchyLogarithmic:
    case EquationKind::CauchyPower:
        return Domain::PositiveReals;
    default:
        return Domain::AllReals;
    }
}

int equation_arity(EquationKind kind) {
    return kind == EquationKind::Abel ? 3 : 1;
}

double residual_at(EquationKind kind, std::span<const FunctionSpec> specs, double x, double y) {
    const FunctionSpec& f = specs[0];
    switch (kind) {
    case EquationKind::CauchyAdditive:
        return evaluate(f, x + y) - evaluate(f, x) - evaluate(f, y);
    case EquationKind::CauchyExponential:
        return evaluate(f, x + y) - evaluate(f, x) * evaluate(f, y);
    case EquationKind::CauchyLogarithmic:
        return evaluate(f, x) + evaluate(f, y) - evaluate(f, x * y);
    case EquationKind::CauchyPower:
        return evaluate(f, x * y) - evaluate(f, x) * evaluate(f, y);
    case EquationKind::ConditionalCauchySquares:
        return evaluate(f, x * x - y * y) - evaluate(f, x * x) + evaluate(f, y * y);
    case EquationKind::Abel:
        // specs = (f, h, g): f(x+y) = h(x-y) + g(xy)
        return evaluate(specs[0], x + y) - evaluate(specs[1], x - y) - evaluate(specs[2], x * y);
    case EquationKind::Quadratic:
        return evaluate(f, x + y) + evaluate(f, x - y) - 2.0 * evaluate(f, x) - 2.0 * evaluate(f, y);
    }
    throw ConfigError("unhandled equation kind");
}

namespace {

/// The multiplicative equations admit only everywhere-zero or nowhere-zero
/// solutions; a candidate that vanishes or changes sign on the grid axis is
/// degenerate for them rather than a residual-zero "solution".
bool multiplicative_degenerate(EquationKind kind, const FunctionSpec& f,
                               std::span<const std::pair<double, double>> grid) {
    if (kind != EquationKind::CauchyExponential && kind != EquationKind::CauchyPower)
        return false;
    if (f.family == Family::Zero) return true;
    bool seen_pos = false, seen_neg = false;
    for (const auto& [x, y] : grid) {
        for (double v : {evaluate(f, x), evaluate(f, y)}) {
            if (v == 0.0) return true;
            (v > 0.0 ? seen_pos : seen_neg) = true;
        }
        if (seen_pos && seen_neg) return true;
    }
    return false;
}

} // namespace

ResidualReport residual(EquationKind kind, std::span<const FunctionSpec> specs,
                        std::span<const std::pair<double, double>> pair_grid) {
    if (static_cast<int>(specs.size()) != equation_arity(kind))
        throw ConfigError("equation " + to_string(kind) + " takes " +
                          std::to_string(equation_arity(kind)) + " function spec(s), got " +
                          std::to_string(specs.size()));
    if (pair_grid.empty()) throw ConfigError("empty residual grid");

    ResidualReport rep;
    rep.equation = kind;
    rep.grid_description = std::to_string(pair_grid.size()) + " (x,y) pairs in [" +
                           fmt(pair_grid.front().first) + ", " + fmt(pair_grid.back().first) + "]^2";
    double sum = 0.0;
    for (const auto& [x, y] : pair_grid) {
        double r = std::fabs(residual_at(kind, specs, x, y));
        sum += r;
        if (r >= rep.sup_abs_residual) {
            rep.sup_abs_residual = r;
            rep.worst_point = {x, y};
        }
    }
    rep.mean_abs_residual = sum / static_cast<double>(pair_grid.size());
    rep.degenerate = multiplicative_degenerate(kind, specs[0], pair_grid);
    return rep;
}

ResidualReport residual(EquationKind kind, const FunctionSpec& spec,
                        std::span<const std::pair<double, double>> pair_grid) {
    return residual(kind, std::span<const FunctionSpec>(&spec, 1), pair_grid);
}

double residual_value_scale(EquationKind kind, std::span<const FunctionSpec> specs,
                            std::span<const std::pair<double, double>> pair_grid) {
    if (static_cast<int>(specs.size()) != equation_arity(kind))
        throw ConfigError("equation " + to_string(kind) + " takes " +
                          std::to_string(equation_arity(kind)) + " function spec(s), got " +
                          std::to_string(specs.size()));
    double scale = 0.0;
    const auto bump = [&](const FunctionSpec& s, double p) {
        scale = std::max(scale, std::fabs(evaluate(s, p)));
    };
    for (const auto& [x, y] : pair_grid) {
        switch (kind) {
        case EquationKind::CauchyAdditive:
        case EquationKind::CauchyExponential:
            bump(specs[0], x + y);
            bump(specs[0], x);
            bump(specs[0], y);
            break;
        case EquationKind::CauchyLogarithmic:
        case EquationKind::CauchyPower:
            bump(specs[0], x);
            bump(specs[0], y);
            bump(specs[0], x * y);
            break;
        case EquationKind::ConditionalCauchySquares:
            bump(specs[0], x * x);
            bump(specs[0], y * y);
            bump(specs[0], x * x - y * y);
            break;
        case EquationKind::Abel:
            bump(specs[0], x + y);
            bump(specs[1], x - y);
            bump(specs[2], x * y);
            break;
        case EquationKind::Quadratic:
            bump(specs[0], x + y);
            bump(specs[0], x - y);
            bump(specs[0], x);
            bump(specs[0], y);
            break;
        }
    }
    return scale;
}

namespace {

/// Simplest family representing lambda*x^2 + c0.
FunctionSpec normalized_quadratic(double lambda, double c0) {
    if (lambda == 0.0 && c0 == 0.0) return FunctionSpec::zero();
    if (lambda == 0.0) return FunctionSpec::affine(0.0, c0);
    return FunctionSpec::quadratic(lambda, c0);
}

/// Simplest family representing a*x + d.
FunctionSpec normalized_affine(double a, double d) {
    if (a == 0.0 && d == 0.0) return FunctionSpec::zero();
    if (d == 0.0) return FunctionSpec::linear(a);
    return FunctionSpec::affine(a, d);
}

} // namespace

AbelSpecs expand_abel_triple(const AbelTriple& t) {
    AbelSpecs out;
    out.f = normalized_quadratic(t.a / 4.0, t.h0 + t.d);
    out.h = normalized_quadratic(t.a / 4.0, t.h0);
    out.g = normalized_affine(t.a, t.d);
    return out;
}

double oddness_defect(const FunctionSpec& spec, std::span<const double> grid) {
    double f0 = evaluate(spec, 0.0);
    double sup = 0.0;
    for (double x : grid)
        sup = std::max(sup, std::fabs(evaluate(spec, x) + evaluate(spec, -x) - 2.0 * f0));
    return sup;
}

std::vector<double> default_axis(Domain domain) {
    constexpr int n = 41;
    std::vector<double> axis(n);
    if (domain == Domain::AllReals) {
        for (int i = 0; i < n; ++i)
            axis[i] = -5.0 + 10.0 * static_cast<double>(i) / (n - 1);
    } else {
        // geometric spacing on [0.1, 10]: ratio 100^(1/40) per step
        for (int i = 0; i < n; ++i)
            axis[i] = 0.1 * std::pow(100.0, static_cast<double>(i) / (n - 1));
    }
    return axis;
}

std::vector<std::pair<double, double>> pair_grid(std::span<const double> axis) {
    std::vector<std::pair<double, double>> grid;
    grid.reserve(axis.size() * axis.size());
    for (double x : axis)
        for (double y : axis)
            grid.emplace_back(x, y);
    return grid;
}

std::vector<std::pair<double, double>> default_pair_grid(Domain domain) {
    auto axis = default_axis(domain);
    return pair_grid(axis);
}

std::string to_string(const FunctionSpec& spec) {
    switch (spec.family) {
    case Family::Zero:          return "zero";
    case Family::Linear:        return "linear:c=" + fmt(spec.p0);
    case Family::Affine:        return "affine:a=" + fmt(spec.p0) + ",b=" + fmt(spec.p1);
    case Family::Exponential:   return "exponential:c=" + fmt(spec.p0);
    case Family::Logarithmic:   return "logarithmic:c=" + fmt(spec.p0);
    case Family::Power:         return "power:c=" + fmt(spec.p0);
    case Family::Quadratic:
        return spec.p1 == 0.0 ? "quadratic:lambda=" + fmt(spec.p0)
                              : "quadratic:lambda=" + fmt(spec.p0) + ",c0=" + fmt(spec.p1);
    case Family::Cubic:         return "cubic";
    case Family::AbsoluteValue: return "abs";
    case Family::Tabulated:
        return spec.source.empty()
                   ? "tabulated:" + std::to_string(spec.knots.size()) + "-knots"
                   : "tabulated:@" + spec.source;
    }
    return "?";
}

std::string to_string(EquationKind kind) {
    switch (kind) {
    case EquationKind::CauchyAdditive:           return "cauchy-additive";
    case EquationKind::CauchyExponential:        return "cauchy-exponential";
    case EquationKind::CauchyLogarithmic:        return "cauchy-logarithmic";
    case EquationKind::CauchyPower:              return "cauchy-power";
    case EquationKind::ConditionalCauchySquares: return "conditional-cauchy-squares";
    case EquationKind::Abel:                     return "abel";
    case EquationKind::Quadratic:                return "quadratic";
    }
    return "?";
}

EquationKind parse_equation(std::string_view text) {
    for (auto kind : {EquationKind::CauchyAdditive, EquationKind::CauchyExponential,
                      EquationKind::CauchyLogarithmic, EquationKind::CauchyPower,
                      EquationKind::ConditionalCauchySquares, EquationKind::Abel,
                      EquationKind::Quadratic})
        if (text == to_string(kind)) return kind;
    throw ConfigError("unknown equation kind: " + std::string(text));
}

namespace {

double parse_double(std::string_view text, std::string_view what) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ConfigError("bad numeric value for " + std::string(what) + ": '" +
                          std::string(text) + "'");
    return value;
}

/// Parse "k1=v1,k2=v2" into ordered key/value pairs.
std::vector<std::pair<std::string_view, double>> parse_params(std::string_view text) {
    std::vector<std::pair<std::string_view, double>> out;
    while (!text.empty()) {
        auto comma = text.find(',');
        std::string_view item = text.substr(0, comma);
        text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
        auto eq = item.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("expected key=value in function spec, got '" + std::string(item) + "'");
        out.emplace_back(item.substr(0, eq), parse_double(item.substr(eq + 1), item.substr(0, eq)));
    }
    return out;
}

double require_param(const std::vector<std::pair<std::string_view, double>>& params,
                     std::string_view key, std::string_view family) {
    for (const auto& [k, v] : params)
        if (k == key) return v;
    throw ConfigError("function spec '" + std::string(family) + "' requires parameter '" +
                      std::string(key) + "'");
}

double optional_param(const std::vector<std::pair<std::string_view, double>>& params,
                      std::string_view key, double fallback) {
    for (const auto& [k, v] : params)
        if (k == key) return v;
    return fallback;
}

} // namespace

FunctionSpec parse_spec(std::string_view text) {
    auto colon = text.find(':');
    std::string_view name = text.substr(0, colon);
    std::string_view rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);

    if (name == "zero") return FunctionSpec::zero();
    if (name == "cubic") return FunctionSpec::cubic();
    if (name == "abs") return FunctionSpec::absolute_value();
    if (name == "tabulated") {
        if (rest.size() < 2 || rest[0] != '@')
            throw ConfigError("tabulated spec must be 'tabulated:@file.csv'");
        return load_tabulated_csv(std::string(rest.substr(1)));
    }

    auto params = parse_params(rest);
    if (name == "linear") return FunctionSpec::linear(require_param(params, "c", name));
    if (name == "affine")
        return FunctionSpec::affine(require_param(params, "a", name), require_param(params, "b", name));
    if (name == "exponential") return FunctionSpec::exponential(require_param(params, "c", name));
    if (name == "logarithmic") return FunctionSpec::logarithmic(require_param(params, "c", name));
    if (name == "power") return FunctionSpec::power(require_param(params, "c", name));
    if (name == "quadratic")
        return FunctionSpec::quadratic(require_param(params, "lambda", name),
                                       optional_param(params, "c0", 0.0));
    throw ConfigError("unknown function family: '" + std::string(name) + "'");
}

FunctionSpec load_tabulated_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open tabulated CSV: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty tabulated CSV: " + path);
    // tolerate trailing CR from foreign line endings
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "x,fx")
        throw ConfigError("tabulated CSV must start with header 'x,fx': " + path);
    std::vector<std::pair<double, double>> knots;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ConfigError("bad CSV row '" + line + "' in " + path);
        knots.emplace_back(parse_double(std::string_view(line).substr(0, comma), "x"),
                           parse_double(std::string_view(line).substr(comma + 1), "fx"));
    }
    return FunctionSpec::tabulated(std::move(knots), path);
}

} // namespace feqlab::functions
