#include "feqlab/transforms.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace feqlab::transforms {

using functions::Family;
using functions::FunctionSpec;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double checked_log(double v, const FunctionSpec& spec, double arg) {
    if (!(v > 0.0))
        throw DomainViolation("positivity premise fails: " + functions::to_string(spec) + "(" +
                              fmt(arg) + ") = " + fmt(v));
    return std::log(v);
}

} // namespace

int transform_arity(const TransformKind& kind) {
    using T = TransformKind::Type;
    return kind.type == T::KLeft || kind.type == T::KRight ? 3 : 1;
}

double transform_value(const TransformKind& kind, std::span<const FunctionSpec> specs, double w) {
    using T = TransformKind::Type;
    const FunctionSpec& f = specs[0];
    switch (kind.type) {
    case T::FofW:
        return functions::evaluate(f, w);
    case T::LogFofW:
        return checked_log(functions::evaluate(f, w), f, w);
    case T::FofExpW:
        return functions::evaluate(f, std::exp(w));
    case T::LogFofExpW:
        return checked_log(functions::evaluate(f, std::exp(w)), f, std::exp(w));
    case T::ShiftScale:
        return functions::evaluate(f, kind.x0 + kind.sigma * w);
    case T::KLeft: // specs = (f, h, g)
        return functions::evaluate(specs[0], w + kind.fixed) -
               functions::evaluate(specs[1], w - kind.fixed);
    case T::KRight:
        return functions::evaluate(specs[0], kind.fixed + w) -
               functions::evaluate(specs[1], kind.fixed - w);
    case T::GLeft:
        return functions::evaluate(f, w + kind.fixed) - functions::evaluate(f, w) -
               functions::evaluate(f, kind.fixed);
    case T::GRight:
        return functions::evaluate(f, kind.fixed + w) - functions::evaluate(f, kind.fixed) -
               functions::evaluate(f, w);
    }
    throw ConfigError("unhandled transform kind");
}

namespace {

std::string candidate_label(const TransformKind& kind, std::span<const FunctionSpec> specs) {
    if (transform_arity(kind) == 3)
        return "(" + functions::to_string(specs[0]) + ", " + functions::to_string(specs[1]) +
               ", " + functions::to_string(specs[2]) + ")";
    return functions::to_string(specs[0]);
}

/// The log transforms require a strictly positive, hence nowhere-zero, candidate.
bool log_premise_degenerate(const TransformKind& kind, std::span<const FunctionSpec> specs) {
    using T = TransformKind::Type;
    return (kind.type == T::LogFofW || kind.type == T::LogFofExpW) &&
           specs[0].family == Family::Zero;
}

TransformedProcess map_impl(const std::function<double(double)>& fn, std::string label,
                            const simulate::PathEnsemble& ensemble, bool force_degenerate) {
    TransformedProcess out;
    out.candidate = std::move(label);
    out.config = ensemble.config;
    out.source_label = ensemble.label;
    out.conditioning = ensemble.values;
    out.values.assign(ensemble.values.size(), 0.0);
    out.degenerate = force_degenerate;

    const std::size_t m = ensemble.n_times();
    for (std::size_t i = 0; i < ensemble.n_paths(); ++i) {
        for (std::size_t k = 0; k < m; ++k) {
            const double w = ensemble.at(i, k);
            try {
                out.values[i * m + k] = fn(w);
            } catch (const DomainViolation&) {
                out.values[i * m + k] = std::numeric_limits<double>::quiet_NaN();
                if (!out.witness) out.witness = Witness{i, k, w};
                out.degenerate = true;
            }
        }
    }
    return out;
}

} // namespace

TransformedProcess build(const TransformKind& kind, std::span<const FunctionSpec> specs,
                         const simulate::PathEnsemble& ensemble) {
    if (static_cast<int>(specs.size()) != transform_arity(kind))
        throw ConfigError("transform " + to_string(kind) + " takes " +
                          std::to_string(transform_arity(kind)) + " function spec(s), got " +
                          std::to_string(specs.size()));
    auto proc = map_impl([&](double w) { return transform_value(kind, specs, w); },
                         candidate_label(kind, specs), ensemble,
                         log_premise_degenerate(kind, specs));
    proc.kind = kind;
    return proc;
}

TransformedProcess build(const TransformKind& kind, const FunctionSpec& spec,
                         const simulate::PathEnsemble& ensemble) {
    return build(kind, std::span<const FunctionSpec>(&spec, 1), ensemble);
}

TransformedProcess map_ensemble(const std::function<double(double)>& fn, std::string label,
                                const simulate::PathEnsemble& ensemble) {
    return map_impl(fn, std::move(label), ensemble, false);
}

ZeroAtZeroResult zero_at_zero(const TransformKind& kind, std::span<const FunctionSpec> specs) {
    ZeroAtZeroResult out;
    try {
        out.value = transform_value(kind, specs, 0.0);
        out.pass = std::fabs(out.value) <= 1e-12;
    } catch (const DomainViolation&) {
        out.degenerate = true;
    }
    return out;
}

ZeroAtZeroResult zero_at_zero(const TransformKind& kind, const FunctionSpec& spec) {
    return zero_at_zero(kind, std::span<const FunctionSpec>(&spec, 1));
}

std::string to_string(const TransformKind& kind) {
    using T = TransformKind::Type;
    switch (kind.type) {
    case T::FofW:       return "fofw";
    case T::LogFofW:    return "log-fofw";
    case T::FofExpW:    return "fofexpw";
    case T::LogFofExpW: return "log-fofexpw";
    case T::ShiftScale: return "shift-scale:x0=" + fmt(kind.x0) + ",sigma=" + fmt(kind.sigma);
    case T::KLeft:      return "kleft:y=" + fmt(kind.fixed);
    case T::KRight:     return "kright:x=" + fmt(kind.fixed);
    case T::GLeft:      return "gleft:y=" + fmt(kind.fixed);
    case T::GRight:     return "gright:x=" + fmt(kind.fixed);
    }
    return "?";
}

namespace {

double parse_number(std::string_view text, std::string_view what) {
    try {
        return std::stod(std::string(text));
    } catch (const std::exception&) {
        throw ConfigError("bad numeric value for " + std::string(what) + ": '" +
                          std::string(text) + "'");
    }
}

double single_param(std::string_view rest, std::string_view key) {
    auto eq = rest.find('=');
    if (eq == std::string_view::npos || rest.substr(0, eq) != key)
        throw ConfigError("expected parameter '" + std::string(key) + "=...', got '" +
                          std::string(rest) + "'");
    return parse_number(rest.substr(eq + 1), key);
}

} // namespace

TransformKind parse_transform(std::string_view text) {
    auto colon = text.find(':');
    std::string_view name = text.substr(0, colon);
    std::string_view rest =
        colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);

    if (name == "fofw") return TransformKind::fofw();
    if (name == "log-fofw") return TransformKind::log_fofw();
    if (name == "fofexpw") return TransformKind::fofexpw();
    if (name == "log-fofexpw") return TransformKind::log_fofexpw();
    if (name == "kleft") return TransformKind::kleft(single_param(rest, "y"));
    if (name == "kright") return TransformKind::kright(single_param(rest, "x"));
    if (name == "gleft") return TransformKind::gleft(single_param(rest, "y"));
    if (name == "gright") return TransformKind::gright(single_param(rest, "x"));
    if (name == "shift-scale") {
        auto comma = rest.find(',');
        if (comma == std::string_view::npos)
            throw ConfigError("shift-scale needs 'x0=...,sigma=...'");
        return TransformKind::shift_scale(single_param(rest.substr(0, comma), "x0"),
                                          single_param(rest.substr(comma + 1), "sigma"));
    }
    throw ConfigError("unknown transform kind: '" + std::string(name) + "'");
}

void write_csv(const TransformedProcess& proc, std::ostream& out) {
    char buf[40];
    out << "path_index";
    for (double t : proc.config.time_grid) {
        std::snprintf(buf, sizeof buf, "%.17g", t);
        out << ',' << buf;
    }
    out << '\n';
    const std::size_t m = proc.n_times();
    for (std::size_t i = 0; i < proc.n_paths(); ++i) {
        out << i;
        for (std::size_t k = 0; k < m; ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", proc.at(i, k));
            out << ',' << buf;
        }
        out << '\n';
    }
}

} // namespace feqlab::transforms
