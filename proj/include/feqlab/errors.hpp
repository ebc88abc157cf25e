#pragma once

#include <stdexcept>
#include <string>

namespace feqlab {

/// Argument outside a function family's declared domain (e.g. log of a
/// non-positive value), or an equation grid incompatible with the domain.
class DomainViolation : public std::runtime_error {
public:
    explicit DomainViolation(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or inconsistent configuration (grids, counts, parse failures).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Input flagged degenerate upstream (domain-violating transform, Zero family)
/// fed into an operation that requires a usable process.
class DegenerateInput : public std::runtime_error {
public:
    explicit DegenerateInput(const std::string& what) : std::runtime_error(what) {}
};

/// Sample size below the statistical minimum, or zero-variance samples for
/// which the requested statistic is undefined.
class InsufficientSamples : public std::runtime_error {
public:
    explicit InsufficientSamples(const std::string& what) : std::runtime_error(what) {}
};

/// Rank-deficient design matrix in a least-squares fit.
class SingularGrid : public std::runtime_error {
public:
    explicit SingularGrid(const std::string& what) : std::runtime_error(what) {}
};

} // namespace feqlab
