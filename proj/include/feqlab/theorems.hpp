#pragma once

/// @file theorems.hpp
/// Per-theorem orchestration: each suite runs a forward checklist (the exact
/// solution passes every applicable check) and a falsification checklist
/// (curated non-solutions fail at least one check), and reports recovered
/// constants.  Suites reuse shared path ensembles; reports are deterministic
/// functions of (config, alpha).

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "feqlab/functions.hpp"
#include "feqlab/simulate.hpp"

namespace feqlab::theorems {

enum class TheoremId { T2_1, T2_2a, T2_2b, T2_2c, T2_3, T3_1, T4_1, T5_1, A1, A2 };

std::string to_string(TheoremId id);
TheoremId parse_theorem(std::string_view text);
const std::vector<TheoremId>& all_theorems();

/// One check on one candidate.  Statistics keep a stable insertion order so
/// serialized reports are reproducible.
struct CheckResult {
    std::string candidate;
    std::string check;
    bool pass = false;
    std::vector<std::pair<std::string, double>> statistics;
};

struct TheoremReport {
    TheoremId id{};
    std::vector<CheckResult> forward;
    std::vector<CheckResult> falsification;
    std::vector<std::pair<std::string, double>> recovered_constants;
    bool overall = false; // every forward check passed AND every falsifier failed >= 1 check
};

/// Ensembles generated once per SimConfig and shared across suites: the (W, B)
/// independent pair plus scalar standard-normal draws for the distributional
/// checks.
struct SharedEnsembles {
    simulate::PathEnsemble w;
    simulate::PathEnsemble b;
    std::vector<double> xi;

    static SharedEnsembles make(const simulate::SimConfig& config);
};

/// Optional replacement of the forward candidate list (e.g. to demonstrate
/// that a non-solution yields `overall = fail` with the failing check named).
/// Theorems whose equation takes a triple expect exactly three specs (f, h, g).
struct Overrides {
    std::vector<functions::FunctionSpec> forward;
};

/// Run one suite.  DegenerateInput / DomainViolation inside a check become
/// named check failures; InsufficientSamples and ConfigError propagate.
TheoremReport run(TheoremId id, const simulate::SimConfig& sim, double alpha,
                  const SharedEnsembles& shared, const Overrides& overrides = {});

/// Convenience overload that generates its own ensembles.
TheoremReport run(TheoremId id, const simulate::SimConfig& sim, double alpha = 0.01);

/// All suites in declaration order over one shared ensemble set.
std::vector<TheoremReport> run_all(const simulate::SimConfig& sim, double alpha = 0.01);

} // namespace feqlab::theorems
