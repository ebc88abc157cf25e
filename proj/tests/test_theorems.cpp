#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <doctest.h>

#include "feqlab/errors.hpp"
#include "feqlab/functions.hpp"
#include "feqlab/report.hpp"
#include "feqlab/simulate.hpp"
#include "feqlab/theorems.hpp"

using namespace feqlab;
using functions::FunctionSpec;
using theorems::TheoremId;

namespace {

simulate::SimConfig unit_config(std::uint64_t seed = 42) {
    simulate::SimConfig cfg;
    cfg.master_seed = seed;
    cfg.n_paths = 20000;
    cfg.time_grid = {0.25, 0.5, 1.0};
    return cfg;
}

double constant(const theorems::TheoremReport& rep, const std::string& name) {
    for (const auto& [key, value] : rep.recovered_constants) {
        if (key == name) return value;
    }
    REQUIRE_MESSAGE(false, "missing recovered constant ", name);
    return 0.0;
}

bool has_check(const std::vector<theorems::CheckResult>& checks, const std::string& name) {
    return std::any_of(checks.begin(), checks.end(),
                       [&](const theorems::CheckResult& r) { return r.check == name; });
}

/// candidate -> its checks, preserving which list they came from.
std::map<std::string, std::vector<const theorems::CheckResult*>>
by_candidate(const std::vector<theorems::CheckResult>& checks) {
    std::map<std::string, std::vector<const theorems::CheckResult*>> groups;
    for (const auto& r : checks) groups[r.candidate].push_back(&r);
    return groups;
}

} // namespace

TEST_CASE("all ten suites pass forward and defeat their falsifiers") {
    const auto cfg = unit_config();
    const auto reports = theorems::run_all(cfg, 0.01);
    REQUIRE(reports.size() == theorems::all_theorems().size());

    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& rep = reports[i];
        CAPTURE(theorems::to_string(rep.id));
        CHECK(rep.id == theorems::all_theorems()[i]); // declaration order
        for (const auto& check : rep.forward) {
            CAPTURE(check.candidate);
            CAPTURE(check.check);
            CHECK(check.pass);
        }
        // Every falsifier candidate fails at least one check.
        for (const auto& [cand, checks] : by_candidate(rep.falsification)) {
            CAPTURE(cand);
            CHECK(std::any_of(checks.begin(), checks.end(),
                              [](const theorems::CheckResult* r) { return !r->pass; }));
        }
        CHECK(rep.overall);
    }

    // Suite-table spot checks: the advertised operations are actually wired in.
    const auto& t2_1 = reports[0];
    CHECK(has_check(t2_1.forward, "residual:cauchy-additive"));
    CHECK(has_check(t2_1.forward, "martingale:fofw"));
    CHECK(has_check(t2_1.forward, "zero-at-zero:fofw"));
    CHECK(has_check(t2_1.forward, "bernstein"));
    CHECK(has_check(t2_1.forward, "affine-fit"));
    CHECK(by_candidate(t2_1.falsification).size() == 3);

    const auto& t2_2a = reports[1];
    CHECK(has_check(t2_2a.forward, "positivity"));
    CHECK(has_check(t2_2a.forward, "log-normality"));
    CHECK(has_check(t2_2a.forward, "martingale:log-fofw"));

    const auto& t3_1 = reports[5];
    CHECK(has_check(t3_1.forward, "martingale:shift-scale:x0=0,sigma=1"));
    CHECK(has_check(t3_1.forward, "martingale:shift-scale:x0=1,sigma=2"));
    CHECK(has_check(t3_1.forward, "martingale:shift-scale:x0=-3,sigma=0.5"));

    const auto& t4_1 = reports[6];
    CHECK(has_check(t4_1.forward, "edge-constant"));
    CHECK(has_check(t4_1.forward, "bilinear-fit"));
    int k_sections = 0;
    for (const auto& c : t4_1.forward) {
        if (c.check.starts_with("martingale:kleft") || c.check.starts_with("martingale:kright"))
            ++k_sections;
    }
    CHECK(k_sections == 6);

    const auto& t5_1 = reports[7];
    CHECK(has_check(t5_1.forward, "quadratic-recovery"));

    const auto& a2 = reports[9];
    int fitted = 0;
    for (const auto& c : a2.forward) {
        if (c.check.starts_with("martingale:fitted-")) ++fitted;
    }
    CHECK(fitted == 6);

    // Recovered constants: statistical paths within 1e-2, deterministic fits
    // within 1e-10 of the constructing constants.
    CHECK(std::fabs(constant(reports[0], "c") - 2.5) <= 1e-10);
    CHECK(std::fabs(constant(reports[1], "c") - (-1.0)) <= 1e-10);
    CHECK(std::fabs(constant(reports[2], "c") - 3.0) <= 1e-10);
    CHECK(std::fabs(constant(reports[3], "c") - 0.5) <= 1e-10);
    CHECK(std::fabs(constant(reports[4], "c") - 2.5) <= 1e-10);
    CHECK(std::fabs(constant(reports[5], "lambda") - 1.5) <= 1e-10);
    CHECK(std::fabs(constant(reports[6], "a") - 2.0) <= 1e-10);
    CHECK(std::fabs(constant(reports[6], "d") - 1.0) <= 1e-10);
    CHECK(std::fabs(constant(reports[6], "h0") - (-0.5)) <= 1e-12);
    CHECK(std::fabs(constant(reports[7], "a") - 3.0) <= 1e-10);
    CHECK(std::fabs(constant(reports[7], "lambda") - 1.5) <= 1e-10);
    CHECK(std::fabs(constant(reports[8], "a") - 2.5) <= 1e-10);
    CHECK(std::fabs(constant(reports[8], "b") - 0.0) <= 1e-10);
    CHECK(std::fabs(constant(reports[8], "a2") - 1.0) <= 1e-10);
    CHECK(std::fabs(constant(reports[8], "b2") - 3.0) <= 1e-10);
    CHECK(std::fabs(constant(reports[9], "a") - 2.0) <= 1e-10);
    CHECK(std::fabs(constant(reports[9], "b") - (-1.0)) <= 1e-10);
    CHECK(std::fabs(constant(reports[9], "c") - 0.5) <= 1e-10);
    CHECK(std::fabs(constant(reports[9], "d") - 3.0) <= 1e-10);
}

TEST_CASE("overriding the forward candidate with a non-solution names the failure") {
    const auto cfg = unit_config();
    const auto shared = theorems::SharedEnsembles::make(cfg);

    // Abel triple with h replaced by the cube: the equation residual is the
    // named failing check.
    const auto triple = functions::expand_abel_triple({2.0, 1.0, -0.5});
    theorems::Overrides bad;
    bad.forward = {triple.f, FunctionSpec::cubic(), triple.g};
    const auto rep = theorems::run(TheoremId::T4_1, cfg, 0.01, shared, bad);
    CHECK_FALSE(rep.overall);
    bool named = false;
    for (const auto& check : rep.forward) {
        if (!check.pass && check.check == "residual:abel") named = true;
    }
    CHECK(named);

    // Single-candidate suites too: the square is not additive.
    theorems::Overrides quad;
    quad.forward = {FunctionSpec::quadratic(1.0)};
    const auto rep2 = theorems::run(TheoremId::T2_1, cfg, 0.01, shared, quad);
    CHECK_FALSE(rep2.overall);
    bool residual_failed = false;
    for (const auto& check : rep2.forward) {
        if (check.check == "residual:cauchy-additive") residual_failed = !check.pass;
    }
    CHECK(residual_failed);
}

TEST_CASE("override arity is validated per suite") {
    const auto cfg = unit_config();
    const auto shared = theorems::SharedEnsembles::make(cfg);
    theorems::Overrides two;
    two.forward = {FunctionSpec::linear(1.0), FunctionSpec::linear(2.0)};
    CHECK_THROWS_AS((void)theorems::run(TheoremId::T2_1, cfg, 0.01, shared, two), ConfigError);
    theorems::Overrides one;
    one.forward = {FunctionSpec::linear(1.0)};
    CHECK_THROWS_AS((void)theorems::run(TheoremId::T4_1, cfg, 0.01, shared, one), ConfigError);
    CHECK_THROWS_AS((void)theorems::run(TheoremId::A2, cfg, 0.01, shared, one), ConfigError);
    CHECK_THROWS_AS((void)theorems::run(TheoremId::T2_1, cfg, 0.0, shared), ConfigError);
}

TEST_CASE("insufficient path counts propagate instead of masquerading as verdicts") {
    auto cfg = unit_config();
    cfg.n_paths = 100;
    CHECK_THROWS_AS((void)theorems::run(TheoremId::T2_1, cfg, 0.01), InsufficientSamples);
}

TEST_CASE("theorem reports are deterministic functions of the config") {
    const auto cfg = unit_config(7);
    const auto a = theorems::run(TheoremId::T2_1, cfg, 0.01);
    const auto b = theorems::run(TheoremId::T2_1, cfg, 0.01);
    CHECK(report::to_json(a).dump() == report::to_json(b).dump());

    const auto shared = theorems::SharedEnsembles::make(cfg);
    const auto c = theorems::run(TheoremId::T2_1, cfg, 0.01, shared);
    CHECK(report::to_json(a).dump() == report::to_json(c).dump());
}

TEST_CASE("parse and print of theorem ids round-trip") {
    for (TheoremId id : theorems::all_theorems()) {
        CHECK(theorems::parse_theorem(theorems::to_string(id)) == id);
    }
    CHECK_THROWS_AS((void)theorems::parse_theorem("T9_9"), ConfigError);
}

// The artifact-level statement of each equivalence: a candidate solves the
// equation exactly if and only if every sampled/analytic check on its
// transformed process passes, across a frozen sweep of twenty seeds.
TEST_CASE("equation residual and process checks agree across twenty seeds") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto cfg = unit_config(seed);
        const auto reports = theorems::run_all(cfg, 1e-3);
        for (const auto& rep : reports) {
            CAPTURE(seed);
            CAPTURE(theorems::to_string(rep.id));
            CHECK(rep.overall);
            std::vector<const std::vector<theorems::CheckResult>*> lists = {&rep.forward,
                                                                            &rep.falsification};
            for (const auto* list : lists) {
                for (const auto& [cand, checks] : by_candidate(*list)) {
                    const theorems::CheckResult* residual = nullptr;
                    bool others_pass = true;
                    for (const auto* r : checks) {
                        if (r->check.starts_with("residual:")) {
                            residual = r;
                        } else {
                            others_pass = others_pass && r->pass;
                        }
                    }
                    if (residual == nullptr) continue; // suite has no equation form
                    CAPTURE(cand);
                    CHECK(residual->pass == others_pass);
                }
            }
        }
    }
}
