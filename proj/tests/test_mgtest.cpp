#include <cmath>
#include <string>
#include <vector>

#include <doctest.h>

#include "feqlab/errors.hpp"
#include "feqlab/functions.hpp"
#include "feqlab/mgtest.hpp"
#include "feqlab/report.hpp"
#include "feqlab/rng.hpp"
#include "feqlab/simulate.hpp"
#include "feqlab/transforms.hpp"

using namespace feqlab;
using functions::FunctionSpec;
using transforms::TransformKind;

namespace {

simulate::PathEnsemble drift_ensemble() {
    simulate::SimConfig cfg;
    cfg.master_seed = 42;
    cfg.n_paths = 200000;
    cfg.time_grid = {0.5, 1.0};
    static const auto ens = simulate::generate(cfg, simulate::Label::W);
    return ens;
}

const mgtest::MartingaleCell& find_cell(const mgtest::MartingaleVerdict& verdict,
                                        const std::string& instrument) {
    for (const auto& cell : verdict.cells) {
        if (cell.instrument == instrument) return cell;
    }
    REQUIRE(false);
    return verdict.cells.front();
}

transforms::TransformedProcess constant_increment_process(double step_value) {
    transforms::TransformedProcess proc;
    proc.kind = TransformKind::fofw();
    proc.candidate = "constant-step";
    proc.config.master_seed = 1;
    proc.config.n_paths = mgtest::kMinSamples;
    proc.config.time_grid = {0.5, 1.0};
    proc.values.assign(2 * mgtest::kMinSamples, 0.0);
    proc.conditioning.assign(2 * mgtest::kMinSamples, 0.0);
    for (std::size_t i = 0; i < mgtest::kMinSamples; ++i) proc.values[2 * i + 1] = step_value;
    return proc;
}

} // namespace

// Frozen drift oracles for the two canonical non-solutions:
//   E[(W_t^2 - W_s^2) * 1]   = t - s            = 0.5  (variance 1.5)
//   E[(W_t^3 - W_s^3) * W_s] = 3 s (t - s)       = 0.75 (variance ~17.25)
// at (s, t) = (0.5, 1.0).
TEST_CASE("square and cube drifts match the closed-form conditional means") {
    const auto ens = drift_ensemble();

    const auto quad = transforms::build(TransformKind::fofw(), FunctionSpec::quadratic(1.0), ens);
    const auto vq = mgtest::test_martingale(quad, mgtest::default_instruments(), 0.01);
    CHECK_FALSE(vq.pass);
    const auto& q_cell = find_cell(vq, "const1");
    CHECK(q_cell.mean == doctest::Approx(0.5).epsilon(0.04));
    CHECK(q_cell.sd * q_cell.sd == doctest::Approx(1.5).epsilon(0.1));
    CHECK(std::fabs(q_cell.z) > 5.0);
    CHECK(q_cell.p < 1e-6);

    const auto cube = transforms::build(TransformKind::fofw(), FunctionSpec::cubic(), ens);
    const auto vc = mgtest::test_martingale(cube, mgtest::default_instruments(), 0.01);
    CHECK_FALSE(vc.pass);
    const auto& c_cell = find_cell(vc, "linear");
    CHECK(c_cell.mean == doctest::Approx(0.75).epsilon(0.07));
    CHECK(c_cell.sd * c_cell.sd == doctest::Approx(17.25).epsilon(0.06));
    CHECK(c_cell.z > 5.0);
}

TEST_CASE("linear candidate passes the moment-condition test end to end") {
    simulate::SimConfig cfg;
    cfg.master_seed = 42;
    cfg.n_paths = 200000;
    cfg.time_grid = {0.25, 0.5, 1.0};
    const auto ens = simulate::generate(cfg, simulate::Label::W);
    const auto proc = transforms::build(TransformKind::fofw(), FunctionSpec::linear(2.5), ens);
    const auto verdict = mgtest::test_martingale(proc, mgtest::default_instruments(), 0.01);

    CHECK(verdict.pass);
    CHECK(verdict.cells.size() == 15); // 3 ordered pairs x 5 instruments
    CHECK(verdict.critical_z == mgtest::bonferroni_critical_z(0.01, 15));
    CHECK(verdict.seed == 42);
    CHECK(verdict.seed_label == "W");
    CHECK(verdict.n_paths == 200000);
    // Pair-major, instrument-minor ordering.
    CHECK(verdict.cells.front().s == 0.25);
    CHECK(verdict.cells.front().t == 0.5);
    CHECK(verdict.cells.front().instrument == "const1");
    CHECK(verdict.cells.back().s == 0.5);
    CHECK(verdict.cells.back().t == 1.0);
    CHECK(verdict.cells.back().instrument == "gauss");
    for (const auto& cell : verdict.cells) CHECK(std::fabs(cell.z) <= verdict.critical_z);

    // Same inputs, same verdict, byte for byte.
    const auto again = mgtest::test_martingale(proc, mgtest::default_instruments(), 0.01);
    CHECK(report::to_json(verdict).dump() == report::to_json(again).dump());
}

TEST_CASE("constant increments studentize to zero or infinity") {
    const auto zero = constant_increment_process(0.0);
    const auto vz = mgtest::test_martingale(zero, mgtest::default_instruments(), 0.01);
    CHECK(vz.pass);
    for (const auto& cell : vz.cells) {
        CHECK(cell.z == 0.0);
        CHECK(cell.sd == 0.0);
    }

    const auto one = constant_increment_process(1.0);
    const auto vo = mgtest::test_martingale(one, mgtest::default_instruments(), 0.01);
    CHECK_FALSE(vo.pass);
    const auto& cell = find_cell(vo, "const1");
    CHECK(cell.mean == 1.0);
    CHECK(cell.z == HUGE_VAL);
    CHECK(cell.p == 0.0);
    // Instruments vanishing at w = 0 keep their cells at exactly zero.
    CHECK(find_cell(vo, "linear").z == 0.0);
    CHECK(find_cell(vo, "sign").z == 0.0);
}

TEST_CASE("martingale test rejects unusable inputs") {
    simulate::SimConfig cfg;
    cfg.master_seed = 42;
    cfg.n_paths = 100;
    cfg.time_grid = {0.5, 1.0};
    const auto small = simulate::generate(cfg, simulate::Label::W);
    const auto proc = transforms::build(TransformKind::fofw(), FunctionSpec::linear(1.0), small);
    CHECK_THROWS_AS((void)mgtest::test_martingale(proc, mgtest::default_instruments(), 0.01),
                    InsufficientSamples);

    cfg.n_paths = 20000;
    cfg.time_grid = {1.0};
    const auto single = simulate::generate(cfg, simulate::Label::W);
    const auto p1 = transforms::build(TransformKind::fofw(), FunctionSpec::linear(1.0), single);
    CHECK_THROWS_AS((void)mgtest::test_martingale(p1, mgtest::default_instruments(), 0.01),
                    ConfigError);

    cfg.time_grid = {0.5, 1.0};
    const auto ens = simulate::generate(cfg, simulate::Label::W);
    const auto degen = transforms::build(TransformKind::log_fofw(), FunctionSpec::linear(1.0), ens);
    CHECK_THROWS_AS((void)mgtest::test_martingale(degen, mgtest::default_instruments(), 0.01),
                    DegenerateInput);

    const auto ok = transforms::build(TransformKind::fofw(), FunctionSpec::linear(1.0), ens);
    CHECK_THROWS_AS((void)mgtest::test_martingale(ok, mgtest::default_instruments(), 0.0),
                    ConfigError);
    CHECK_THROWS_AS((void)mgtest::test_martingale(ok, {}, 0.01), ConfigError);
}

TEST_CASE("increment identity separates additive cores from curvature") {
    simulate::SimConfig cfg;
    cfg.master_seed = 7;
    cfg.n_paths = 1000;
    cfg.time_grid = {0.25, 0.5, 1.0};
    const auto ens = simulate::generate(cfg, simulate::Label::W);

    const FunctionSpec lin[]{FunctionSpec::linear(2.5)};
    const auto linear_proc = transforms::build(TransformKind::fofw(), lin, ens);
    // c*a - c*b and c*(a - b) differ by rounding only, so the defect is at
    // floating-point noise level for the additive core.
    CHECK(mgtest::increment_identity_defect(linear_proc, lin, TransformKind::fofw()) <= 1e-12);

    const FunctionSpec quad[]{FunctionSpec::quadratic(1.0)};
    const auto quad_proc = transforms::build(TransformKind::fofw(), quad, ens);
    CHECK(mgtest::increment_identity_defect(quad_proc, quad, TransformKind::fofw()) > 0.1);
}

// Bernstein independence cells for the cube, frozen from the Gaussian moment
// table: corr((Z - EZ)^2, (V - EV)^2) = 19440 / sqrt(21240 * 21240) ~ 0.9152
// with Z = W^3 + B^3, V = W^3 - B^3 at t = 1.
TEST_CASE("independence falsifier flags the cube and accepts the linear map") {
    simulate::SimConfig cfg;
    cfg.master_seed = 42;
    cfg.n_paths = 200000;
    cfg.time_grid = {1.0};
    const auto [w, b] = simulate::generate_pair(cfg);

    std::vector<double> xs(cfg.n_paths), ys(cfg.n_paths);
    for (std::size_t i = 0; i < cfg.n_paths; ++i) {
        const double wv = w.at(i, 0);
        const double bv = b.at(i, 0);
        xs[i] = wv * wv * wv;
        ys[i] = bv * bv * bv;
    }
    const auto cube = mgtest::bernstein_check(xs, ys, 0.01);
    CHECK_FALSE(cube.pass);
    double corr22 = 0.0, z22 = 0.0;
    for (const auto& [name, value] : cube.statistics) {
        if (name == "corr_z2_v2") corr22 = value;
        if (name == "corr_z2_v2_z") z22 = value;
    }
    CHECK(corr22 == doctest::Approx(0.9152).epsilon(0.01));
    CHECK(z22 > 100.0);

    for (std::size_t i = 0; i < cfg.n_paths; ++i) {
        xs[i] = 2.5 * w.at(i, 0);
        ys[i] = 2.5 * b.at(i, 0);
    }
    const auto lin = mgtest::bernstein_check(xs, ys, 0.01);
    CHECK(lin.pass);
    CHECK(lin.statistics.size() == 9); // 4 correlations, 4 z-scores, critical_z
    CHECK(lin.statistics.back().first == "critical_z");

    // Squares correlate Z with V^2 at corr = 1/sqrt(2): covariance 16 over
    // sd(Z) sd(V^2) = 2 * sqrt(128) = 16 sqrt(2).
    for (std::size_t i = 0; i < cfg.n_paths; ++i) {
        xs[i] = w.at(i, 0) * w.at(i, 0);
        ys[i] = b.at(i, 0) * b.at(i, 0);
    }
    const auto sq = mgtest::bernstein_check(xs, ys, 0.01);
    CHECK_FALSE(sq.pass);
    double corr12 = 0.0;
    for (const auto& [name, value] : sq.statistics) {
        if (name == "corr_z_v2") corr12 = value;
    }
    CHECK(corr12 == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.05));
}

TEST_CASE("bernstein check rejects malformed samples") {
    const std::vector<double> a(20000, 1.0), b(19999, 1.0);
    CHECK_THROWS_AS((void)mgtest::bernstein_check(a, b, 0.01), ConfigError);
    const std::vector<double> small(100, 1.0);
    CHECK_THROWS_AS((void)mgtest::bernstein_check(small, small, 0.01), InsufficientSamples);
    CHECK_THROWS_AS((void)mgtest::bernstein_check(a, a, 0.01), InsufficientSamples); // zero variance
}

TEST_CASE("distribution checks separate gaussian from chi-square samples") {
    const auto xi = simulate::standard_normal_samples(42, 100000);

    const auto normal = mgtest::normality_check(xi);
    CHECK(normal.pass);
    CHECK(normal.test == mgtest::DistReport::Test::Normality);
    CHECK(mgtest::to_string(normal.test) == "normality");

    std::vector<double> chi(xi.size()), expo(xi.size());
    for (std::size_t i = 0; i < xi.size(); ++i) {
        chi[i] = xi[i] * xi[i];
        expo[i] = std::exp(xi[i]);
    }
    const auto skewed = mgtest::normality_check(chi);
    CHECK_FALSE(skewed.pass);
    // chi-square(1) skewness is sqrt(8) ~ 2.83, far beyond the 5 sqrt(6/n) band.
    CHECK(skewed.statistics.front().first == "skewness");
    CHECK(skewed.statistics.front().second == doctest::Approx(std::sqrt(8.0)).epsilon(0.1));

    const auto logn = mgtest::log_normality_check(expo);
    CHECK(logn.pass);
    CHECK(logn.test == mgtest::DistReport::Test::LogNormality);
    CHECK_FALSE(mgtest::log_normality_check(chi).pass); // log chi-square is left-skewed
    std::vector<double> with_zero = expo;
    with_zero[0] = 0.0;
    CHECK_THROWS_AS((void)mgtest::log_normality_check(with_zero), DomainViolation);

    // The 1.95/sqrt(n) reflection band sits near the 5% level, so the
    // happy-path sample is pinned to a seed verified to fall inside it
    // (seed 42's draw lands in the null tail at sup distance 0.0089).
    const auto sym_sample = simulate::standard_normal_samples(3, 100000);
    const auto sym = mgtest::symmetry_check(sym_sample);
    CHECK(sym.pass);
    std::vector<double> shifted(xi.size());
    for (std::size_t i = 0; i < xi.size(); ++i) shifted[i] = xi[i] + 0.5;
    CHECK_FALSE(mgtest::symmetry_check(shifted).pass);
    CHECK_FALSE(mgtest::symmetry_check(chi).pass);

    CHECK_THROWS_AS((void)mgtest::normality_check(std::vector<double>(50, 0.5)),
                    InsufficientSamples);
}

// Affine least squares against the square on the default 41-point axis:
// slope 0 by symmetry, intercept = mean of x^2 = 8.75, and the worst grid
// deviation 16.25 at the endpoints (above the 12.5 minimax floor).
TEST_CASE("affine fit of the square has the frozen normal-equation solution") {
    const auto axis = functions::default_axis(functions::Domain::AllReals);
    const auto fit = mgtest::fit_linear(FunctionSpec::quadratic(1.0), axis);
    CHECK(std::fabs(fit.a) <= 1e-12);
    CHECK(fit.b == doctest::Approx(8.75).epsilon(1e-12));
    CHECK(fit.max_deviation == doctest::Approx(16.25).epsilon(1e-12));
    CHECK(fit.max_deviation >= 12.5);

    const auto exact = mgtest::fit_linear(FunctionSpec::affine(2.0, 7.0), axis);
    CHECK(exact.a == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(exact.b == doctest::Approx(7.0).epsilon(1e-12));
    CHECK(exact.max_deviation <= 1e-10);

    const double xs[] = {0.0, 1.0, 2.0};
    const double ys[] = {1.0, 3.0, 5.0};
    const auto direct = mgtest::fit_linear_values(xs, ys);
    CHECK(direct.a == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(direct.b == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(direct.max_deviation <= 1e-14);

    const double two_xs[] = {0.0, 1.0};
    CHECK_THROWS_AS((void)mgtest::fit_linear_values(two_xs, std::span(ys).first(2)), ConfigError);
}

TEST_CASE("bonferroni critical value inverts the two-sided tail") {
    CHECK(mgtest::bonferroni_critical_z(0.05, 1) ==
          doctest::Approx(1.959963984540054).epsilon(1e-12));
    const double z15 = mgtest::bonferroni_critical_z(0.01, 15);
    CHECK(30.0 * rng::normal_cdf(-z15) == doctest::Approx(0.01).epsilon(1e-9));
    CHECK(z15 > mgtest::bonferroni_critical_z(0.01, 5));
    CHECK(mgtest::bonferroni_critical_z(0.01, 5) > mgtest::bonferroni_critical_z(0.05, 5));
}
