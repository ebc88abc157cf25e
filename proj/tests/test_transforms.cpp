#include <cmath>
#include <vector>

#include <doctest.h>

#include "feqlab/errors.hpp"
#include "feqlab/functions.hpp"
#include "feqlab/simulate.hpp"
#include "feqlab/transforms.hpp"

using namespace feqlab;
using functions::FunctionSpec;
using transforms::TransformKind;

namespace {

simulate::PathEnsemble test_ensemble(std::size_t n_paths = 2000) {
    simulate::SimConfig cfg;
    cfg.master_seed = 42;
    cfg.n_paths = n_paths;
    cfg.time_grid = {0.25, 0.5, 1.0};
    return simulate::generate(cfg, simulate::Label::W);
}

double sup_cell_difference(const transforms::TransformedProcess& a,
                           const transforms::TransformedProcess& b) {
    REQUIRE(a.values.size() == b.values.size());
    double sup = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        sup = std::max(sup, std::abs(a.values[i] - b.values[i]));
    }
    return sup;
}

} // namespace

// The three log/exp chains collapse to the linear-core process c * W.
// ~1e5 sampled points, pointwise tolerance 1e-12.
TEST_CASE("composition identities reduce the chains to the linear core") {
    const double c = 2.5;
    const auto ens = test_ensemble(34000); // x 3 grid times > 1e5 cells
    const auto base = transforms::build(TransformKind::fofw(), FunctionSpec::linear(c), ens);
    REQUIRE_FALSE(base.degenerate);

    const auto log_of_exp =
        transforms::build(TransformKind::log_fofw(), FunctionSpec::exponential(c), ens);
    REQUIRE_FALSE(log_of_exp.degenerate);
    CHECK(sup_cell_difference(log_of_exp, base) <= 1e-12);

    const auto log_family_of_exp =
        transforms::build(TransformKind::fofexpw(), FunctionSpec::logarithmic(c), ens);
    REQUIRE_FALSE(log_family_of_exp.degenerate);
    CHECK(sup_cell_difference(log_family_of_exp, base) <= 1e-12);

    const auto log_of_power_of_exp =
        transforms::build(TransformKind::log_fofexpw(), FunctionSpec::power(c), ens);
    REQUIRE_FALSE(log_of_power_of_exp.degenerate);
    CHECK(sup_cell_difference(log_of_power_of_exp, base) <= 1e-12);
}

TEST_CASE("identity embedding equals the direct transform bitwise") {
    const auto ens = test_ensemble();
    const auto spec = FunctionSpec::quadratic(1.5);
    const auto direct = transforms::build(TransformKind::fofw(), spec, ens);
    const auto embedded = transforms::build(TransformKind::shift_scale(0.0, 1.0), spec, ens);
    CHECK(direct.values == embedded.values);
}

TEST_CASE("shift-scale applies x0 + sigma w inside the candidate") {
    const auto ens = test_ensemble(64);
    const auto spec = FunctionSpec::linear(1.5);
    const auto proc = transforms::build(TransformKind::shift_scale(1.0, 2.0), spec, ens);
    for (std::size_t i = 0; i < proc.n_paths(); ++i) {
        for (std::size_t k = 0; k < proc.n_times(); ++k) {
            const double w = ens.at(i, k);
            CHECK(proc.at(i, k) == 1.5 * (1.0 + 2.0 * w));
            CHECK(proc.w_at(i, k) == w);
        }
    }
}

TEST_CASE("two-variable sections reduce to affine processes for the solution triples") {
    const auto ens = test_ensemble();
    const functions::AbelTriple t{2.0, 1.0, -0.5};
    const auto abel = functions::expand_abel_triple(t);
    const FunctionSpec specs[]{abel.f, abel.h, abel.g};

    for (double y : {-2.0, 1.0, 3.0}) {
        const auto proc = transforms::build(TransformKind::kleft(y), specs, ens);
        REQUIRE_FALSE(proc.degenerate);
        double sup = 0.0;
        for (std::size_t i = 0; i < proc.n_paths(); ++i) {
            for (std::size_t k = 0; k < proc.n_times(); ++k) {
                const double w = ens.at(i, k);
                sup = std::max(sup, std::abs(proc.at(i, k) - (t.a * y * w + t.d)));
            }
        }
        CHECK(sup <= 1e-12 * (1.0 + std::abs(t.a * y) * 6.0));
    }
    for (double x : {-2.0, 0.5}) {
        const auto proc = transforms::build(TransformKind::kright(x), specs, ens);
        double sup = 0.0;
        for (std::size_t i = 0; i < proc.n_paths(); ++i) {
            for (std::size_t k = 0; k < proc.n_times(); ++k) {
                const double w = ens.at(i, k);
                sup = std::max(sup, std::abs(proc.at(i, k) - (t.a * x * w + t.d)));
            }
        }
        CHECK(sup <= 1e-12 * (1.0 + std::abs(t.a * x) * 6.0));
    }

    const auto quad = FunctionSpec::quadratic(1.5);
    for (double y : {-2.0, 1.0}) {
        const auto proc = transforms::build(TransformKind::gleft(y), quad, ens);
        double sup = 0.0;
        for (std::size_t i = 0; i < proc.n_paths(); ++i) {
            for (std::size_t k = 0; k < proc.n_times(); ++k) {
                const double w = ens.at(i, k);
                sup = std::max(sup, std::abs(proc.at(i, k) - 3.0 * y * w));
            }
        }
        CHECK(sup <= 1e-11);
    }
    {
        const auto left = transforms::build(TransformKind::gleft(2.0), quad, ens);
        const auto right = transforms::build(TransformKind::gright(2.0), quad, ens);
        // G is symmetric for a single-candidate construction (up to the
        // rounding of the two subtraction orders).
        CHECK(sup_cell_difference(left, right) <= 1e-12);
    }
}

TEST_CASE("log transforms mark positivity violations with a witness") {
    const auto ens = test_ensemble(500);
    const auto proc = transforms::build(TransformKind::log_fofw(), FunctionSpec::linear(1.0), ens);
    CHECK(proc.degenerate);
    REQUIRE(proc.witness.has_value());
    CHECK(proc.witness->w <= 0.0);
    // The witness is the first violating cell in path-major scan order.
    bool before_witness_all_valid = true;
    const std::size_t wit_flat = proc.witness->path * proc.n_times() + proc.witness->step;
    for (std::size_t flat = 0; flat < wit_flat; ++flat) {
        if (std::isnan(proc.values[flat])) before_witness_all_valid = false;
    }
    CHECK(before_witness_all_valid);
    CHECK(std::isnan(proc.values[wit_flat]));
    // Valid cells are still populated.
    bool found_valid = false;
    for (double v : proc.values) {
        if (!std::isnan(v)) found_valid = true;
    }
    CHECK(found_valid);
}

TEST_CASE("zero candidate is degenerate under log transforms by construction") {
    const auto ens = test_ensemble(64);
    const auto proc = transforms::build(TransformKind::log_fofw(), FunctionSpec::zero(), ens);
    CHECK(proc.degenerate);
    const auto ok = transforms::build(TransformKind::fofw(), FunctionSpec::zero(), ens);
    CHECK_FALSE(ok.degenerate);
}

TEST_CASE("time-zero values follow the per-transform closed forms") {
    const FunctionSpec lin[]{FunctionSpec::linear(2.5)};
    const auto r1 = transforms::zero_at_zero(TransformKind::fofw(), lin);
    CHECK(r1.pass);
    CHECK(r1.value == 0.0);

    const FunctionSpec aff[]{FunctionSpec::affine(1.0, 3.0)};
    const auto r2 = transforms::zero_at_zero(TransformKind::fofw(), aff);
    CHECK_FALSE(r2.pass);
    CHECK(r2.value == 3.0);

    const FunctionSpec expf[]{FunctionSpec::exponential(-1.0)};
    const auto r3 = transforms::zero_at_zero(TransformKind::log_fofw(), expf);
    CHECK(r3.pass); // ln f(0) = ln 1 = 0

    const FunctionSpec logf[]{FunctionSpec::logarithmic(3.0)};
    const auto r4 = transforms::zero_at_zero(TransformKind::fofexpw(), logf);
    CHECK(r4.pass); // f(e^0) = f(1) = 0

    const FunctionSpec pw[]{FunctionSpec::power(0.5)};
    const auto r5 = transforms::zero_at_zero(TransformKind::log_fofexpw(), pw);
    CHECK(r5.pass); // ln f(1) = 0

    // f(0) = 0 makes ln f(0) a domain violation: degenerate, not a crash.
    const auto r6 = transforms::zero_at_zero(TransformKind::log_fofw(), lin);
    CHECK(r6.degenerate);
    CHECK_FALSE(r6.pass);
}

TEST_CASE("transform names round-trip through parse") {
    const TransformKind kinds[] = {
        TransformKind::fofw(),
        TransformKind::log_fofw(),
        TransformKind::fofexpw(),
        TransformKind::log_fofexpw(),
        TransformKind::shift_scale(1.0, 2.0),
        TransformKind::shift_scale(-3.0, 0.5),
        TransformKind::kleft(-2.0),
        TransformKind::kright(3.0),
        TransformKind::gleft(1.0),
        TransformKind::gright(0.5),
    };
    for (const auto& kind : kinds) {
        const std::string text = transforms::to_string(kind);
        CAPTURE(text);
        const auto parsed = transforms::parse_transform(text);
        CHECK(parsed.type == kind.type);
        CHECK(parsed.x0 == kind.x0);
        CHECK(parsed.sigma == kind.sigma);
        CHECK(parsed.fixed == kind.fixed);
    }
    CHECK(transforms::transform_arity(TransformKind::kleft(1.0)) == 3);
    CHECK(transforms::transform_arity(TransformKind::gleft(1.0)) == 1);
    CHECK(transforms::transform_arity(TransformKind::fofw()) == 1);
    CHECK_THROWS_AS((void)transforms::parse_transform("fofq"), ConfigError);
    CHECK_THROWS_AS((void)transforms::parse_transform("shift-scale:x0=1"), ConfigError);
}

TEST_CASE("generic pointwise map fills values and provenance") {
    const auto ens = test_ensemble(16);
    const auto proc = transforms::map_ensemble([](double w) { return 2.0 * w + 1.0; },
                                               "affine-map", ens);
    CHECK(proc.candidate == "affine-map");
    CHECK_FALSE(proc.degenerate);
    for (std::size_t i = 0; i < proc.n_paths(); ++i) {
        for (std::size_t k = 0; k < proc.n_times(); ++k) {
            CHECK(proc.at(i, k) == 2.0 * ens.at(i, k) + 1.0);
        }
    }
}

TEST_CASE("build rejects arity mismatches") {
    const auto ens = test_ensemble(16);
    const FunctionSpec one[]{FunctionSpec::linear(1.0)};
    CHECK_THROWS_AS((void)transforms::build(TransformKind::kleft(1.0), one, ens), ConfigError);
}
