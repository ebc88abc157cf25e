#include "feqlab/mgtest.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "feqlab/rng.hpp"
#include "feqlab/stats.hpp"

namespace feqlab::mgtest {

namespace {

double phi_const1(double) { return 1.0; }
double phi_linear(double w) { return w; }
double phi_square(double w) { return w * w; }
double phi_sign(double w) { return w > 0.0 ? 1.0 : (w < 0.0 ? -1.0 : 0.0); }
double phi_gauss(double w) { return std::exp(-w * w); }

const std::array<Instrument, 5> kInstruments = {{
    {"const1", phi_const1},
    {"linear", phi_linear},
    {"square", phi_square},
    {"sign", phi_sign},
    {"gauss", phi_gauss},
}};

void require_usable(const transforms::TransformedProcess& proc) {
    if (proc.degenerate)
        throw DegenerateInput("degenerate process for candidate " + proc.candidate);
    if (proc.n_paths() < kMinSamples)
        throw InsufficientSamples("martingale test needs >= " + std::to_string(kMinSamples) +
                                  " paths, got " + std::to_string(proc.n_paths()));
}

} // namespace

std::span<const Instrument> default_instruments() { return kInstruments; }

double bonferroni_critical_z(double alpha, std::size_t cells) {
    return rng::normal_quantile(1.0 - alpha / (2.0 * static_cast<double>(cells)));
}

MartingaleVerdict test_martingale(const transforms::TransformedProcess& proc,
                                  std::span<const Instrument> instruments, double alpha) {
    require_usable(proc);
    const std::size_t m = proc.n_times();
    if (m < 2) throw ConfigError("martingale test needs at least two grid times");
    if (instruments.empty()) throw ConfigError("martingale test needs at least one instrument");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must be in (0,1)");

    MartingaleVerdict verdict;
    verdict.candidate = proc.candidate;
    verdict.transform = to_string(proc.kind);
    verdict.seed = proc.config.master_seed;
    verdict.seed_label = to_string(proc.source_label);
    verdict.alpha = alpha;
    verdict.n_paths = proc.n_paths();
    verdict.degenerate = false;

    const std::size_t n = proc.n_paths();
    const std::size_t n_cells = m * (m - 1) / 2 * instruments.size();
    verdict.critical_z = bonferroni_critical_z(alpha, n_cells);

    std::vector<double> d(n), centered(n);
    verdict.pass = true;
    for (std::size_t ks = 0; ks + 1 < m; ++ks) {
        for (std::size_t kt = ks + 1; kt < m; ++kt) {
            for (const auto& instrument : instruments) {
                for (std::size_t i = 0; i < n; ++i)
                    d[i] = (proc.at(i, kt) - proc.at(i, ks)) * instrument.phi(proc.w_at(i, ks));

                const double mean = stats::pairwise_sum(d) / static_cast<double>(n);
                for (std::size_t i = 0; i < n; ++i) {
                    const double c = d[i] - mean;
                    centered[i] = c * c;
                }
                const double sd =
                    std::sqrt(stats::pairwise_sum(centered) / static_cast<double>(n - 1));

                MartingaleCell cell;
                cell.s = proc.config.time_grid[ks];
                cell.t = proc.config.time_grid[kt];
                cell.instrument = instrument.name;
                cell.mean = mean;
                cell.sd = sd;
                // A zero-variance increment is a constant: a martingale iff that
                // constant is zero (e.g. the Zero candidate under FofW).
                cell.z = sd > 0.0 ? mean / (sd / std::sqrt(static_cast<double>(n)))
                                  : (mean == 0.0 ? 0.0 : std::copysign(HUGE_VAL, mean));
                cell.p = 2.0 * rng::normal_cdf(-std::fabs(cell.z));
                if (!(std::fabs(cell.z) <= verdict.critical_z)) verdict.pass = false;
                verdict.cells.push_back(std::move(cell));
            }
        }
    }

    // Tail diagnostics over the whole value matrix and the widest increment.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < m; ++k)
            verdict.max_abs_x = std::max(verdict.max_abs_x, std::fabs(proc.at(i, k)));
        d[i] = proc.at(i, m - 1) - proc.at(i, 0);
    }
    verdict.increment_ex_kurtosis = stats::moments(d).ex_kurtosis;
    return verdict;
}

double increment_identity_defect(const transforms::TransformedProcess& proc,
                                 std::span<const functions::FunctionSpec> specs,
                                 const transforms::TransformKind& kind) {
    if (proc.degenerate)
        throw DegenerateInput("degenerate process for candidate " + proc.candidate);
    const std::size_t m = proc.n_times();
    double sup = 0.0;
    for (std::size_t i = 0; i < proc.n_paths(); ++i) {
        for (std::size_t ks = 0; ks + 1 < m; ++ks) {
            for (std::size_t kt = ks + 1; kt < m; ++kt) {
                const double dw = proc.w_at(i, kt) - proc.w_at(i, ks);
                const double dx = proc.at(i, kt) - proc.at(i, ks);
                sup = std::max(sup, std::fabs(dx - transforms::transform_value(kind, specs, dw)));
            }
        }
    }
    return sup;
}

std::string to_string(DistReport::Test test) {
    switch (test) {
    case DistReport::Test::Normality:             return "normality";
    case DistReport::Test::LogNormality:          return "log-normality";
    case DistReport::Test::BernsteinIndependence: return "bernstein-independence";
    case DistReport::Test::Symmetry:              return "symmetry";
    }
    return "?";
}

DistReport bernstein_check(std::span<const double> x_samples, std::span<const double> y_samples,
                           double alpha) {
    if (x_samples.size() != y_samples.size())
        throw ConfigError("bernstein check needs equal-length samples");
    const std::size_t n = x_samples.size();
    if (n < kMinSamples)
        throw InsufficientSamples("bernstein check needs >= " + std::to_string(kMinSamples) +
                                  " samples, got " + std::to_string(n));

    std::vector<double> z(n), v(n), z2(n), v2(n);
    for (std::size_t i = 0; i < n; ++i) {
        z[i] = x_samples[i] + y_samples[i];
        v[i] = x_samples[i] - y_samples[i];
    }
    // Center before squaring so the squared series probe second moments.
    const double mz = stats::pairwise_sum(z) / static_cast<double>(n);
    const double mv = stats::pairwise_sum(v) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        z[i] -= mz;
        v[i] -= mv;
        z2[i] = z[i] * z[i];
        v2[i] = v[i] * v[i];
    }
    for (auto* series : {&z, &v, &z2, &v2}) {
        const auto mom = stats::moments(*series);
        if (!(mom.sd > 0.0))
            throw InsufficientSamples("zero-variance samples: correlation undefined");
    }

    const double sqrt_n = std::sqrt(static_cast<double>(n));
    const double critical = bonferroni_critical_z(alpha, 4);
    DistReport rep;
    rep.test = DistReport::Test::BernsteinIndependence;
    rep.pass = true;
    const std::array<std::tuple<const char*, std::span<const double>, std::span<const double>>, 4>
        cells = {{{"corr_z_v", z, v},
                  {"corr_z2_v", z2, v},
                  {"corr_z_v2", z, v2},
                  {"corr_z2_v2", z2, v2}}};
    for (const auto& [name, a, b] : cells) {
        const double corr = stats::correlation(a, b);
        const double zscore = corr * sqrt_n;
        rep.statistics.emplace_back(name, corr);
        rep.statistics.emplace_back(std::string(name) + "_z", zscore);
        if (!(std::fabs(zscore) <= critical)) rep.pass = false;
    }
    rep.statistics.emplace_back("critical_z", critical);
    return rep;
}

DistReport normality_check(std::span<const double> samples) {
    const std::size_t n = samples.size();
    if (n < kMinSamples)
        throw InsufficientSamples("normality check needs >= " + std::to_string(kMinSamples) +
                                  " samples, got " + std::to_string(n));
    const auto mom = stats::moments(samples);
    if (!(mom.sd > 0.0)) throw InsufficientSamples("zero-variance samples");

    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double nd = static_cast<double>(n);
    const double sup_cdf = stats::ks_distance_normal(sorted, mom.mean, mom.sd);
    const double skew_band = 5.0 * std::sqrt(6.0 / nd);
    const double kurt_band = 5.0 * std::sqrt(24.0 / nd);
    const double cdf_band = 1.95 / std::sqrt(nd);

    DistReport rep;
    rep.test = DistReport::Test::Normality;
    rep.statistics = {
        {"skewness", mom.skewness},
        {"excess_kurtosis", mom.ex_kurtosis},
        {"sup_cdf_distance", sup_cdf},
        {"skewness_band", skew_band},
        {"kurtosis_band", kurt_band},
        {"cdf_band", cdf_band},
    };
    rep.pass = std::fabs(mom.skewness) <= skew_band && std::fabs(mom.ex_kurtosis) <= kurt_band &&
               sup_cdf <= cdf_band;
    return rep;
}

DistReport log_normality_check(std::span<const double> samples) {
    std::vector<double> logs(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!(samples[i] > 0.0))
            throw DomainViolation("log-normality check requires strictly positive samples");
        logs[i] = std::log(samples[i]);
    }
    DistReport rep = normality_check(logs);
    rep.test = DistReport::Test::LogNormality;
    return rep;
}

DistReport symmetry_check(std::span<const double> samples) {
    const std::size_t n = samples.size();
    if (n < kMinSamples)
        throw InsufficientSamples("symmetry check needs >= " + std::to_string(kMinSamples) +
                                  " samples, got " + std::to_string(n));
    const auto mom = stats::moments(samples);
    const double se = mom.sd / std::sqrt(static_cast<double>(n));

    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> negated(n);
    for (std::size_t i = 0; i < n; ++i) negated[i] = -sorted[n - 1 - i];
    const double sup = stats::ks_distance_two_sample(sorted, negated);
    const double cdf_band = 1.95 / std::sqrt(static_cast<double>(n));

    DistReport rep;
    rep.test = DistReport::Test::Symmetry;
    rep.statistics = {
        {"mean", mom.mean},
        {"mean_band", 5.0 * se},
        {"sup_cdf_distance", sup},
        {"cdf_band", cdf_band},
    };
    rep.pass = std::fabs(mom.mean) <= 5.0 * se && sup <= cdf_band;
    return rep;
}

LinearFit fit_linear_values(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 3)
        throw ConfigError("affine fit needs >= 3 (x, y) points");
    const std::size_t n = xs.size();
    const double nd = static_cast<double>(n);
    const double mx = stats::pairwise_sum(xs) / nd;
    const double my = stats::pairwise_sum(ys) / nd;
    std::vector<double> sxy(n), sxx(n);
    for (std::size_t i = 0; i < n; ++i) {
        sxy[i] = (xs[i] - mx) * (ys[i] - my);
        sxx[i] = (xs[i] - mx) * (xs[i] - mx);
    }
    const double den = stats::pairwise_sum(sxx);
    if (!(den > 0.0)) throw ConfigError("affine fit needs >= 3 distinct x values");

    LinearFit fit;
    fit.a = stats::pairwise_sum(sxy) / den;
    fit.b = my - fit.a * mx;
    for (std::size_t i = 0; i < n; ++i)
        fit.max_deviation = std::max(fit.max_deviation, std::fabs(ys[i] - (fit.a * xs[i] + fit.b)));
    return fit;
}

LinearFit fit_linear(const functions::FunctionSpec& spec, std::span<const double> grid) {
    std::vector<double> ys(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) ys[i] = functions::evaluate(spec, grid[i]);
    return fit_linear_values(grid, ys);
}

} // namespace feqlab::mgtest
