#include "feqlab/simulate.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace feqlab::simulate {

void SimConfig::validate() const {
    if (n_paths == 0) throw ConfigError("n_paths must be positive");
    if (time_grid.empty()) throw ConfigError("time_grid must be non-empty");
    if (!(time_grid.front() > 0.0)) throw ConfigError("time_grid must start after t=0");
    for (std::size_t k = 1; k < time_grid.size(); ++k)
        if (!(time_grid[k - 1] < time_grid[k]))
            throw ConfigError("time_grid must be strictly increasing");
    if (antithetic && (n_paths < 2 || n_paths % 2 != 0))
        throw ConfigError("antithetic sampling needs an even n_paths >= 2");
}

std::string to_string(Label label) { return label == Label::W ? "W" : "B"; }

PathEnsemble generate(const SimConfig& config, Label label) {
    config.validate();
    PathEnsemble out;
    out.config = config;
    out.label = label;
    const std::size_t n = config.n_paths;
    const std::size_t m = config.time_grid.size();
    out.values.resize(n * m);

    const auto stream = label == Label::W ? rng::Stream::W : rng::Stream::B;
    for (std::size_t i = 0; i < n; ++i) {
        // Antithetic pairs share the draw index and differ only in sign.
        const std::uint64_t draw_index = config.antithetic ? i / 2 : i;
        const double sign = config.antithetic && (i % 2 == 1) ? -1.0 : 1.0;
        double w = 0.0;
        double t_prev = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            const double dt = config.time_grid[k] - t_prev;
            const double z = rng::normal_draw(config.master_seed, stream, draw_index,
                                              static_cast<std::uint32_t>(k));
            w += std::sqrt(dt) * sign * z;
            out.values[i * m + k] = w;
            t_prev = config.time_grid[k];
        }
    }
    return out;
}

std::pair<PathEnsemble, PathEnsemble> generate_pair(const SimConfig& config) {
    return {generate(config, Label::W), generate(config, Label::B)};
}

std::vector<double> standard_normal_samples(std::uint64_t seed, std::size_t n) {
    if (n == 0) throw ConfigError("standard_normal_samples needs n >= 1");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = rng::normal_draw(seed, rng::Stream::Xi, i, 0);
    return out;
}

void write_csv(const PathEnsemble& ensemble, std::ostream& out) {
    char buf[40];
    out << "path_index";
    for (double t : ensemble.config.time_grid) {
        std::snprintf(buf, sizeof buf, "%.17g", t);
        out << ',' << buf;
    }
    out << '\n';
    const std::size_t m = ensemble.n_times();
    for (std::size_t i = 0; i < ensemble.n_paths(); ++i) {
        out << i;
        for (std::size_t k = 0; k < m; ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", ensemble.at(i, k));
            out << ',' << buf;
        }
        out << '\n';
    }
}

} // namespace feqlab::simulate
