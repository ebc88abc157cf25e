#pragma once

/// @file simulate.hpp
/// Reproducible ensembles of Brownian-motion marginals on explicit time
/// grids.  Paths are assembled from Gaussian increments whose stream key is
/// (master_seed, label, path, step), so any single value can be regenerated
/// in isolation and the result is independent of evaluation order.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "feqlab/errors.hpp"
#include "feqlab/rng.hpp"

namespace feqlab::simulate {

struct SimConfig {
    std::uint64_t master_seed = 42;
    std::size_t n_paths = 200000;
    std::vector<double> time_grid; // strictly increasing, first element > 0
    bool antithetic = false;

    /// Throws ConfigError on violated invariants.
    void validate() const;
};

enum class Label { W, B };

std::string to_string(Label label);

/// N x |time_grid| matrix of Brownian values (row-major), with provenance.
struct PathEnsemble {
    SimConfig config;
    Label label = Label::W;
    std::vector<double> values; // row-major: path-major, then grid index

    std::size_t n_paths() const { return config.n_paths; }
    std::size_t n_times() const { return config.time_grid.size(); }
    double at(std::size_t path, std::size_t k) const {
        return values[path * config.time_grid.size() + k];
    }
};

/// Generate one ensemble.  Bit-identical for identical (config, label).
PathEnsemble generate(const SimConfig& config, Label label);

/// Generate the independent (W, B) pair from disjoint stream families.
std::pair<PathEnsemble, PathEnsemble> generate_pair(const SimConfig& config);

/// n reproducible standard-normal draws from the scalar xi stream.
std::vector<double> standard_normal_samples(std::uint64_t seed, std::size_t n);

/// CSV dump: header "path_index,<t1>,...": one row per path, 17 significant digits.
void write_csv(const PathEnsemble& ensemble, std::ostream& out);

} // namespace feqlab::simulate
