// feqlab: command-line laboratory runner.
//
// Subcommands: residual, simulate, martingale, bernstein, kolmogorov,
// derivative, theorem, suite, emit-plot-data.  Every run persists its
// effective configuration (flat key=value file) so it can be replayed
// bit-for-bit with --config.  Exit codes: 0 all checks passed, 1 at least one
// check failed, 2 configuration/IO error, 3 insufficient samples or
// degenerate input.

#include <cmath>
#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "feqlab/analytic.hpp"
#include "feqlab/errors.hpp"
#include "feqlab/functions.hpp"
#include "feqlab/mgtest.hpp"
#include "feqlab/report.hpp"
#include "feqlab/simulate.hpp"
#include "feqlab/theorems.hpp"
#include "feqlab/transforms.hpp"

namespace {

using feqlab::ConfigError;
using feqlab::report::format_double;

struct RunConfig {
    std::uint64_t seed = 42;
    std::size_t paths = 200000;
    std::vector<double> grid = {0.25, 0.5, 1.0};
    bool antithetic = false;
    double alpha = 0.01;
    std::vector<std::string> funcs;
    std::string theorem = "all";
    std::string out_dir = "out";
    std::string format = "json"; // json | csv | both
    std::string equation;        // residual
    std::string transform = "fofw";
    std::string label = "W"; // simulate
    double t_horizon = 1.0;  // kolmogorov
};

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> grid;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            std::size_t pos = 0;
            grid.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("bad grid entry: " + item);
        }
    }
    if (grid.empty()) throw ConfigError("empty grid");
    return grid;
}

std::string grid_to_string(const std::vector<double>& grid) {
    std::string out;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (i) out += ',';
        out += format_double(grid[i]);
    }
    return out;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

/// Flat key=value config with [sim] / [test] / [run] sections.
RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    RunConfig cfg;
    cfg.funcs.clear();
    std::string section;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[' && t.back() == ']') {
            section = t.substr(1, t.size() - 2);
            if (section != "sim" && section != "test" && section != "run") {
                throw ConfigError(path + ":" + std::to_string(lineno) +
                                  ": unknown section [" + section + "]");
            }
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
        }
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        const std::string qual = section + "." + key;
        try {
            if (qual == "sim.seed") {
                cfg.seed = std::stoull(value);
            } else if (qual == "sim.paths") {
                cfg.paths = std::stoull(value);
            } else if (qual == "sim.grid") {
                cfg.grid = parse_grid(value);
            } else if (qual == "sim.antithetic") {
                cfg.antithetic = (value == "1" || value == "true");
            } else if (qual == "test.alpha") {
                cfg.alpha = std::stod(value);
            } else if (qual == "run.func") {
                cfg.funcs.push_back(value);
            } else if (qual == "run.theorem") {
                cfg.theorem = value;
            } else if (qual == "run.out") {
                cfg.out_dir = value;
            } else if (qual == "run.format") {
                cfg.format = value;
            } else if (qual == "run.equation") {
                cfg.equation = value;
            } else if (qual == "run.transform") {
                cfg.transform = value;
            } else if (qual == "run.label") {
                cfg.label = value;
            } else if (qual == "run.t") {
                cfg.t_horizon = std::stod(value);
            } else {
                throw ConfigError(path + ":" + std::to_string(lineno) + ": unknown key " + qual);
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": bad value for " + qual);
        }
    }
    return cfg;
}

std::string config_to_text(const RunConfig& cfg) {
    std::string out;
    out += "[sim]\n";
    out += "seed = " + std::to_string(cfg.seed) + "\n";
    out += "paths = " + std::to_string(cfg.paths) + "\n";
    out += "grid = " + grid_to_string(cfg.grid) + "\n";
    out += "antithetic = " + std::string(cfg.antithetic ? "1" : "0") + "\n";
    out += "\n[test]\n";
    out += "alpha = " + format_double(cfg.alpha) + "\n";
    out += "\n[run]\n";
    out += "theorem = " + cfg.theorem + "\n";
    out += "out = " + cfg.out_dir + "\n";
    out += "format = " + cfg.format + "\n";
    if (!cfg.equation.empty()) out += "equation = " + cfg.equation + "\n";
    out += "transform = " + cfg.transform + "\n";
    out += "label = " + cfg.label + "\n";
    out += "t = " + format_double(cfg.t_horizon) + "\n";
    for (const auto& f : cfg.funcs) out += "func = " + f + "\n";
    return out;
}

feqlab::simulate::SimConfig sim_config(const RunConfig& cfg) {
    feqlab::simulate::SimConfig sim;
    sim.master_seed = cfg.seed;
    sim.n_paths = cfg.paths;
    sim.time_grid = cfg.grid;
    sim.antithetic = cfg.antithetic;
    return sim;
}

std::vector<feqlab::functions::FunctionSpec> parse_funcs(const RunConfig& cfg) {
    std::vector<feqlab::functions::FunctionSpec> specs;
    specs.reserve(cfg.funcs.size());
    for (const auto& text : cfg.funcs) {
        specs.push_back(feqlab::functions::parse_spec(text));
    }
    return specs;
}

void ensure_out_dir(const RunConfig& cfg) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + cfg.out_dir);
}

void persist_config(const RunConfig& cfg) {
    feqlab::report::write_file(cfg.out_dir + "/run_config.cfg", config_to_text(cfg));
}

void write_report(const RunConfig& cfg, const std::string& name,
                  const feqlab::report::Json& doc) {
    feqlab::report::write_file(cfg.out_dir + "/" + name, doc.dump());
}

bool wants_csv(const RunConfig& cfg) { return cfg.format == "csv" || cfg.format == "both"; }
bool wants_json(const RunConfig& cfg) { return cfg.format != "csv"; }

// ---- CSV plot emission (shared header strings with emit-plot-data) --------

constexpr const char* kMartingaleHeader = "s,t,instrument,mean,sd,z,p\n";
constexpr const char* kCurveHeader = "x,value\n";
constexpr const char* kDefectHeader = "x,defect\n";
constexpr const char* kTheoremHeader = "section,candidate,check,pass\n";

std::string martingale_csv(const feqlab::mgtest::MartingaleVerdict& verdict) {
    std::string out = kMartingaleHeader;
    for (const auto& cell : verdict.cells) {
        out += format_double(cell.s) + "," + format_double(cell.t) + "," + cell.instrument + "," +
               format_double(cell.mean) + "," + format_double(cell.sd) + "," +
               format_double(cell.z) + "," + format_double(cell.p) + "\n";
    }
    return out;
}

std::string curve_csv(const char* header, const std::vector<std::pair<double, double>>& rows) {
    std::string out = header;
    for (const auto& [x, v] : rows) {
        out += format_double(x) + "," + format_double(v) + "\n";
    }
    return out;
}

std::string theorem_csv(const feqlab::theorems::TheoremReport& rep) {
    std::string out = kTheoremHeader;
    const auto emit = [&](const char* section, const feqlab::theorems::CheckResult& c) {
        out += std::string(section) + "," + c.candidate + "," + c.check + "," +
               (c.pass ? "1" : "0") + "\n";
    };
    for (const auto& c : rep.forward) emit("forward", c);
    for (const auto& c : rep.falsification) emit("falsification", c);
    return out;
}

// ---- subcommand bodies -----------------------------------------------------

int cmd_residual(const RunConfig& cfg) {
    if (cfg.equation.empty()) throw ConfigError("residual requires --equation");
    const auto specs = parse_funcs(cfg);
    const auto kind = feqlab::functions::parse_equation(cfg.equation);
    const int arity = feqlab::functions::equation_arity(kind);
    if (static_cast<int>(specs.size()) != arity) {
        throw ConfigError("equation " + cfg.equation + " takes " + std::to_string(arity) +
                          " --func argument(s), got " + std::to_string(specs.size()));
    }
    const auto grid =
        feqlab::functions::default_pair_grid(feqlab::functions::equation_domain(kind));
    const auto rep = feqlab::functions::residual(kind, specs, grid);
    const double scale = feqlab::functions::residual_value_scale(kind, specs, grid);
    const double tol = feqlab::functions::zero_tolerance(scale);
    const bool pass = rep.sup_abs_residual <= tol;

    ensure_out_dir(cfg);
    persist_config(cfg);
    auto doc = feqlab::report::to_json(rep);
    doc.add("tolerance", feqlab::report::Json::real(tol));
    doc.add("pass", feqlab::report::Json::boolean(pass));
    if (wants_json(cfg)) write_report(cfg, "residual.json", doc);
    std::cout << "residual " << feqlab::functions::to_string(kind)
              << " sup=" << format_double(rep.sup_abs_residual) << " tol=" << format_double(tol)
              << (pass ? " pass" : " FAIL") << "\n";
    return pass ? 0 : 1;
}

int cmd_simulate(const RunConfig& cfg) {
    const auto sim = sim_config(cfg);
    sim.validate();
    feqlab::simulate::Label label;
    if (cfg.label == "W") {
        label = feqlab::simulate::Label::W;
    } else if (cfg.label == "B") {
        label = feqlab::simulate::Label::B;
    } else {
        throw ConfigError("label must be W or B, got " + cfg.label);
    }
    const auto ens = feqlab::simulate::generate(sim, label);
    ensure_out_dir(cfg);
    persist_config(cfg);
    const std::string path = cfg.out_dir + "/ensemble_" + cfg.label + ".csv";
    {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw ConfigError("cannot open for writing: " + path);
        feqlab::simulate::write_csv(ens, out);
        if (!out) throw ConfigError("write failed: " + path);
    }
    std::cout << "wrote " << path << " (" << ens.n_paths() << " paths x " << ens.n_times()
              << " times)\n";
    return 0;
}

int cmd_martingale(const RunConfig& cfg) {
    const auto specs = parse_funcs(cfg);
    const auto kind = feqlab::transforms::parse_transform(cfg.transform);
    const int arity = feqlab::transforms::transform_arity(kind);
    if (static_cast<int>(specs.size()) != arity) {
        throw ConfigError("transform " + cfg.transform + " takes " + std::to_string(arity) +
                          " --func argument(s), got " + std::to_string(specs.size()));
    }
    const auto sim = sim_config(cfg);
    const auto ens = feqlab::simulate::generate(sim, feqlab::simulate::Label::W);
    const auto proc = feqlab::transforms::build(kind, specs, ens);
    const auto verdict =
        feqlab::mgtest::test_martingale(proc, feqlab::mgtest::default_instruments(), cfg.alpha);

    ensure_out_dir(cfg);
    persist_config(cfg);
    if (wants_json(cfg)) write_report(cfg, "martingale.json", feqlab::report::to_json(verdict));
    if (wants_csv(cfg)) {
        feqlab::report::write_file(cfg.out_dir + "/plot_martingale.csv", martingale_csv(verdict));
    }
    double max_abs_z = 0.0;
    for (const auto& cell : verdict.cells) max_abs_z = std::max(max_abs_z, std::abs(cell.z));
    std::cout << "martingale " << verdict.candidate << " under " << verdict.transform
              << ": max|z|=" << format_double(max_abs_z)
              << " critical=" << format_double(verdict.critical_z)
              << (verdict.pass ? " pass" : " FAIL") << "\n";
    return verdict.pass ? 0 : 1;
}

int cmd_bernstein(const RunConfig& cfg) {
    const auto specs = parse_funcs(cfg);
    if (specs.size() != 1) throw ConfigError("bernstein takes exactly one --func");
    const auto sim = sim_config(cfg);
    const auto shared = feqlab::theorems::SharedEnsembles::make(sim);
    const std::size_t k = shared.w.n_times() - 1;
    std::vector<double> xs(shared.w.n_paths());
    std::vector<double> ys(shared.b.n_paths());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        xs[i] = feqlab::functions::evaluate(specs[0], shared.w.at(i, k));
    }
    for (std::size_t i = 0; i < ys.size(); ++i) {
        ys[i] = feqlab::functions::evaluate(specs[0], shared.b.at(i, k));
    }
    const auto rep = feqlab::mgtest::bernstein_check(xs, ys, cfg.alpha);

    ensure_out_dir(cfg);
    persist_config(cfg);
    auto doc = feqlab::report::to_json(rep);
    doc.add("candidate", feqlab::report::Json::str(cfg.funcs[0]));
    doc.add("t", feqlab::report::Json::real(sim.time_grid[k]));
    if (wants_json(cfg)) write_report(cfg, "bernstein.json", doc);
    std::cout << "bernstein " << cfg.funcs[0] << (rep.pass ? " pass" : " FAIL") << "\n";
    return rep.pass ? 0 : 1;
}

int cmd_kolmogorov(const RunConfig& cfg) {
    const auto specs = parse_funcs(cfg);
    if (specs.size() != 1) throw ConfigError("kolmogorov takes exactly one --func");
    const auto& f = specs[0];
    const double T = cfg.t_horizon;
    if (!(T > 0.0)) throw ConfigError("--t must be positive");
    const auto rule = feqlab::analytic::gauss_hermite(64);

    const std::vector<double> t_grid = {0.25 * T, 0.5 * T, 0.75 * T};
    std::vector<double> x_grid;
    const bool positive = f.domain == feqlab::functions::Domain::PositiveReals;
    const double lo = positive ? 0.5 : -3.0;
    const double hi = 3.0;
    for (int i = 0; i < 21; ++i) {
        x_grid.push_back(lo + (hi - lo) * static_cast<double>(i) / 20.0);
    }
    const double resid = feqlab::analytic::kolmogorov_residual(f, T, t_grid, x_grid, rule);
    const double budget = f.family == feqlab::functions::Family::Exponential ? 1e-5 : 1e-6;
    const bool pass = resid <= budget;

    const double t1 = 0.5 * T;
    const double t2 = T;
    std::vector<std::pair<double, double>> ti_curve;
    double ti_sup = 0.0;
    for (double x : x_grid) {
        const double d = std::abs(feqlab::analytic::heat_smooth(f, t1, x, rule) -
                                  feqlab::analytic::heat_smooth(f, t2, x, rule));
        ti_curve.emplace_back(x, d);
        ti_sup = std::max(ti_sup, d);
    }

    ensure_out_dir(cfg);
    persist_config(cfg);
    using feqlab::report::Json;
    Json doc = Json::object();
    doc.add("type", Json::str("analytic"));
    doc.add("candidate", Json::str(cfg.funcs[0]));
    doc.add("horizon", Json::real(T));
    doc.add("kolmogorov_residual", Json::real(resid));
    doc.add("budget", Json::real(budget));
    doc.add("pass", Json::boolean(pass));
    Json curve = Json::array();
    for (const auto& [x, d] : ti_curve) {
        Json row = Json::object();
        row.add("x", Json::real(x));
        row.add("defect", Json::real(d));
        curve.push(std::move(row));
    }
    Json ti = Json::object();
    ti.add("t1", Json::real(t1));
    ti.add("t2", Json::real(t2));
    ti.add("sup_defect", Json::real(ti_sup));
    ti.add("curve", std::move(curve));
    doc.add("time_invariance", std::move(ti));
    if (wants_json(cfg)) write_report(cfg, "analytic.json", doc);
    if (wants_csv(cfg)) {
        feqlab::report::write_file(cfg.out_dir + "/plot_time_invariance.csv",
                                   curve_csv(kDefectHeader, ti_curve));
    }
    std::cout << "kolmogorov " << cfg.funcs[0] << " residual=" << format_double(resid)
              << " budget=" << format_double(budget) << (pass ? " pass" : " FAIL") << "\n";
    return pass ? 0 : 1;
}

int cmd_derivative(const RunConfig& cfg) {
    const auto specs = parse_funcs(cfg);
    if (specs.size() != 1) throw ConfigError("derivative takes exactly one --func");
    const auto rule = feqlab::analytic::gauss_hermite(64);
    const auto axis = feqlab::functions::default_axis(feqlab::functions::Domain::AllReals);
    const auto vals = feqlab::analytic::smoothed_derivative(specs[0], axis, rule);
    const auto [mn, mx] = std::minmax_element(vals.begin(), vals.end());
    const double spread = *mx - *mn;
    const bool pass = spread <= 1e-8;

    std::vector<std::pair<double, double>> curve;
    for (std::size_t i = 0; i < axis.size(); ++i) curve.emplace_back(axis[i], vals[i]);

    ensure_out_dir(cfg);
    persist_config(cfg);
    using feqlab::report::Json;
    Json doc = Json::object();
    doc.add("type", Json::str("derivative-curve"));
    doc.add("candidate", Json::str(cfg.funcs[0]));
    Json jcurve = Json::array();
    for (const auto& [x, v] : curve) {
        Json row = Json::object();
        row.add("x", Json::real(x));
        row.add("value", Json::real(v));
        jcurve.push(std::move(row));
    }
    doc.add("curve", std::move(jcurve));
    doc.add("spread", Json::real(spread));
    doc.add("pass", Json::boolean(pass));
    if (wants_json(cfg)) write_report(cfg, "derivative.json", doc);
    if (wants_csv(cfg)) {
        feqlab::report::write_file(cfg.out_dir + "/plot_derivative.csv",
                                   curve_csv(kCurveHeader, curve));
    }
    std::cout << "derivative " << cfg.funcs[0] << " spread=" << format_double(spread)
              << (pass ? " constant" : " non-constant") << "\n";
    return pass ? 0 : 1;
}

int run_theorem_set(const RunConfig& cfg, const std::vector<feqlab::theorems::TheoremId>& ids,
                    const feqlab::theorems::Overrides& overrides) {
    const auto sim = sim_config(cfg);
    const auto shared = feqlab::theorems::SharedEnsembles::make(sim);
    ensure_out_dir(cfg);
    persist_config(cfg);
    bool all_pass = true;
    for (const auto id : ids) {
        const auto rep = feqlab::theorems::run(id, sim, cfg.alpha, shared, overrides);
        all_pass = all_pass && rep.overall;
        const std::string name = "theorem_" + feqlab::theorems::to_string(id);
        if (wants_json(cfg)) write_report(cfg, name + ".json", feqlab::report::to_json(rep));
        if (wants_csv(cfg)) {
            feqlab::report::write_file(cfg.out_dir + "/" + name + ".csv", theorem_csv(rep));
        }
        std::cout << feqlab::report::summary_line(rep) << "\n";
    }
    return all_pass ? 0 : 1;
}

int cmd_theorem(const RunConfig& cfg) {
    if (cfg.theorem.empty() || cfg.theorem == "all") {
        throw ConfigError("theorem requires --theorem <id> (use `suite` to run all)");
    }
    feqlab::theorems::Overrides overrides;
    overrides.forward = parse_funcs(cfg);
    return run_theorem_set(cfg, {feqlab::theorems::parse_theorem(cfg.theorem)}, overrides);
}

int cmd_suite(const RunConfig& cfg) {
    if (!cfg.funcs.empty()) {
        throw ConfigError("suite runs the default candidates; --func not accepted");
    }
    return run_theorem_set(cfg, feqlab::theorems::all_theorems(), {});
}

// ---- emit-plot-data --------------------------------------------------------

int cmd_emit_plot_data(const RunConfig& cfg, const std::string& report_path) {
    std::ifstream in(report_path);
    if (!in) throw ConfigError("cannot open report: " + report_path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("bad report JSON: " + std::string(e.what()));
    }
    const std::string type = doc.value("type", "");
    ensure_out_dir(cfg);
    const auto num = [](const nlohmann::json& j, const char* key) {
        return format_double(j.value(key, 0.0));
    };
    if (type == "martingale") {
        std::string out = kMartingaleHeader;
        for (const auto& cell : doc.value("pairs", nlohmann::json::array())) {
            out += num(cell, "s") + "," + num(cell, "t") + "," +
                   cell.value("instrument", std::string{}) + "," + num(cell, "mean") + "," +
                   num(cell, "sd") + "," + num(cell, "z") + "," + num(cell, "p") + "\n";
        }
        feqlab::report::write_file(cfg.out_dir + "/plot_martingale.csv", out);
        std::cout << "wrote " << cfg.out_dir << "/plot_martingale.csv\n";
    } else if (type == "derivative-curve") {
        std::string out = kCurveHeader;
        for (const auto& row : doc.value("curve", nlohmann::json::array())) {
            out += num(row, "x") + "," + num(row, "value") + "\n";
        }
        feqlab::report::write_file(cfg.out_dir + "/plot_derivative.csv", out);
        std::cout << "wrote " << cfg.out_dir << "/plot_derivative.csv\n";
    } else if (type == "analytic") {
        std::string out = kDefectHeader;
        const auto ti = doc.value("time_invariance", nlohmann::json::object());
        for (const auto& row : ti.value("curve", nlohmann::json::array())) {
            out += num(row, "x") + "," + num(row, "defect") + "\n";
        }
        feqlab::report::write_file(cfg.out_dir + "/plot_time_invariance.csv", out);
        std::cout << "wrote " << cfg.out_dir << "/plot_time_invariance.csv\n";
    } else if (type == "theorem") {
        std::string out = kTheoremHeader;
        const auto emit = [&](const char* section, const nlohmann::json& checks) {
            for (const auto& c : checks) {
                out += std::string(section) + "," + c.value("candidate", std::string{}) + "," +
                       c.value("check", std::string{}) + "," +
                       (c.value("pass", false) ? "1" : "0") + "\n";
            }
        };
        emit("forward", doc.value("forward", nlohmann::json::array()));
        emit("falsification", doc.value("falsification", nlohmann::json::array()));
        feqlab::report::write_file(cfg.out_dir + "/plot_theorem.csv", out);
        std::cout << "wrote " << cfg.out_dir << "/plot_theorem.csv\n";
    } else {
        throw ConfigError("report type not plottable: '" + type + "'");
    }
    return 0;
}

// ---- option plumbing -------------------------------------------------------

struct Staging {
    std::uint64_t seed = 42;
    std::string paths_text;
    std::string grid_text;
    bool antithetic = false;
    double alpha = 0.01;
    std::vector<std::string> funcs;
    std::string theorem;
    std::string out_dir;
    std::string format;
    std::string equation;
    std::string transform;
    std::string label;
    double t_horizon = 1.0;
    std::string config_path;
    std::string report_path;
};

void add_common_options(CLI::App* sub, Staging& st) {
    sub->add_option("--seed", st.seed, "master RNG seed");
    sub->add_option("--paths", st.paths_text, "number of simulated paths");
    sub->add_option("--grid", st.grid_text, "comma-separated time grid, e.g. 0.25,0.5,1.0");
    sub->add_flag("--antithetic", st.antithetic, "use antithetic path pairs");
    sub->add_option("--alpha", st.alpha, "test significance level");
    sub->add_option("--func", st.funcs, "function spec (repeatable), e.g. linear:c=2.5");
    sub->add_option("--out", st.out_dir, "output directory");
    sub->add_option("--format", st.format, "report format: json|csv|both");
    sub->add_option("--config", st.config_path, "config file; flags override file values");
}

bool given(const CLI::App* sub, const std::string& name) {
    const CLI::Option* opt = sub->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
}

RunConfig merge_config(const CLI::App* sub, const Staging& st) {
    RunConfig cfg;
    if (given(sub, "--config")) cfg = load_config_file(st.config_path);
    if (given(sub, "--seed")) cfg.seed = st.seed;
    if (given(sub, "--paths")) {
        try {
            cfg.paths = std::stoull(st.paths_text);
        } catch (const std::exception&) {
            throw ConfigError("bad --paths value: " + st.paths_text);
        }
    }
    if (given(sub, "--grid")) cfg.grid = parse_grid(st.grid_text);
    if (given(sub, "--antithetic")) cfg.antithetic = st.antithetic;
    if (given(sub, "--alpha")) cfg.alpha = st.alpha;
    if (given(sub, "--func")) cfg.funcs = st.funcs;
    if (given(sub, "--theorem")) cfg.theorem = st.theorem;
    if (given(sub, "--out")) cfg.out_dir = st.out_dir;
    if (given(sub, "--format")) cfg.format = st.format;
    if (given(sub, "--equation")) cfg.equation = st.equation;
    if (given(sub, "--transform")) cfg.transform = st.transform;
    if (given(sub, "--label")) cfg.label = st.label;
    if (given(sub, "--t")) cfg.t_horizon = st.t_horizon;
    if (cfg.format != "json" && cfg.format != "csv" && cfg.format != "both") {
        throw ConfigError("--format must be json, csv, or both");
    }
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
        throw ConfigError("--alpha must lie in (0, 1)");
    }
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    std::ios::sync_with_stdio(false);
    CLI::App app{"functional-equation / martingale verification laboratory"};
    app.require_subcommand(1);

    Staging st;
    auto* residual = app.add_subcommand("residual", "functional-equation residual of a candidate");
    residual->add_option("--equation", st.equation, "equation name, e.g. cauchy-additive");
    add_common_options(residual, st);

    auto* simulate = app.add_subcommand("simulate", "dump a path ensemble to CSV");
    simulate->add_option("--label", st.label, "ensemble label: W or B");
    add_common_options(simulate, st);

    auto* martingale = app.add_subcommand("martingale", "moment-condition martingale test");
    martingale->add_option("--transform", st.transform,
                           "transform: fofw|log-fofw|fofexpw|log-fofexpw|shift-scale:x0=..,sigma=..|"
                           "kleft:y=..|kright:x=..|gleft:y=..|gright:x=..");
    add_common_options(martingale, st);

    auto* bernstein = app.add_subcommand("bernstein", "sum/difference independence check");
    add_common_options(bernstein, st);

    auto* kolmogorov =
        app.add_subcommand("kolmogorov", "backward-equation residual of the smoothed candidate");
    kolmogorov->add_option("--t", st.t_horizon, "time horizon T");
    add_common_options(kolmogorov, st);

    auto* derivative = app.add_subcommand("derivative", "Gaussian-smoothed derivative curve");
    add_common_options(derivative, st);

    auto* theorem = app.add_subcommand("theorem", "run one theorem suite");
    theorem->add_option("--theorem", st.theorem, "suite id, e.g. T2_1");
    add_common_options(theorem, st);

    auto* suite = app.add_subcommand("suite", "run every theorem suite");
    add_common_options(suite, st);

    auto* emit = app.add_subcommand("emit-plot-data", "CSV series from a JSON report");
    emit->add_option("--report", st.report_path, "path to a report JSON file")->required();
    emit->add_option("--out", st.out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        if (sub == emit) {
            RunConfig cfg;
            if (given(sub, "--out")) cfg.out_dir = st.out_dir;
            return cmd_emit_plot_data(cfg, st.report_path);
        }
        const RunConfig cfg = merge_config(sub, st);
        if (sub == residual) return cmd_residual(cfg);
        if (sub == simulate) return cmd_simulate(cfg);
        if (sub == martingale) return cmd_martingale(cfg);
        if (sub == bernstein) return cmd_bernstein(cfg);
        if (sub == kolmogorov) return cmd_kolmogorov(cfg);
        if (sub == derivative) return cmd_derivative(cfg);
        if (sub == theorem) return cmd_theorem(cfg);
        if (sub == suite) return cmd_suite(cfg);
        throw ConfigError("unknown subcommand");
    } catch (const feqlab::InsufficientSamples& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const feqlab::DegenerateInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const feqlab::DomainViolation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const feqlab::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
