#include "feqlab/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "feqlab/errors.hpp"

namespace feqlab::report {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Json& Json::add(std::string key, Json value) {
    auto* obj = std::get_if<Object>(&value_);
    if (obj == nullptr) throw ConfigError("Json::add on a non-object");
    obj->emplace_back(std::move(key), std::move(value));
    return *this;
}

Json& Json::push(Json value) {
    auto* arr = std::get_if<Array>(&value_);
    if (arr == nullptr) throw ConfigError("Json::push on a non-array");
    arr->push_back(std::move(value));
    return *this;
}

namespace {

void escape_into(std::string& out, const std::string& s) {
    out += '"';
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                out += buf;
            } else {
                out += c;
            }
        }
    }
    out += '"';
}

void indent_into(std::string& out, int depth) {
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
}

} // namespace

void Json::render(std::string& out, int depth) const {
    if (std::holds_alternative<std::nullptr_t>(value_)) {
        out += "null";
    } else if (const bool* b = std::get_if<bool>(&value_)) {
        out += *b ? "true" : "false";
    } else if (const long long* i = std::get_if<long long>(&value_)) {
        out += std::to_string(*i);
    } else if (const double* d = std::get_if<double>(&value_)) {
        if (std::isfinite(*d)) {
            out += format_double(*d);
        } else {
            escape_into(out, format_double(*d));
        }
    } else if (const std::string* s = std::get_if<std::string>(&value_)) {
        escape_into(out, *s);
    } else if (const Array* arr = std::get_if<Array>(&value_)) {
        if (arr->empty()) {
            out += "[]";
            return;
        }
        out += "[\n";
        for (std::size_t k = 0; k < arr->size(); ++k) {
            indent_into(out, depth + 1);
            (*arr)[k].render(out, depth + 1);
            if (k + 1 < arr->size()) out += ',';
            out += '\n';
        }
        indent_into(out, depth);
        out += ']';
    } else {
        const Object& obj = std::get<Object>(value_);
        if (obj.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        for (std::size_t k = 0; k < obj.size(); ++k) {
            indent_into(out, depth + 1);
            escape_into(out, obj[k].first);
            out += ": ";
            obj[k].second.render(out, depth + 1);
            if (k + 1 < obj.size()) out += ',';
            out += '\n';
        }
        indent_into(out, depth);
        out += '}';
    }
}

std::string Json::dump() const {
    std::string out;
    render(out, 0);
    out += '\n';
    return out;
}

namespace {

Json stats_object(const std::vector<std::pair<std::string, double>>& stats) {
    Json obj = Json::object();
    for (const auto& [name, value] : stats) {
        obj.add(name, Json::real(value));
    }
    return obj;
}

} // namespace

Json to_json(const mgtest::MartingaleVerdict& verdict) {
    Json pairs = Json::array();
    for (const auto& cell : verdict.cells) {
        Json c = Json::object();
        c.add("s", Json::real(cell.s));
        c.add("t", Json::real(cell.t));
        c.add("instrument", Json::str(cell.instrument));
        c.add("mean", Json::real(cell.mean));
        c.add("sd", Json::real(cell.sd));
        c.add("z", Json::real(cell.z));
        c.add("p", Json::real(cell.p));
        pairs.push(std::move(c));
    }
    Json seeds = Json::object();
    seeds.add("master_seed", Json::integer(static_cast<long long>(verdict.seed)));
    seeds.add("label", Json::str(verdict.seed_label));

    Json out = Json::object();
    out.add("type", Json::str("martingale"));
    out.add("candidate", Json::str(verdict.candidate));
    out.add("transform", Json::str(verdict.transform));
    out.add("pairs", std::move(pairs));
    out.add("pass", Json::boolean(verdict.pass));
    out.add("seeds", std::move(seeds));
    out.add("alpha", Json::real(verdict.alpha));
    out.add("critical_z", Json::real(verdict.critical_z));
    out.add("n_paths", Json::integer(static_cast<long long>(verdict.n_paths)));
    out.add("degenerate", Json::boolean(verdict.degenerate));
    Json tail = Json::object();
    tail.add("max_abs_x", Json::real(verdict.max_abs_x));
    tail.add("increment_ex_kurtosis", Json::real(verdict.increment_ex_kurtosis));
    out.add("tail", std::move(tail));
    return out;
}

Json to_json(const mgtest::DistReport& rep) {
    Json out = Json::object();
    out.add("type", Json::str("distribution"));
    out.add("test", Json::str(mgtest::to_string(rep.test)));
    out.add("statistics", stats_object(rep.statistics));
    out.add("pass", Json::boolean(rep.pass));
    return out;
}

Json to_json(const functions::ResidualReport& rep) {
    Json out = Json::object();
    out.add("type", Json::str("residual"));
    out.add("equation", Json::str(functions::to_string(rep.equation)));
    out.add("grid", Json::str(rep.grid_description));
    out.add("sup_abs_residual", Json::real(rep.sup_abs_residual));
    out.add("mean_abs_residual", Json::real(rep.mean_abs_residual));
    Json worst = Json::array();
    worst.push(Json::real(rep.worst_point.first));
    worst.push(Json::real(rep.worst_point.second));
    out.add("worst_point", std::move(worst));
    out.add("degenerate", Json::boolean(rep.degenerate));
    return out;
}

Json to_json(const theorems::CheckResult& check) {
    Json out = Json::object();
    out.add("candidate", Json::str(check.candidate));
    out.add("check", Json::str(check.check));
    out.add("pass", Json::boolean(check.pass));
    out.add("statistics", stats_object(check.statistics));
    return out;
}

Json to_json(const theorems::TheoremReport& rep) {
    Json forward = Json::array();
    for (const auto& c : rep.forward) forward.push(to_json(c));
    Json falsification = Json::array();
    for (const auto& c : rep.falsification) falsification.push(to_json(c));

    Json out = Json::object();
    out.add("type", Json::str("theorem"));
    out.add("id", Json::str(theorems::to_string(rep.id)));
    out.add("forward", std::move(forward));
    out.add("falsification", std::move(falsification));
    out.add("recovered_constants", stats_object(rep.recovered_constants));
    out.add("overall", Json::boolean(rep.overall));
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    out << content;
    out.flush();
    if (!out) throw ConfigError("write failed: " + path);
}

std::string summary_line(const theorems::TheoremReport& rep) {
    std::size_t fwd_pass = 0;
    for (const auto& c : rep.forward) fwd_pass += c.pass ? 1 : 0;
    std::size_t fals_fail = 0;
    for (const auto& c : rep.falsification) fals_fail += c.pass ? 0 : 1;
    std::string line = theorems::to_string(rep.id);
    line.resize(8, ' ');
    line += rep.overall ? "pass  " : "FAIL  ";
    line += "forward " + std::to_string(fwd_pass) + "/" + std::to_string(rep.forward.size());
    line += "  falsification-failures " + std::to_string(fals_fail) + "/" +
            std::to_string(rep.falsification.size());
    return line;
}

} // namespace feqlab::report
