#pragma once

/// @file report.hpp
/// Report serialization: an insertion-ordered JSON document tree whose reals
/// are always written with 17 significant digits (lossless double round-trip,
/// byte-stable golden files), converters for the result types of the other
/// modules, and CSV plot-data emission.

#include <string>
#include <variant>
#include <vector>

#include "feqlab/functions.hpp"
#include "feqlab/mgtest.hpp"
#include "feqlab/theorems.hpp"

namespace feqlab::report {

/// 17-significant-digit decimal form; non-finite values become the strings
/// "inf" / "-inf" / "nan" (quoted in JSON output).
std::string format_double(double v);

class Json {
  public:
    using Array = std::vector<Json>;
    using Object = std::vector<std::pair<std::string, Json>>;

    Json() : value_(nullptr) {}

    static Json object() { return Json(Object{}); }
    static Json array() { return Json(Array{}); }
    static Json boolean(bool b) { return Json(b); }
    static Json integer(long long i) { return Json(i); }
    static Json real(double d) { return Json(d); }
    static Json str(std::string s) { return Json(std::move(s)); }

    /// Append a key to an object (insertion order preserved).
    Json& add(std::string key, Json value);
    /// Append an element to an array.
    Json& push(Json value);

    bool is_object() const { return std::holds_alternative<Object>(value_); }
    bool is_array() const { return std::holds_alternative<Array>(value_); }

    /// Render with 2-space indentation and a trailing newline.
    std::string dump() const;

  private:
    using Value =
        std::variant<std::nullptr_t, bool, long long, double, std::string, Array, Object>;
    explicit Json(Value v) : value_(std::move(v)) {}

    void render(std::string& out, int depth) const;

    Value value_;
};

Json to_json(const mgtest::MartingaleVerdict& verdict);
Json to_json(const mgtest::DistReport& rep);
Json to_json(const functions::ResidualReport& rep);
Json to_json(const theorems::CheckResult& check);
Json to_json(const theorems::TheoremReport& rep);

/// Write content to path; ConfigError on failure.
void write_file(const std::string& path, const std::string& content);

/// One-line human summary of a theorem report (for stdout tables).
std::string summary_line(const theorems::TheoremReport& rep);

} // namespace feqlab::report
