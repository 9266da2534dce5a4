#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

// Machine-readable experiment reports: named columnar tables plus a list of
// self-contained assertions (name, expected, observed, tolerance, kind), so
// that a report can be re-verified offline from the file alone.

namespace stz::harness {

using json = nlohmann::ordered_json;

struct Assertion {
    std::string name;
    std::string kind;  // "abs": |obs-exp| <= tol; "le": obs <= exp + tol; "ge": obs >= exp - tol
    double expected = 0;
    double observed = 0;
    double tolerance = 0;
    bool pass = false;

    static bool evaluate(std::string_view kind, double expected, double observed,
                         double tolerance);
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::string> units;  // one per column
    std::vector<std::vector<double>> rows;
};

struct Report {
    std::string experiment;
    std::uint64_t seed = 0;
    std::string config_hash;
    std::string timestamp;  // excluded from the numeric content
    std::string version;
    json config;
    std::vector<std::pair<std::string, Table>> tables;
    std::vector<Assertion> assertions;

    Table& add_table(const std::string& name, std::vector<std::string> columns,
                     std::vector<std::string> units);
    void check(const std::string& name, const std::string& kind, double expected,
               double observed, double tolerance);
    bool all_pass() const;

    json to_json() const;
    // canonical serialization of everything except the timestamp
    std::string numeric_content() const;
    // writes <dir>/report.json and one CSV per table
    void write(const std::string& dir) const;
    static Report load(const std::string& path);
};

std::string format_double(double v);     // %.17g
std::uint64_t fnv1a(std::string_view s);
std::string hash_hex(std::uint64_t h);

}  // namespace stz::harness
