#include "stz/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace stz::harness {

bool Assertion::evaluate(std::string_view kind, double expected, double observed,
                         double tolerance) {
    if (!std::isfinite(observed)) return false;
    if (kind == "abs") return std::abs(observed - expected) <= tolerance;
    if (kind == "le") return observed <= expected + tolerance;
    if (kind == "ge") return observed >= expected - tolerance;
    throw std::invalid_argument("unknown assertion kind: " + std::string(kind));
}

Table& Report::add_table(const std::string& name, std::vector<std::string> columns,
                         std::vector<std::string> units) {
    if (units.size() != columns.size()) throw std::invalid_argument("units/columns mismatch");
    tables.emplace_back(name, Table{std::move(columns), std::move(units), {}});
    return tables.back().second;
}

void Report::check(const std::string& name, const std::string& kind, double expected,
                   double observed, double tolerance) {
    Assertion a;
    a.name = name;
    a.kind = kind;
    a.expected = expected;
    a.observed = observed;
    a.tolerance = tolerance;
    a.pass = Assertion::evaluate(kind, expected, observed, tolerance);
    assertions.push_back(std::move(a));
}

bool Report::all_pass() const {
    for (const auto& a : assertions)
        if (!a.pass) return false;
    return true;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {
json body_json(const Report& r) {
    json j;
    j["experiment"] = r.experiment;
    j["seed"] = r.seed;
    j["config_hash"] = r.config_hash;
    j["version"] = r.version;
    j["config"] = r.config;
    json tabs = json::object();
    for (const auto& [name, t] : r.tables) {
        json jt;
        jt["columns"] = t.columns;
        jt["units"] = t.units;
        json rows = json::array();
        for (const auto& row : t.rows) rows.push_back(row);
        jt["rows"] = rows;
        tabs[name] = jt;
    }
    j["tables"] = tabs;
    json as = json::array();
    for (const auto& a : r.assertions) {
        json ja;
        ja["name"] = a.name;
        ja["kind"] = a.kind;
        ja["expected"] = a.expected;
        ja["observed"] = a.observed;
        ja["tolerance"] = a.tolerance;
        ja["pass"] = a.pass;
        as.push_back(ja);
    }
    j["assertions"] = as;
    return j;
}
}  // namespace

json Report::to_json() const {
    json j = body_json(*this);
    j["timestamp"] = timestamp;
    return j;
}

std::string Report::numeric_content() const { return body_json(*this).dump(); }

void Report::write(const std::string& dir) const {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    {
        std::ofstream out(fs::path(dir) / "report.json", std::ios::binary);
        out << to_json().dump(2) << "\n";
    }
    for (const auto& [name, t] : tables) {
        std::ofstream out(fs::path(dir) / (experiment + "__" + name + ".csv"), std::ios::binary);
        for (std::size_t c = 0; c < t.columns.size(); ++c) {
            if (c) out << ",";
            out << t.columns[c] << "(" << t.units[c] << ")";
        }
        out << "\n";
        for (const auto& row : t.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (c) out << ",";
                out << format_double(row[c]);
            }
            out << "\n";
        }
    }
}

Report Report::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open report: " + path);
    json j = json::parse(in);
    Report r;
    r.experiment = j.at("experiment").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.config_hash = j.at("config_hash").get<std::string>();
    r.version = j.at("version").get<std::string>();
    r.timestamp = j.value("timestamp", "");
    r.config = j.at("config");
    for (const auto& [name, jt] : j.at("tables").items()) {
        Table t;
        t.columns = jt.at("columns").get<std::vector<std::string>>();
        t.units = jt.at("units").get<std::vector<std::string>>();
        for (const auto& row : jt.at("rows")) t.rows.push_back(row.get<std::vector<double>>());
        r.tables.emplace_back(name, std::move(t));
    }
    for (const auto& ja : j.at("assertions")) {
        Assertion a;
        a.name = ja.at("name").get<std::string>();
        a.kind = ja.at("kind").get<std::string>();
        a.expected = ja.at("expected").get<double>();
        a.observed = ja.at("observed").get<double>();
        a.tolerance = ja.at("tolerance").get<double>();
        a.pass = ja.at("pass").get<bool>();
        r.assertions.push_back(std::move(a));
    }
    return r;
}

}  // namespace stz::harness
