#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "stz/report.hpp"

// The experiment runner: binds the computational modules into named,
// reproducible experiments. Empirical constants with no value in the source
// material are pinned on first run and asserted (within a relative band) on
// every later run.

namespace stz::harness {

struct PinnedConstants {
    std::map<std::string, double> values;
    bool dirty = false;  // new keys recorded during this run

    static PinnedConstants load(const std::string& path);  // missing file -> empty set
    void save(const std::string& path) const;

    // Record-or-assert: first run stores `observed` and passes; later runs
    // require agreement within rel_tol.
    void check(Report& rep, const std::string& key, double observed, double rel_tol);
};

struct ExperimentConfig {
    std::string name;
    json params = json::object();
    std::uint64_t seed = 20240601;
    std::string out_dir;  // empty: don't write files
};

ExperimentConfig parse_config(const std::string& path);

struct CatalogEntry {
    std::string name;
    std::string summary;  // names the statements the experiment exercises
};

const std::vector<CatalogEntry>& catalog();

// Runs the named experiment; throws std::invalid_argument for unknown
// experiments or unrecognized parameter keys.
Report run_experiment(const ExperimentConfig&, PinnedConstants&);

}  // namespace stz::harness
