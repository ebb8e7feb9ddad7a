#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ecomplex/econometrics.hpp"
#include "ecomplex/metrics.hpp"
#include "ecomplex/trade_data.hpp"

namespace ecomplex {

/// Everything a run needs; a run is reproducible from this alone.
struct RunConfig {
    // [input]
    std::filesystem::path trade_csv;
    std::filesystem::path covariates_csv;
    Scheme scheme = Scheme::sitc4;

    // [filter]
    FilterConfig filter;

    // [metrics]
    std::vector<std::string> metrics = {"eci", "pci", "fitness", "q", "eci_plus", "pci_plus"};
    SolveOptions solver;

    // [run]
    std::vector<int> years; // empty = all years in the input
    std::uint64_t seed = 42;

    // [panel]
    PanelSpec panel;

    // [regression]
    std::vector<std::string> regressors = {"initial_metric", "initial_log_gdp_pc",
                                           "interaction"};
    bool year_dummies = true;
    std::vector<std::string> estimators = {"pooled_ols", "fixed_effects"};

    // [correlate]
    std::vector<std::pair<std::string, std::string>> correlation_pairs = {
        {"eci_plus", "eci"}, {"fitness", "eci"}, {"fitness", "eci_plus"}};

    // [predict]
    int feature_year = 2013;

    // [output]
    std::filesystem::path out_dir = "out";
};

/// Parses an INI-style config file ([section] headers, key = value lines,
/// '#'/';' comments). Unknown sections or keys are config errors.
RunConfig load_config(const std::filesystem::path &path);

/// Applies "key=value" overrides using the same section.key names, e.g.
/// "panel.horizon=20". Flags beat the config file, which beats defaults.
void apply_override(RunConfig &cfg, const std::string &key, const std::string &value);

/// Canonical "section.key=value" dump with sorted keys and deterministic
/// number formatting; two configs hash alike iff they behave alike.
std::string canonical_config(const RunConfig &cfg);

/// FNV-1a 64-bit hash of the canonical dump, as 16 hex digits.
std::string config_hash(const RunConfig &cfg);

} // namespace ecomplex
