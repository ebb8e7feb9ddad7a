#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ecomplex/metrics.hpp"
#include "ecomplex/trade_data.hpp"

namespace ecomplex {

/// One country-period row of a growth panel. All "initial_" fields are
/// measured at period_start; growth is annualized over [period_start,
/// period_start + horizon].
struct PanelObservation {
    std::string country;
    int period_start = 0;
    int horizon = 0;
    double growth = 0.0;
    double initial_log_gdp_pc = 0.0;
    double initial_metric = 0.0;
    double interaction = 0.0; // initial_log_gdp_pc * initial_metric, exact
    std::optional<double> initial_human_capital;
    std::optional<double> initial_population;         // millions by default
    std::optional<double> initial_capital_per_worker; // natural log by default
    std::map<std::string, double> governance;         // six scores when present

    /// Feature lookup for design matrices; throws data_error when a named
    /// optional feature is absent and config_error for unknown names.
    double value(const std::string &name) const;
};

/// Covariate transforms; the table coefficient magnitudes imply these
/// defaults but they stay configurable for sensitivity checks.
struct TransformConfig {
    bool log_gdp = true;
    bool log_capital = true;
    bool population_millions = true;
};

struct PanelSpec {
    int start_year = 1973;
    int end_year = 2013;
    int horizon = 5;
    bool balanced = true;
    std::string metric_name = "eci_plus";
    std::vector<std::string> controls; // human_capital, population, capital_per_worker, law, ...
    bool standardize_metric = false;   // per-period z-scoring, applied after balancing
    TransformConfig transforms;
};

struct PanelBuildResult {
    std::vector<PanelObservation> observations; // sorted by (country, period)
    std::vector<int> period_starts;
    std::vector<Removal> excluded; // country + first reason
};

struct RegressionFormula {
    /// Regressor names in design order, e.g. initial_metric,
    /// initial_log_gdp_pc, interaction, initial_human_capital, ...
    std::vector<std::string> regressors;
    bool year_dummies = true;
};

struct RegressionResult {
    std::string estimator; // "pooled_ols" | "fixed_effects"
    std::vector<std::string> names; // const, regressors..., year_YYYY...
    std::vector<double> coef;
    std::vector<double> se;                  // cluster-robust (by country)
    std::vector<std::vector<double>> vcov;   // full sandwich covariance
    std::size_t n_obs = 0;
    std::size_t n_clusters = 0;
    double r2 = 0.0;
    double r2_adjusted = 0.0; // pooled OLS
    double r2_within = 0.0;   // fixed effects
    double r2_between = 0.0;
    double r2_overall = 0.0;
    double rmse = 0.0;
    std::vector<int> year_dummies; // period starts with a dummy column
    std::vector<double> residuals; // per observation, estimation order
    std::vector<double> fitted;
};

/// Compound annualized growth rate, (end/start)^(1/years) - 1.
double cagr(double gdp_start, double gdp_end, int years);

/// Assembles country-period observations from per-year metric vectors and
/// the covariate series. Countries missing any required input are excluded
/// (entirely, in balanced mode) and listed with a reason.
PanelBuildResult build_panel(const std::map<int, MetricVector> &metrics, const MetaSeries &meta,
                             const PanelSpec &spec);

/// Pooled OLS with intercept and year dummies (first period is the
/// reference), cluster-robust covariance with the G/(G-1)*(N-1)/(N-K)
/// small-sample factor.
RegressionResult pooled_ols(const std::vector<PanelObservation> &panel,
                            const RegressionFormula &formula);

/// Within (fixed-effects) estimator: country demeaning with the grand mean
/// added back, then OLS; slope estimates match LSDV. R2s are squared
/// correlations (within/between/overall); RMSE uses the LSDV degrees of
/// freedom, counting the absorbed country effects.
RegressionResult fixed_effects(const std::vector<PanelObservation> &panel,
                               const RegressionFormula &formula);

/// Linear prediction from a fitted model. Year dummies default to the
/// reference period (all zero) unless the observation's period_start matches
/// a dummy column, so in-sample rows reproduce their fitted values exactly.
double predict_growth(const RegressionResult &model, const PanelObservation &features);

/// Z-scores to mean 0 and population SD 1; throws on zero variance.
MetricVector standardize(const MetricVector &values);

} // namespace ecomplex
