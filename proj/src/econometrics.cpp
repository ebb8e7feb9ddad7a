#include "ecomplex/econometrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <Eigen/Dense>

#include "ecomplex/errors.hpp"

namespace ecomplex {

double PanelObservation::value(const std::string &name) const {
    auto need = [&](const std::optional<double> &v) {
        if (!v)
            throw data_error("missing feature '" + name + "' for " + country + " " +
                             std::to_string(period_start));
        return *v;
    };
    if (name == "initial_log_gdp_pc")
        return initial_log_gdp_pc;
    if (name == "initial_metric")
        return initial_metric;
    if (name == "interaction")
        return interaction;
    if (name == "initial_human_capital")
        return need(initial_human_capital);
    if (name == "initial_population")
        return need(initial_population);
    if (name == "initial_capital_per_worker")
        return need(initial_capital_per_worker);
    auto it = governance.find(name);
    if (it != governance.end())
        return it->second;
    static const std::set<std::string> known = {"law",
                                                "voice",
                                                "corruption",
                                                "regulatory_quality",
                                                "government_effectiveness",
                                                "political_stability"};
    if (known.count(name))
        throw data_error("missing feature '" + name + "' for " + country + " " +
                         std::to_string(period_start));
    throw config_error("unknown regressor '" + name + "'");
}

double cagr(double gdp_start, double gdp_end, int years) {
    if (!(gdp_start > 0.0) || !(gdp_end > 0.0))
        throw data_error("cagr: GDP must be positive");
    if (years < 1)
        throw config_error("cagr: years must be >= 1");
    return std::pow(gdp_end / gdp_start, 1.0 / static_cast<double>(years)) - 1.0;
}

namespace {

const char *kControlFields[] = {"human_capital", "population", "capital_per_worker"};

bool is_governance(const std::string &name) {
    return name == "law" || name == "voice" || name == "corruption" ||
           name == "regulatory_quality" || name == "government_effectiveness" ||
           name == "political_stability";
}

} // namespace

PanelBuildResult build_panel(const std::map<int, MetricVector> &metrics, const MetaSeries &meta,
                             const PanelSpec &spec) {
    if (spec.horizon < 1)
        throw config_error("panel horizon must be >= 1");
    if (spec.end_year <= spec.start_year)
        throw config_error("panel needs start_year < end_year");
    if (spec.balanced && (spec.end_year - spec.start_year) % spec.horizon != 0)
        throw config_error("balanced panel needs (end_year - start_year) divisible by horizon");

    PanelBuildResult out;
    for (int t = spec.start_year; t + spec.horizon <= spec.end_year; t += spec.horizon)
        out.period_starts.push_back(t);

    // metric lookups per period
    std::vector<std::map<std::string, double>> metric_at(out.period_starts.size());
    for (std::size_t i = 0; i < out.period_starts.size(); ++i) {
        auto it = metrics.find(out.period_starts[i]);
        if (it == metrics.end())
            throw data_error("no metric values for year " +
                             std::to_string(out.period_starts[i]));
        for (std::size_t j = 0; j < it->second.labels.size(); ++j)
            metric_at[i][it->second.labels[j]] = it->second.values[j];
    }

    std::set<std::string> candidates;
    for (const auto &m : metric_at)
        for (const auto &[c, v] : m)
            candidates.insert(c);

    // Why is a (country, period) unusable? Empty string means usable.
    auto why_missing = [&](const std::string &c, std::size_t i) -> std::string {
        const int t = out.period_starts[i];
        if (!metric_at[i].count(c))
            return "missing_metric:" + std::to_string(t);
        auto cm = meta.find(c);
        auto at = [&](int year) -> const CountryMeta * {
            if (cm == meta.end())
                return nullptr;
            auto y = cm->second.find(year);
            return y == cm->second.end() ? nullptr : &y->second;
        };
        const CountryMeta *m0 = at(t), *m1 = at(t + spec.horizon);
        if (!m0 || !m0->gdp_pc)
            return "missing_gdp:" + std::to_string(t);
        if (!m1 || !m1->gdp_pc)
            return "missing_gdp:" + std::to_string(t + spec.horizon);
        for (const auto &ctl : spec.controls) {
            bool ok = true;
            if (ctl == "human_capital")
                ok = m0->human_capital.has_value();
            else if (ctl == "population")
                ok = m0->population.has_value();
            else if (ctl == "capital_per_worker")
                ok = m0->capital_per_worker.has_value();
            else if (is_governance(ctl))
                ok = m0->governance(ctl).has_value();
            else
                throw config_error("unknown control '" + ctl + "'");
            if (!ok)
                return "missing_control:" + ctl + ":" + std::to_string(t);
        }
        return "";
    };

    // rows[i] = usable countries for period i
    std::vector<std::set<std::string>> usable(out.period_starts.size());
    std::map<std::string, std::string> first_reason;
    for (const auto &c : candidates) {
        for (std::size_t i = 0; i < out.period_starts.size(); ++i) {
            std::string why = why_missing(c, i);
            if (why.empty())
                usable[i].insert(c);
            else if (!first_reason.count(c))
                first_reason[c] = why;
        }
    }

    std::set<std::string> included;
    if (spec.balanced) {
        for (const auto &c : candidates) {
            bool all = true;
            for (const auto &u : usable)
                if (!u.count(c)) {
                    all = false;
                    break;
                }
            if (all)
                included.insert(c);
        }
        for (const auto &c : candidates)
            if (!included.count(c))
                out.excluded.push_back({c, first_reason.count(c) ? first_reason[c] : "unusable"});
    } else {
        for (const auto &u : usable)
            included.insert(u.begin(), u.end());
        for (const auto &c : candidates)
            if (!included.count(c))
                out.excluded.push_back({c, first_reason.count(c) ? first_reason[c] : "unusable"});
    }
    if (included.empty())
        throw data_error("empty panel after balancing");

    // per-period z-scores are computed over the included sample only
    std::vector<std::map<std::string, double>> zmetric(out.period_starts.size());
    if (spec.standardize_metric) {
        for (std::size_t i = 0; i < out.period_starts.size(); ++i) {
            std::vector<std::pair<std::string, double>> vals;
            for (const auto &c : included)
                if (usable[i].count(c))
                    vals.push_back({c, metric_at[i].at(c)});
            double mean = 0.0;
            for (const auto &[c, v] : vals)
                mean += v;
            mean /= static_cast<double>(vals.size());
            double var = 0.0;
            for (const auto &[c, v] : vals)
                var += (v - mean) * (v - mean);
            double sd = std::sqrt(var / static_cast<double>(vals.size()));
            if (!(sd > 0.0))
                throw data_error("metric has zero variance in period " +
                                 std::to_string(out.period_starts[i]));
            for (const auto &[c, v] : vals)
                zmetric[i][c] = (v - mean) / sd;
        }
    }

    for (const auto &c : included) {
        for (std::size_t i = 0; i < out.period_starts.size(); ++i) {
            if (!usable[i].count(c))
                continue;
            const int t = out.period_starts[i];
            const CountryMeta &m0 = meta.at(c).at(t);
            const CountryMeta &m1 = meta.at(c).at(t + spec.horizon);

            PanelObservation o;
            o.country = c;
            o.period_start = t;
            o.horizon = spec.horizon;
            o.growth = cagr(*m0.gdp_pc, *m1.gdp_pc, spec.horizon);
            o.initial_log_gdp_pc =
                spec.transforms.log_gdp ? std::log(*m0.gdp_pc) : *m0.gdp_pc;
            o.initial_metric =
                spec.standardize_metric ? zmetric[i].at(c) : metric_at[i].at(c);
            o.interaction = o.initial_log_gdp_pc * o.initial_metric;
            if (m0.human_capital)
                o.initial_human_capital = *m0.human_capital;
            if (m0.population)
                o.initial_population = spec.transforms.population_millions
                                           ? *m0.population / 1e6
                                           : *m0.population;
            if (m0.capital_per_worker && *m0.capital_per_worker > 0.0)
                o.initial_capital_per_worker = spec.transforms.log_capital
                                                   ? std::log(*m0.capital_per_worker)
                                                   : *m0.capital_per_worker;
            for (const char *g :
                 {"law", "voice", "corruption", "regulatory_quality",
                  "government_effectiveness", "political_stability"})
                if (auto v = m0.governance(g))
                    o.governance[g] = *v;
            out.observations.push_back(std::move(o));
        }
    }
    return out;
}

namespace {

struct Design {
    std::vector<std::string> names; // const first, then regressors, then dummies
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    std::vector<std::string> cluster;
    std::vector<int> dummy_years;
};

Design build_design(const std::vector<PanelObservation> &panel,
                    const RegressionFormula &formula) {
    if (panel.empty())
        throw data_error("regression needs a nonempty panel");

    Design d;
    d.names.push_back("const");
    for (const auto &r : formula.regressors)
        d.names.push_back(r);

    std::set<int> periods;
    for (const auto &o : panel)
        periods.insert(o.period_start);
    if (formula.year_dummies && periods.size() > 1) {
        bool first = true;
        for (int t : periods) {
            if (first) {
                first = false; // reference period
                continue;
            }
            d.dummy_years.push_back(t);
            d.names.push_back("year_" + std::to_string(t));
        }
    }

    const std::size_t N = panel.size(), K = d.names.size();
    d.X.resize(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(K));
    d.y.resize(static_cast<Eigen::Index>(N));
    for (std::size_t i = 0; i < N; ++i) {
        const auto &o = panel[i];
        Eigen::Index j = 0;
        d.X(i, j++) = 1.0;
        for (const auto &r : formula.regressors)
            d.X(i, j++) = o.value(r);
        for (int t : d.dummy_years)
            d.X(i, j++) = o.period_start == t ? 1.0 : 0.0;
        d.y(i) = o.growth;
        d.cluster.push_back(o.country);
    }
    return d;
}

// Shared by estimation and prediction so fitted values reproduce exactly.
double dot_row(const std::vector<double> &coef, const Eigen::MatrixXd &X, Eigen::Index i) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < X.cols(); ++j)
        acc += coef[static_cast<std::size_t>(j)] * X(i, j);
    return acc;
}

std::vector<double> solve_ols(const Design &d) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(d.X);
    if (qr.rank() < d.X.cols()) {
        // the trailing (unpivoted) columns are the linearly dependent ones
        std::string msg = "rank-deficient design; collinear columns:";
        const auto &perm = qr.colsPermutation().indices();
        for (Eigen::Index k = qr.rank(); k < d.X.cols(); ++k)
            msg += " " + d.names[static_cast<std::size_t>(perm(k))];
        throw data_error(msg);
    }
    Eigen::VectorXd b = qr.solve(d.y);
    return {b.data(), b.data() + b.size()};
}

// Cluster-robust sandwich with the G/(G-1)*(N-1)/(N-K) small-sample factor.
void sandwich(const Design &d, RegressionResult &res) {
    const Eigen::Index N = d.X.rows(), K = d.X.cols();
    Eigen::MatrixXd xtx_inv =
        (d.X.transpose() * d.X).ldlt().solve(Eigen::MatrixXd::Identity(K, K));

    std::map<std::string, std::vector<Eigen::Index>> groups;
    for (Eigen::Index i = 0; i < N; ++i)
        groups[d.cluster[static_cast<std::size_t>(i)]].push_back(i);
    const double G = static_cast<double>(groups.size());

    Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(K, K);
    for (const auto &[name, rows] : groups) {
        Eigen::VectorXd s = Eigen::VectorXd::Zero(K);
        for (auto i : rows)
            s += d.X.row(i).transpose() * res.residuals[static_cast<std::size_t>(i)];
        meat += s * s.transpose();
    }

    const double n = static_cast<double>(N), k = static_cast<double>(K);
    double c = 1.0;
    if (G > 1.0 && n > k)
        c = (G / (G - 1.0)) * ((n - 1.0) / (n - k));
    Eigen::MatrixXd V = c * xtx_inv * meat * xtx_inv;

    res.n_clusters = groups.size();
    res.vcov.assign(static_cast<std::size_t>(K), std::vector<double>(static_cast<std::size_t>(K)));
    res.se.resize(static_cast<std::size_t>(K));
    for (Eigen::Index i = 0; i < K; ++i) {
        for (Eigen::Index j = 0; j < K; ++j)
            res.vcov[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = V(i, j);
        res.se[static_cast<std::size_t>(i)] = std::sqrt(std::max(0.0, V(i, i)));
    }
}

double corr_squared(const std::vector<double> &a, const std::vector<double> &b) {
    const double n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (saa <= 0.0 || sbb <= 0.0)
        return 0.0;
    return (sab * sab) / (saa * sbb);
}

} // namespace

RegressionResult pooled_ols(const std::vector<PanelObservation> &panel,
                            const RegressionFormula &formula) {
    Design d = build_design(panel, formula);
    const Eigen::Index N = d.X.rows(), K = d.X.cols();
    if (N <= K)
        throw data_error("pooled_ols: need more observations than regressors");

    RegressionResult res;
    res.estimator = "pooled_ols";
    res.names = d.names;
    res.year_dummies = d.dummy_years;
    res.n_obs = static_cast<std::size_t>(N);
    res.coef = solve_ols(d);

    res.fitted.resize(res.n_obs);
    res.residuals.resize(res.n_obs);
    double ssr = 0.0;
    for (Eigen::Index i = 0; i < N; ++i) {
        res.fitted[static_cast<std::size_t>(i)] = dot_row(res.coef, d.X, i);
        double u = d.y(i) - res.fitted[static_cast<std::size_t>(i)];
        res.residuals[static_cast<std::size_t>(i)] = u;
        ssr += u * u;
    }
    double ymean = d.y.mean(), sst = 0.0;
    for (Eigen::Index i = 0; i < N; ++i)
        sst += (d.y(i) - ymean) * (d.y(i) - ymean);
    res.r2 = sst > 0.0 ? 1.0 - ssr / sst : 1.0;
    const double n = static_cast<double>(N), k = static_cast<double>(K);
    res.r2_adjusted = 1.0 - (1.0 - res.r2) * (n - 1.0) / (n - k);
    res.rmse = std::sqrt(ssr / (n - k));

    sandwich(d, res);
    return res;
}

RegressionResult fixed_effects(const std::vector<PanelObservation> &panel,
                               const RegressionFormula &formula) {
    Design d = build_design(panel, formula);
    const Eigen::Index N = d.X.rows(), K = d.X.cols();

    std::map<std::string, std::vector<Eigen::Index>> groups;
    for (Eigen::Index i = 0; i < N; ++i)
        groups[d.cluster[static_cast<std::size_t>(i)]].push_back(i);
    for (const auto &[c, rows] : groups)
        if (rows.size() < 2)
            throw data_error("fixed_effects: country " + c + " has a single observation");

    const double n_countries = static_cast<double>(groups.size());
    if (static_cast<double>(N) <= static_cast<double>(K) + n_countries - 1.0)
        throw data_error("fixed_effects: not enough observations for the absorbed effects");

    // Within transform: demean y and every non-constant column by country,
    // adding the grand mean back so the intercept stays interpretable.
    Design w = d;
    for (Eigen::Index j = 1; j < K; ++j) {
        double grand = d.X.col(j).mean();
        for (const auto &[c, rows] : groups) {
            double gm = 0.0;
            for (auto i : rows)
                gm += d.X(i, j);
            gm /= static_cast<double>(rows.size());
            for (auto i : rows)
                w.X(i, j) = d.X(i, j) - gm + grand;
        }
    }
    {
        double grand = d.y.mean();
        for (const auto &[c, rows] : groups) {
            double gm = 0.0;
            for (auto i : rows)
                gm += d.y(i);
            gm /= static_cast<double>(rows.size());
            for (auto i : rows)
                w.y(i) = d.y(i) - gm + grand;
        }
    }

    // A regressor with no within-country variation is absorbed by the
    // country effects and cannot be estimated.
    for (Eigen::Index j = 1; j < K; ++j) {
        double mean = w.X.col(j).mean(), dev = 0.0;
        for (Eigen::Index i = 0; i < N; ++i)
            dev = std::max(dev, std::abs(w.X(i, j) - mean));
        if (dev <= 1e-12 * (1.0 + std::abs(mean)))
            throw data_error("absorbed_by_fixed_effects: " +
                             d.names[static_cast<std::size_t>(j)]);
    }

    RegressionResult res;
    res.estimator = "fixed_effects";
    res.names = d.names;
    res.year_dummies = d.dummy_years;
    res.n_obs = static_cast<std::size_t>(N);
    res.coef = solve_ols(w);

    res.fitted.resize(res.n_obs);
    res.residuals.resize(res.n_obs);
    for (Eigen::Index i = 0; i < N; ++i) {
        res.fitted[static_cast<std::size_t>(i)] = dot_row(res.coef, w.X, i);
        res.residuals[static_cast<std::size_t>(i)] =
            w.y(i) - res.fitted[static_cast<std::size_t>(i)];
    }

    // r2s as squared correlations, following the usual panel conventions:
    // within on demeaned data, between on country means, overall on levels.
    {
        std::vector<double> yw(res.n_obs), fw(res.n_obs);
        for (std::size_t i = 0; i < res.n_obs; ++i) {
            yw[i] = w.y(static_cast<Eigen::Index>(i));
            fw[i] = res.fitted[i];
        }
        res.r2_within = corr_squared(yw, fw);

        std::vector<double> yb, xb;
        std::vector<double> ylev(res.n_obs), xlev(res.n_obs);
        for (std::size_t i = 0; i < res.n_obs; ++i) {
            ylev[i] = d.y(static_cast<Eigen::Index>(i));
            xlev[i] = dot_row(res.coef, d.X, static_cast<Eigen::Index>(i));
        }
        for (const auto &[c, rows] : groups) {
            double my = 0.0, mx = 0.0;
            for (auto i : rows) {
                my += ylev[static_cast<std::size_t>(i)];
                mx += xlev[static_cast<std::size_t>(i)];
            }
            yb.push_back(my / static_cast<double>(rows.size()));
            xb.push_back(mx / static_cast<double>(rows.size()));
        }
        res.r2_between = corr_squared(yb, xb);
        res.r2_overall = corr_squared(ylev, xlev);
        res.r2 = res.r2_within;
    }

    // RMSE on the LSDV degrees of freedom: slopes+dummies plus one absorbed
    // effect per country (the within intercept substitutes for one of them).
    double ssr = 0.0;
    for (double u : res.residuals)
        ssr += u * u;
    double df = static_cast<double>(N) - (static_cast<double>(K) - 1.0) - n_countries;
    res.rmse = std::sqrt(ssr / df);

    sandwich(w, res);
    res.n_clusters = groups.size();
    return res;
}

double predict_growth(const RegressionResult &model, const PanelObservation &features) {
    double acc = 0.0;
    for (std::size_t j = 0; j < model.names.size(); ++j) {
        const std::string &name = model.names[j];
        double x;
        if (name == "const") {
            x = 1.0;
        } else if (name.rfind("year_", 0) == 0) {
            x = ("year_" + std::to_string(features.period_start)) == name ? 1.0 : 0.0;
        } else {
            x = features.value(name);
        }
        acc += model.coef[j] * x;
    }
    return acc;
}

MetricVector standardize(const MetricVector &values) {
    if (values.values.size() < 2)
        throw data_error("standardize: need at least 2 values");
    MetricVector out = values;
    const double n = static_cast<double>(out.values.size());
    double mean = 0.0;
    for (double v : out.values)
        mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : out.values)
        var += (v - mean) * (v - mean);
    double sd = std::sqrt(var / n);
    if (!(sd > 1e-12))
        throw data_error("standardize: zero variance");
    for (double &v : out.values)
        v = (v - mean) / sd;
    return out;
}

} // namespace ecomplex
