#include <algorithm>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ecomplex/config.hpp"
#include "ecomplex/csv.hpp"
#include "ecomplex/econometrics.hpp"
#include "ecomplex/errors.hpp"
#include "ecomplex/io.hpp"
#include "ecomplex/metrics.hpp"
#include "ecomplex/trade_data.hpp"

namespace {

using namespace ecomplex;

std::vector<int> pick_years(const RunConfig &cfg, const std::vector<TradeRecord> &records) {
    std::set<int> ys;
    if (cfg.years.empty()) {
        for (const auto &r : records)
            ys.insert(r.year);
    } else {
        ys.insert(cfg.years.begin(), cfg.years.end());
    }
    return {ys.begin(), ys.end()};
}

MetaLoadResult load_meta_if_any(const RunConfig &cfg) {
    if (cfg.covariates_csv.empty())
        return {};
    return load_country_meta(cfg.covariates_csv);
}

// Reference-year context for the static country filters. When the exports
// reference year has no trade records, the matrix's own year stands in (the
// caller is told through `warning`).
ReferenceData build_reference(const std::vector<TradeRecord> &records, const MetaSeries &meta,
                              const FilterConfig &fc, int fallback_year, std::string *warning) {
    ReferenceData ref;
    for (const auto &[country, series] : meta) {
        auto it = series.find(fc.population_reference_year);
        if (it != series.end())
            ref.meta[country] = it->second;
    }
    int year = fc.exports_reference_year;
    bool any = false;
    for (const auto &r : records)
        if (r.year == year) {
            any = true;
            break;
        }
    if (!any) {
        year = fallback_year;
        if (warning)
            *warning = "no trade records in exports reference year " +
                       std::to_string(fc.exports_reference_year) + "; using " +
                       std::to_string(fallback_year);
    }
    for (const auto &r : records)
        if (r.year == year)
            ref.total_exports[r.country] += r.value;
    return ref;
}

// ingest -> static filters -> yearly filters for one year
struct FilteredYear {
    TradeMatrix matrix;
    FilterReport static_report;
    FilterReport yearly_report;
};

FilteredYear filter_year(const std::vector<TradeRecord> &records, const MetaSeries &meta,
                         const FilterConfig &fc, int year) {
    TradeMatrix m = build_matrix(records, year);
    std::string warning;
    ReferenceData ref = build_reference(records, meta, fc, year, &warning);
    auto [m1, rep1] = apply_static_filters(m, ref, fc);
    if (!warning.empty())
        rep1.warnings.push_back(warning);
    auto [m2, rep2] = apply_yearly_filters(m1, fc);
    return {std::move(m2), std::move(rep1), std::move(rep2)};
}

int cmd_filter(const RunConfig &cfg) {
    const std::string hash = config_hash(cfg);
    auto trade = load_trade_csv(cfg.trade_csv, cfg.scheme);
    auto meta = load_meta_if_any(cfg);
    for (int year : pick_years(cfg, trade.records)) {
        FilteredYear fy = filter_year(trade.records, meta.series, cfg.filter, year);
        auto dir = cfg.out_dir / "filtered";
        write_matrix_csv(dir / (std::to_string(year) + ".csv"), fy.matrix, hash);
        atomic_write(dir / (std::to_string(year) + "_static_report.json"),
                     filter_report_json(fy.static_report, hash));
        atomic_write(dir / (std::to_string(year) + "_yearly_report.json"),
                     filter_report_json(fy.yearly_report, hash));
        std::cerr << "filter " << year << ": "
                  << fy.matrix.n_countries() << " countries, " << fy.matrix.n_products()
                  << " products, retained trade share "
                  << fy.yearly_report.retained_trade_share * fy.static_report.retained_trade_share
                  << "\n";
    }
    return 0;
}

int cmd_compute(const RunConfig &cfg) {
    const std::string hash = config_hash(cfg);
    auto trade = load_trade_csv(cfg.trade_csv, cfg.scheme);
    auto meta = load_meta_if_any(cfg);

    std::set<std::string> want(cfg.metrics.begin(), cfg.metrics.end());
    for (const auto &m : want)
        if (m != "diversity" && m != "ubiquity" && m != "eci" && m != "pci" &&
            m != "fitness" && m != "q" && m != "eci_plus" && m != "pci_plus")
            throw config_error("unknown metric '" + m + "'");

    for (int year : pick_years(cfg, trade.records)) {
        FilteredYear fy = filter_year(trade.records, meta.series, cfg.filter, year);
        auto dir = cfg.out_dir / "metrics";
        auto emit = [&](const MetricVector &v, bool diagnostics) {
            if (!want.count(v.metric_name))
                return;
            auto base = std::to_string(year) + "_" + v.metric_name;
            write_metric_csv(dir / (base + ".csv"), v, hash);
            if (diagnostics)
                atomic_write(dir / (base + "_diagnostics.json"),
                             diagnostics_json(v.diagnostics, hash));
        };

        const bool need_binary = want.count("diversity") || want.count("ubiquity") ||
                                 want.count("eci") || want.count("pci") ||
                                 want.count("fitness") || want.count("q");
        if (need_binary) {
            BinaryMatrix m = binarize(rca(fy.matrix));
            emit(diversity(m), false);
            emit(ubiquity(m), false);
            if (want.count("eci") || want.count("pci")) {
                auto [eci, pci] = eci_pci(m);
                emit(eci, true);
                emit(pci, true);
            }
            if (want.count("fitness") || want.count("q")) {
                auto [f, q] = fitness(m, cfg.solver);
                emit(f, true);
                emit(q, true);
            }
        }
        if (want.count("eci_plus"))
            emit(eci_plus(fy.matrix, cfg.solver), true);
        if (want.count("pci_plus"))
            emit(pci_plus(fy.matrix, cfg.solver), true);
    }
    return 0;
}

int cmd_correlate(const RunConfig &cfg) {
    const std::string hash = config_hash(cfg);
    if (cfg.years.empty())
        throw config_error("correlate needs run.years (or --year)");
    for (int year : cfg.years) {
        for (const auto &[a, b] : cfg.correlation_pairs) {
            auto mdir = cfg.out_dir / "metrics";
            MetricVector va = read_metric_csv(mdir / (std::to_string(year) + "_" + a + ".csv"));
            MetricVector vb = read_metric_csv(mdir / (std::to_string(year) + "_" + b + ".csv"));
            CorrelationReport rep = correlate(va, vb);
            auto base = cfg.out_dir / "correlations" /
                        (std::to_string(year) + "_" + a + "_" + b);
            atomic_write(base.string() + ".json", correlation_json(rep, hash));
            write_scatter_csv(base.string() + "_scatter.csv", rep, hash);
            std::cerr << "correlate " << year << " " << a << "~" << b
                      << ": r2=" << rep.r_squared << " n=" << rep.n << "\n";
        }
    }
    return 0;
}

std::string control_regressor(const std::string &control) {
    if (control == "human_capital")
        return "initial_human_capital";
    if (control == "population")
        return "initial_population";
    if (control == "capital_per_worker")
        return "initial_capital_per_worker";
    return control; // governance scores keep their names
}

RegressionFormula make_formula(const RunConfig &cfg) {
    RegressionFormula f;
    f.regressors = cfg.regressors;
    for (const auto &c : cfg.panel.controls) {
        auto r = control_regressor(c);
        if (std::find(f.regressors.begin(), f.regressors.end(), r) == f.regressors.end())
            f.regressors.push_back(r);
    }
    f.year_dummies = cfg.year_dummies;
    return f;
}

PanelBuildResult regression_panel(const RunConfig &cfg, const MetaSeries &meta) {
    std::map<int, MetricVector> series;
    for (int t = cfg.panel.start_year; t + cfg.panel.horizon <= cfg.panel.end_year;
         t += cfg.panel.horizon)
        series[t] = read_metric_csv(cfg.out_dir / "metrics" /
                                    (std::to_string(t) + "_" + cfg.panel.metric_name + ".csv"));
    return build_panel(series, meta, cfg.panel);
}

std::string panel_json(const PanelBuildResult &p, const std::string &hash);

int cmd_regress(const RunConfig &cfg) {
    const std::string hash = config_hash(cfg);
    auto meta = load_country_meta(cfg.covariates_csv);
    PanelBuildResult panel = regression_panel(cfg, meta.series);
    RegressionFormula formula = make_formula(cfg);

    const std::string base =
        cfg.panel.metric_name + "_" + std::to_string(cfg.panel.horizon) + "y";
    auto dir = cfg.out_dir / "regressions";
    atomic_write(dir / (base + "_panel.json"), panel_json(panel, hash));

    std::vector<RegressionResult> columns;
    for (const auto &est : cfg.estimators) {
        RegressionResult r = est == "pooled_ols" ? pooled_ols(panel.observations, formula)
                                                 : fixed_effects(panel.observations, formula);
        atomic_write(dir / (base + "_" + est + ".json"), regression_json(r, hash));
        columns.push_back(std::move(r));
    }
    atomic_write(dir / (base + "_table.txt"), regression_table_text(columns, hash));
    std::cerr << "regress " << base << ": n=" << columns.front().n_obs
              << " clusters=" << columns.front().n_clusters << "\n";
    return 0;
}

int cmd_predict(const RunConfig &cfg) {
    const std::string hash = config_hash(cfg);
    auto meta = load_country_meta(cfg.covariates_csv);
    PanelBuildResult panel = regression_panel(cfg, meta.series);
    RegressionFormula formula = make_formula(cfg);
    RegressionResult model = pooled_ols(panel.observations, formula);

    MetricVector mv = read_metric_csv(
        cfg.out_dir / "metrics" /
        (std::to_string(cfg.feature_year) + "_" + cfg.panel.metric_name + ".csv"));

    std::map<std::string, double> metric;
    for (std::size_t i = 0; i < mv.labels.size(); ++i)
        metric[mv.labels[i]] = mv.values[i];
    if (cfg.panel.standardize_metric) {
        double mean = 0.0, var = 0.0;
        for (const auto &[c, v] : metric)
            mean += v;
        mean /= static_cast<double>(metric.size());
        for (const auto &[c, v] : metric)
            var += (v - mean) * (v - mean);
        double sd = std::sqrt(var / static_cast<double>(metric.size()));
        if (!(sd > 0.0))
            throw data_error("feature-year metric has zero variance");
        for (auto &[c, v] : metric)
            v = (v - mean) / sd;
    }

    std::vector<Prediction> rows;
    std::vector<std::string> skipped;
    for (const auto &[country, value] : metric) {
        auto cm = meta.series.find(country);
        const CountryMeta *m0 = nullptr;
        if (cm != meta.series.end()) {
            auto y = cm->second.find(cfg.feature_year);
            if (y != cm->second.end())
                m0 = &y->second;
        }
        if (!m0 || !m0->gdp_pc) {
            skipped.push_back(country + ": missing GDP per capita in " +
                              std::to_string(cfg.feature_year));
            continue;
        }
        PanelObservation o;
        o.country = country;
        o.period_start = cfg.feature_year;
        o.horizon = cfg.panel.horizon;
        o.initial_log_gdp_pc =
            cfg.panel.transforms.log_gdp ? std::log(*m0->gdp_pc) : *m0->gdp_pc;
        o.initial_metric = value;
        o.interaction = o.initial_log_gdp_pc * o.initial_metric;
        if (m0->human_capital)
            o.initial_human_capital = *m0->human_capital;
        if (m0->population)
            o.initial_population = cfg.panel.transforms.population_millions
                                       ? *m0->population / 1e6
                                       : *m0->population;
        if (m0->capital_per_worker && *m0->capital_per_worker > 0.0)
            o.initial_capital_per_worker = cfg.panel.transforms.log_capital
                                               ? std::log(*m0->capital_per_worker)
                                               : *m0->capital_per_worker;
        for (const char *g : {"law", "voice", "corruption", "regulatory_quality",
                              "government_effectiveness", "political_stability"})
            if (auto v = m0->governance(g))
                o.governance[g] = *v;
        try {
            rows.push_back({country, predict_growth(model, o), 0});
        } catch (const data_error &e) {
            skipped.push_back(country + ": " + e.what());
        }
    }
    if (rows.empty())
        throw data_error("no countries with complete features in " +
                         std::to_string(cfg.feature_year));

    std::sort(rows.begin(), rows.end(), [](const Prediction &a, const Prediction &b) {
        if (a.growth != b.growth)
            return a.growth > b.growth;
        return a.country < b.country;
    });
    for (std::size_t i = 0; i < rows.size(); ++i)
        rows[i].rank = static_cast<int>(i) + 1;

    const std::string base =
        cfg.panel.metric_name + "_" + std::to_string(cfg.panel.horizon) + "y";
    auto dir = cfg.out_dir / "predictions";
    write_predictions_csv(dir / (base + ".csv"), rows, hash);
    if (!skipped.empty()) {
        std::string j = "{\n  \"skipped\": [\n";
        for (std::size_t i = 0; i < skipped.size(); ++i)
            j += "    \"" + skipped[i] + (i + 1 < skipped.size() ? "\",\n" : "\"\n");
        j += "  ]\n}\n";
        atomic_write(dir / (base + "_skipped.json"), j);
        for (const auto &s : skipped)
            std::cerr << "predict: skipped " << s << "\n";
    }
    return 0;
}

int cmd_rank(const RunConfig &cfg) {
    const std::string hash = config_hash(cfg);
    if (cfg.years.empty())
        throw config_error("rank needs run.years (or --year)");
    for (int year : cfg.years) {
        for (const auto &metric : cfg.metrics) {
            MetricVector v = read_metric_csv(cfg.out_dir / "metrics" /
                                             (std::to_string(year) + "_" + metric + ".csv"));
            std::vector<std::size_t> order(v.labels.size());
            for (std::size_t i = 0; i < order.size(); ++i)
                order[i] = i;
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                if (v.values[a] != v.values[b])
                    return v.values[a] > v.values[b];
                return v.labels[a] < v.labels[b];
            });
            std::string out = "# config_hash=" + hash + "\n";
            out += "rank,label,value\n";
            for (std::size_t i = 0; i < order.size(); ++i)
                out += std::to_string(i + 1) + "," + v.labels[order[i]] + "," +
                       format_double(v.values[order[i]]) + "\n";
            atomic_write(cfg.out_dir / "rankings" /
                             (std::to_string(year) + "_" + metric + ".csv"),
                         out);
        }
    }
    return 0;
}

std::string panel_json(const PanelBuildResult &p, const std::string &hash) {
    std::string j = "{\n  \"config_hash\": \"" + hash + "\",\n";
    j += "  \"n_obs\": " + std::to_string(p.observations.size()) + ",\n";
    std::set<std::string> countries;
    for (const auto &o : p.observations)
        countries.insert(o.country);
    j += "  \"n_countries\": " + std::to_string(countries.size()) + ",\n";
    j += "  \"period_starts\": [";
    for (std::size_t i = 0; i < p.period_starts.size(); ++i)
        j += (i ? ", " : "") + std::to_string(p.period_starts[i]);
    j += "],\n  \"excluded\": [\n";
    for (std::size_t i = 0; i < p.excluded.size(); ++i)
        j += "    {\"label\": \"" + p.excluded[i].label + "\", \"reason\": \"" +
             p.excluded[i].reason + (i + 1 < p.excluded.size() ? "\"},\n" : "\"}\n");
    j += "  ]\n}\n";
    return j;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"economic-complexity metrics and growth-regression pipeline"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::vector<std::string> sets;
    std::string year_arg, metric_arg, horizon_arg, out_arg;
    app.add_option("--config", config_path, "INI config file");
    app.add_option("--set", sets, "override config entries, e.g. --set panel.horizon=20");
    app.add_option("--year", year_arg, "restrict to one year (or a,b or a-b)");
    app.add_option("--metric", metric_arg, "restrict to one metric");
    app.add_option("--horizon", horizon_arg, "panel horizon in years");
    app.add_option("--out", out_arg, "output directory");

    auto *filter = app.add_subcommand("filter", "apply the data-cleaning cascade per year");
    auto *compute = app.add_subcommand("compute", "compute complexity metrics per year");
    auto *correlate_ = app.add_subcommand("correlate", "cross-metric correlation reports");
    auto *regress = app.add_subcommand("regress", "panel growth regressions (OLS and FE)");
    auto *predict = app.add_subcommand("predict", "ranked growth predictions");
    auto *rank = app.add_subcommand("rank", "ranked metric tables");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return 1;
    }

    try {
        ecomplex::RunConfig cfg;
        if (!config_path.empty())
            cfg = ecomplex::load_config(config_path);
        if (!year_arg.empty())
            ecomplex::apply_override(cfg, "run.years", year_arg);
        if (!metric_arg.empty()) {
            ecomplex::apply_override(cfg, "metrics.list", metric_arg);
            ecomplex::apply_override(cfg, "panel.metric", metric_arg);
        }
        if (!horizon_arg.empty())
            ecomplex::apply_override(cfg, "panel.horizon", horizon_arg);
        if (!out_arg.empty())
            ecomplex::apply_override(cfg, "output.dir", out_arg);
        for (const auto &s : sets) {
            auto eq = s.find('=');
            if (eq == std::string::npos)
                throw ecomplex::config_error("--set expects key=value, got '" + s + "'");
            ecomplex::apply_override(cfg, s.substr(0, eq), s.substr(eq + 1));
        }

        if (filter->parsed())
            return cmd_filter(cfg);
        if (compute->parsed())
            return cmd_compute(cfg);
        if (correlate_->parsed())
            return cmd_correlate(cfg);
        if (regress->parsed())
            return cmd_regress(cfg);
        if (predict->parsed())
            return cmd_predict(cfg);
        if (rank->parsed())
            return cmd_rank(cfg);
        return 1;
    } catch (const ecomplex::config_error &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const ecomplex::data_error &e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
