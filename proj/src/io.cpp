#include "ecomplex/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ecomplex/csv.hpp"
#include "ecomplex/errors.hpp"

namespace ecomplex {

using nlohmann::json;

void atomic_write(const std::filesystem::path &path, const std::string &content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw data_error("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out)
            throw data_error("short write to " + tmp.string());
    }
    fs::rename(tmp, path);
}

void write_metric_csv(const std::filesystem::path &path, const MetricVector &v,
                      const std::string &hash) {
    std::string out = "# config_hash=" + hash + "\n";
    out += "# metric=" + v.metric_name + " axis=" + to_string(v.axis) + "\n";
    out += "label,value\n";
    for (std::size_t i = 0; i < v.labels.size(); ++i)
        out += csv_join({v.labels[i], format_double(v.values[i])}) + "\n";
    atomic_write(path, out);
}

MetricVector read_metric_csv(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw data_error("cannot open metric file: " + path.string());

    // comment header carries the metric name and axis
    MetricVector v;
    std::string line;
    while (in.peek() == '#') {
        std::getline(in, line);
        auto mpos = line.find("metric=");
        if (mpos != std::string::npos) {
            auto rest = line.substr(mpos + 7);
            auto sp = rest.find(' ');
            v.metric_name = rest.substr(0, sp);
            if (rest.find("axis=product") != std::string::npos)
                v.axis = Axis::product;
        }
    }

    CsvReader reader(in);
    std::vector<std::string> fields;
    if (!reader.next_row(fields) || fields.size() < 2 || fields[0] != "label")
        throw data_error("malformed metric file: " + path.string());
    while (reader.next_row(fields)) {
        if (fields.size() == 1 && fields[0].empty())
            continue;
        if (fields.size() < 2)
            throw data_error("malformed metric row at line " +
                             std::to_string(reader.line_number()) + " in " + path.string());
        char *end = nullptr;
        double x = std::strtod(fields[1].c_str(), &end);
        if (end == nullptr || *end != '\0')
            throw data_error("bad metric value '" + fields[1] + "' in " + path.string());
        v.labels.push_back(fields[0]);
        v.values.push_back(x);
    }
    return v;
}

void write_matrix_csv(const std::filesystem::path &path, const TradeMatrix &m,
                      const std::string &hash) {
    std::string out = "# config_hash=" + hash + "\n";
    out += "# year=" + std::to_string(m.year()) + "\n";
    out += "country,product,value\n";
    for (std::size_t c = 0; c < m.n_countries(); ++c)
        for (std::size_t p = 0; p < m.n_products(); ++p)
            if (!m.at(c, p).is_zero())
                out += csv_join({m.countries()[c], m.products()[p], m.at(c, p).str()}) + "\n";
    atomic_write(path, out);
}

namespace {

json removals_json(const std::vector<Removal> &rs) {
    json arr = json::array();
    for (const auto &r : rs)
        arr.push_back({{"label", r.label}, {"reason", r.reason}});
    return arr;
}

} // namespace

std::string filter_report_json(const FilterReport &r, const std::string &hash) {
    json j;
    j["config_hash"] = hash;
    j["year"] = r.year;
    j["countries_dropped"] = removals_json(r.countries_dropped);
    j["products_dropped"] = removals_json(r.products_dropped);
    j["cells_zeroed"] = r.cells_zeroed;
    j["input_total"] = r.input_total.str();
    j["retained_total"] = r.retained_total.str();
    j["zeroed_value"] = r.zeroed_value.str();
    j["dropped_product_value"] = r.dropped_product_value.str();
    j["dropped_country_value"] = r.dropped_country_value.str();
    j["retained_trade_share"] = r.retained_trade_share;
    j["stable"] = r.stable;
    j["steps"] = r.steps;
    j["warnings"] = r.warnings;
    return j.dump(2) + "\n";
}

std::string diagnostics_json(const IterationDiagnostics &d, const std::string &hash) {
    json j;
    j["config_hash"] = hash;
    j["iterations"] = d.iterations;
    j["final_residual"] = d.final_residual;
    j["converged"] = d.converged;
    j["tolerance"] = d.tolerance;
    j["degenerate_entities"] = d.degenerate_entities;
    j["degenerate_spectrum"] = d.degenerate_spectrum;
    j["dropped_countries"] = d.dropped_countries;
    j["dropped_products"] = d.dropped_products;
    j["warnings"] = d.warnings;
    if (!d.normalization_deviation.empty()) {
        double worst = 0.0;
        for (double x : d.normalization_deviation)
            worst = std::max(worst, x);
        j["max_normalization_deviation"] = worst;
    }
    return j.dump(2) + "\n";
}

std::string correlation_json(const CorrelationReport &r, const std::string &hash) {
    json j;
    j["config_hash"] = hash;
    j["metric_a"] = r.metric_a;
    j["metric_b"] = r.metric_b;
    j["n"] = r.n;
    j["pearson_r"] = r.pearson_r;
    j["r_squared"] = r.r_squared;
    j["spearman_rho"] = r.spearman_rho;
    return j.dump(2) + "\n";
}

std::string regression_json(const RegressionResult &r, const std::string &hash) {
    json j;
    j["config_hash"] = hash;
    j["estimator"] = r.estimator;
    json coef = json::object(), se = json::object();
    for (std::size_t i = 0; i < r.names.size(); ++i) {
        coef[r.names[i]] = r.coef[i];
        se[r.names[i]] = r.se[i];
    }
    j["coefficients"] = coef;
    j["se"] = se;
    j["names"] = r.names; // design order
    j["vcov"] = r.vcov;
    j["n_obs"] = r.n_obs;
    j["n_clusters"] = r.n_clusters;
    if (r.estimator == "fixed_effects") {
        j["r2_within"] = r.r2_within;
        j["r2_between"] = r.r2_between;
        j["r2_overall"] = r.r2_overall;
    } else {
        j["r2"] = r.r2;
        j["r2_adjusted"] = r.r2_adjusted;
    }
    j["rmse"] = r.rmse;
    j["year_dummies"] = r.year_dummies;
    return j.dump(2) + "\n";
}

void write_scatter_csv(const std::filesystem::path &path, const CorrelationReport &r,
                       const std::string &hash) {
    std::string out = "# config_hash=" + hash + "\n";
    out += csv_join({"label", r.metric_a, r.metric_b}) + "\n";
    for (const auto &p : r.scatter)
        out += csv_join({p.label, format_double(p.a), format_double(p.b)}) + "\n";
    atomic_write(path, out);
}

namespace {

std::string stars(double coef, double se) {
    if (!(se > 0.0))
        return "";
    double z = std::abs(coef / se);
    if (z > 2.575829303549) // p < 0.01
        return "***";
    if (z > 1.959963984540) // p < 0.05
        return "**";
    if (z > 1.644853626951) // p < 0.10
        return "*";
    return "";
}

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

} // namespace

std::string regression_table_text(const std::vector<RegressionResult> &columns,
                                  const std::string &hash) {
    // union of coefficient names, in first-seen design order
    std::vector<std::string> rows;
    for (const auto &col : columns)
        for (const auto &n : col.names)
            if (std::find(rows.begin(), rows.end(), n) == rows.end())
                rows.push_back(n);

    const std::size_t w = 24;
    auto pad = [&](std::string s) {
        if (s.size() < w)
            s.resize(w, ' ');
        return s;
    };

    std::ostringstream out;
    out << "# config_hash=" << hash << "\n";
    out << pad("");
    for (const auto &col : columns)
        out << pad(col.estimator);
    out << "\n";

    for (const auto &name : rows) {
        out << pad(name);
        for (const auto &col : columns) {
            auto it = std::find(col.names.begin(), col.names.end(), name);
            if (it == col.names.end()) {
                out << pad("");
            } else {
                std::size_t i = static_cast<std::size_t>(it - col.names.begin());
                out << pad(fixed(col.coef[i], 5) + stars(col.coef[i], col.se[i]));
            }
        }
        out << "\n" << pad("");
        for (const auto &col : columns) {
            auto it = std::find(col.names.begin(), col.names.end(), name);
            if (it == col.names.end()) {
                out << pad("");
            } else {
                std::size_t i = static_cast<std::size_t>(it - col.names.begin());
                out << pad("(" + fixed(col.se[i], 5) + ")");
            }
        }
        out << "\n";
    }

    auto stat_row = [&](const std::string &label, auto get) {
        out << pad(label);
        for (const auto &col : columns)
            out << pad(get(col));
        out << "\n";
    };
    stat_row("N", [](const RegressionResult &r) { return std::to_string(r.n_obs); });
    stat_row("N_clust", [](const RegressionResult &r) { return std::to_string(r.n_clusters); });
    stat_row("R2", [](const RegressionResult &r) {
        return fixed(r.estimator == "fixed_effects" ? r.r2_within : r.r2, 4);
    });
    stat_row("R2_adj/overall", [](const RegressionResult &r) {
        return fixed(r.estimator == "fixed_effects" ? r.r2_overall : r.r2_adjusted, 4);
    });
    stat_row("RMSE", [](const RegressionResult &r) { return fixed(r.rmse, 5); });
    out << "* p<0.10, ** p<0.05, *** p<0.01 (normal critical values); "
           "cluster-robust SEs in parentheses\n";
    return out.str();
}

void write_predictions_csv(const std::filesystem::path &path,
                           const std::vector<Prediction> &rows, const std::string &hash) {
    std::string out = "# config_hash=" + hash + "\n";
    out += "country,predicted_growth,rank\n";
    for (const auto &r : rows)
        out += csv_join({r.country, format_double(r.growth), std::to_string(r.rank)}) + "\n";
    atomic_write(path, out);
}

} // namespace ecomplex
