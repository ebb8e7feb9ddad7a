#include "ecomplex/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ecomplex/csv.hpp"
#include "ecomplex/errors.hpp"

namespace ecomplex {

namespace {

std::string trim(const std::string &s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string &s) {
    std::vector<std::string> out;
    std::string cur;
    std::stringstream ss(s);
    while (std::getline(ss, cur, ','))
        if (auto t = trim(cur); !t.empty())
            out.push_back(t);
    return out;
}

double parse_double(const std::string &key, const std::string &v) {
    char *end = nullptr;
    double x = std::strtod(v.c_str(), &end);
    if (v.empty() || end == nullptr || *end != '\0')
        throw config_error("config: bad number for " + key + ": '" + v + "'");
    return x;
}

long parse_int(const std::string &key, const std::string &v) {
    char *end = nullptr;
    long x = std::strtol(v.c_str(), &end, 10);
    if (v.empty() || end == nullptr || *end != '\0')
        throw config_error("config: bad integer for " + key + ": '" + v + "'");
    return x;
}

bool parse_bool(const std::string &key, const std::string &v) {
    std::string low;
    for (char c : v)
        low += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (low == "true" || low == "1" || low == "yes" || low == "on")
        return true;
    if (low == "false" || low == "0" || low == "no" || low == "off")
        return false;
    throw config_error("config: bad boolean for " + key + ": '" + v + "'");
}

Money parse_money(const std::string &key, const std::string &v) {
    auto m = Money::parse(v);
    if (!m)
        throw config_error("config: bad amount for " + key + ": '" + v + "'");
    return *m;
}

} // namespace

void apply_override(RunConfig &cfg, const std::string &key, const std::string &value) {
    const std::string v = trim(value);
    if (key == "input.trade_csv") {
        cfg.trade_csv = v;
    } else if (key == "input.covariates_csv") {
        cfg.covariates_csv = v;
    } else if (key == "input.scheme") {
        auto s = scheme_from_string(v);
        if (!s)
            throw config_error("config: unknown scheme '" + v + "'");
        cfg.scheme = *s;
    } else if (key == "filter.min_population") {
        cfg.filter.min_population = parse_double(key, v);
    } else if (key == "filter.population_reference_year") {
        cfg.filter.population_reference_year = static_cast<int>(parse_int(key, v));
    } else if (key == "filter.min_total_exports") {
        cfg.filter.min_total_exports = parse_money(key, v);
    } else if (key == "filter.exports_reference_year") {
        cfg.filter.exports_reference_year = static_cast<int>(parse_int(key, v));
    } else if (key == "filter.excluded_countries") {
        cfg.filter.excluded_countries.clear();
        for (auto &c : split_list(v))
            cfg.filter.excluded_countries.insert(c);
    } else if (key == "filter.product_zero_share_max") {
        cfg.filter.product_zero_share_max = parse_double(key, v);
    } else if (key == "filter.country_zero_share_max") {
        cfg.filter.country_zero_share_max = parse_double(key, v);
    } else if (key == "filter.min_product_global_exports") {
        cfg.filter.min_product_global_exports = parse_money(key, v);
    } else if (key == "filter.min_cell_value") {
        cfg.filter.min_cell_value = parse_money(key, v);
    } else if (key == "metrics.list") {
        cfg.metrics = split_list(v);
    } else if (key == "metrics.tol") {
        cfg.solver.tol = parse_double(key, v);
    } else if (key == "metrics.max_iter") {
        cfg.solver.max_iter = static_cast<std::size_t>(parse_int(key, v));
    } else if (key == "run.years") {
        cfg.years.clear();
        for (auto &item : split_list(v)) {
            auto dash = item.find('-');
            if (dash != std::string::npos && dash > 0) {
                int a = static_cast<int>(parse_int(key, item.substr(0, dash)));
                int b = static_cast<int>(parse_int(key, item.substr(dash + 1)));
                if (b < a)
                    throw config_error("config: bad year range '" + item + "'");
                for (int y = a; y <= b; ++y)
                    cfg.years.push_back(y);
            } else {
                cfg.years.push_back(static_cast<int>(parse_int(key, item)));
            }
        }
    } else if (key == "run.seed") {
        cfg.seed = static_cast<std::uint64_t>(parse_int(key, v));
    } else if (key == "panel.start_year") {
        cfg.panel.start_year = static_cast<int>(parse_int(key, v));
    } else if (key == "panel.end_year") {
        cfg.panel.end_year = static_cast<int>(parse_int(key, v));
    } else if (key == "panel.horizon") {
        cfg.panel.horizon = static_cast<int>(parse_int(key, v));
    } else if (key == "panel.balanced") {
        cfg.panel.balanced = parse_bool(key, v);
    } else if (key == "panel.metric") {
        cfg.panel.metric_name = v;
    } else if (key == "panel.controls") {
        cfg.panel.controls = split_list(v);
    } else if (key == "panel.standardize_metric") {
        cfg.panel.standardize_metric = parse_bool(key, v);
    } else if (key == "panel.log_gdp") {
        cfg.panel.transforms.log_gdp = parse_bool(key, v);
    } else if (key == "panel.log_capital") {
        cfg.panel.transforms.log_capital = parse_bool(key, v);
    } else if (key == "panel.population_millions") {
        cfg.panel.transforms.population_millions = parse_bool(key, v);
    } else if (key == "regression.regressors") {
        cfg.regressors = split_list(v);
    } else if (key == "regression.year_dummies") {
        cfg.year_dummies = parse_bool(key, v);
    } else if (key == "regression.estimators") {
        cfg.estimators = split_list(v);
        for (const auto &e : cfg.estimators)
            if (e != "pooled_ols" && e != "fixed_effects")
                throw config_error("config: unknown estimator '" + e + "'");
    } else if (key == "correlate.pairs") {
        cfg.correlation_pairs.clear();
        for (auto &item : split_list(v)) {
            auto colon = item.find(':');
            if (colon == std::string::npos)
                throw config_error("config: correlate pair must be 'a:b', got '" + item + "'");
            cfg.correlation_pairs.push_back(
                {trim(item.substr(0, colon)), trim(item.substr(colon + 1))});
        }
    } else if (key == "predict.feature_year") {
        cfg.feature_year = static_cast<int>(parse_int(key, v));
    } else if (key == "output.dir") {
        cfg.out_dir = v;
    } else {
        throw config_error("config: unknown key '" + key + "'");
    }
}

RunConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in)
        throw config_error("cannot open config file: " + path.string());

    RunConfig cfg;
    std::string line, section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';')
            continue;
        // inline comments: " ; ..." or " # ..." after whitespace
        for (std::size_t i = 1; i < t.size(); ++i)
            if ((t[i] == '#' || t[i] == ';') &&
                std::isspace(static_cast<unsigned char>(t[i - 1]))) {
                t = trim(t.substr(0, i));
                break;
            }
        if (t.front() == '[') {
            if (t.back() != ']')
                throw config_error("config line " + std::to_string(lineno) +
                                   ": malformed section header");
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw config_error("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (section.empty())
            throw config_error("config line " + std::to_string(lineno) +
                               ": key outside any [section]");
        apply_override(cfg, section + "." + key, value);
    }
    return cfg;
}

std::string canonical_config(const RunConfig &cfg) {
    std::vector<std::pair<std::string, std::string>> kv;
    auto add = [&](const std::string &k, const std::string &v) { kv.push_back({k, v}); };
    auto join = [](const std::vector<std::string> &v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i)
            s += (i ? "," : "") + v[i];
        return s;
    };

    add("input.trade_csv", cfg.trade_csv.string());
    add("input.covariates_csv", cfg.covariates_csv.string());
    add("input.scheme", to_string(cfg.scheme));
    add("filter.min_population", format_double(cfg.filter.min_population));
    add("filter.population_reference_year", std::to_string(cfg.filter.population_reference_year));
    add("filter.min_total_exports", cfg.filter.min_total_exports.str());
    add("filter.exports_reference_year", std::to_string(cfg.filter.exports_reference_year));
    add("filter.excluded_countries",
        join({cfg.filter.excluded_countries.begin(), cfg.filter.excluded_countries.end()}));
    add("filter.product_zero_share_max", format_double(cfg.filter.product_zero_share_max));
    add("filter.country_zero_share_max", format_double(cfg.filter.country_zero_share_max));
    add("filter.min_product_global_exports", cfg.filter.min_product_global_exports.str());
    add("filter.min_cell_value", cfg.filter.min_cell_value.str());
    add("metrics.list", join(cfg.metrics));
    add("metrics.tol", format_double(cfg.solver.tol));
    add("metrics.max_iter", std::to_string(cfg.solver.max_iter));
    {
        std::vector<std::string> ys;
        for (int y : cfg.years)
            ys.push_back(std::to_string(y));
        add("run.years", join(ys));
    }
    add("run.seed", std::to_string(cfg.seed));
    add("panel.start_year", std::to_string(cfg.panel.start_year));
    add("panel.end_year", std::to_string(cfg.panel.end_year));
    add("panel.horizon", std::to_string(cfg.panel.horizon));
    add("panel.balanced", cfg.panel.balanced ? "true" : "false");
    add("panel.metric", cfg.panel.metric_name);
    add("panel.controls", join(cfg.panel.controls));
    add("panel.standardize_metric", cfg.panel.standardize_metric ? "true" : "false");
    add("panel.log_gdp", cfg.panel.transforms.log_gdp ? "true" : "false");
    add("panel.log_capital", cfg.panel.transforms.log_capital ? "true" : "false");
    add("panel.population_millions", cfg.panel.transforms.population_millions ? "true" : "false");
    add("regression.regressors", join(cfg.regressors));
    add("regression.year_dummies", cfg.year_dummies ? "true" : "false");
    add("regression.estimators", join(cfg.estimators));
    {
        std::vector<std::string> ps;
        for (const auto &[a, b] : cfg.correlation_pairs)
            ps.push_back(a + ":" + b);
        add("correlate.pairs", join(ps));
    }
    add("predict.feature_year", std::to_string(cfg.feature_year));
    add("output.dir", cfg.out_dir.string());

    std::sort(kv.begin(), kv.end());
    std::string out;
    for (const auto &[k, v] : kv) {
        out += k;
        out += '=';
        out += v;
        out += '\n';
    }
    return out;
}

std::string config_hash(const RunConfig &cfg) {
    const std::string dump = canonical_config(cfg);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : dump) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    static const char *hex = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[i] = hex[h & 0xf];
        h >>= 4;
    }
    return s;
}

} // namespace ecomplex
