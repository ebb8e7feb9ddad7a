#include "ecomplex/trade_data.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <tuple>

#include "ecomplex/csv.hpp"
#include "ecomplex/errors.hpp"

namespace ecomplex {

std::string to_string(Scheme s) { return s == Scheme::sitc4 ? "sitc4" : "hs4"; }

std::optional<Scheme> scheme_from_string(const std::string &s) {
    if (s == "sitc4" || s == "sitc")
        return Scheme::sitc4;
    if (s == "hs4" || s == "hs92" || s == "hs")
        return Scheme::hs4;
    return std::nullopt;
}

TradeMatrix::TradeMatrix(int year, std::vector<std::string> countries,
                         std::vector<std::string> products)
    : year_(year), countries_(std::move(countries)), products_(std::move(products)),
      values_(countries_.size() * products_.size()) {
    auto has_dups = [](std::vector<std::string> v) {
        std::sort(v.begin(), v.end());
        return std::adjacent_find(v.begin(), v.end()) != v.end();
    };
    if (has_dups(countries_) || has_dups(products_))
        throw data_error("duplicate labels in trade matrix");
}

Money TradeMatrix::row_total(std::size_t c) const {
    std::int64_t sum = 0;
    for (std::size_t p = 0; p < products_.size(); ++p)
        sum += at(c, p).raw();
    return Money::from_raw(sum);
}

Money TradeMatrix::col_total(std::size_t p) const {
    std::int64_t sum = 0;
    for (std::size_t c = 0; c < countries_.size(); ++c)
        sum += at(c, p).raw();
    return Money::from_raw(sum);
}

Money TradeMatrix::total() const {
    std::int64_t sum = 0;
    for (const Money &v : values_)
        sum += v.raw();
    return Money::from_raw(sum);
}

std::optional<std::size_t> TradeMatrix::country_index(const std::string &code) const {
    auto it = std::find(countries_.begin(), countries_.end(), code);
    if (it == countries_.end())
        return std::nullopt;
    return static_cast<std::size_t>(it - countries_.begin());
}

TradeMatrix TradeMatrix::select(const std::vector<std::size_t> &rows,
                                const std::vector<std::size_t> &cols) const {
    std::vector<std::string> cs, ps;
    cs.reserve(rows.size());
    ps.reserve(cols.size());
    for (auto r : rows)
        cs.push_back(countries_[r]);
    for (auto c : cols)
        ps.push_back(products_[c]);
    TradeMatrix out(year_, std::move(cs), std::move(ps));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j)
            out.set(i, j, at(rows[i], cols[j]));
    return out;
}

std::optional<double> CountryMeta::governance(const std::string &name) const {
    if (name == "law")
        return law;
    if (name == "voice")
        return voice;
    if (name == "corruption")
        return corruption;
    if (name == "regulatory_quality")
        return regulatory_quality;
    if (name == "government_effectiveness")
        return government_effectiveness;
    if (name == "political_stability")
        return political_stability;
    return std::nullopt;
}

namespace {

std::string column_name(const LoadOptions &opts, const std::string &key) {
    auto it = opts.columns.find(key);
    return it == opts.columns.end() ? key : it->second;
}

// Resolves required headers to field indices; throws on a malformed header.
std::map<std::string, std::size_t> header_index(const std::vector<std::string> &header,
                                                const std::vector<std::string> &required,
                                                const std::filesystem::path &path) {
    std::map<std::string, std::size_t> idx;
    for (std::size_t i = 0; i < header.size(); ++i)
        idx[header[i]] = i;
    for (const auto &name : required)
        if (!idx.count(name))
            throw data_error("malformed header in " + path.string() + ": missing column '" +
                             name + "'");
    return idx;
}

bool blank_row(const std::vector<std::string> &fields) {
    return fields.size() == 1 && fields[0].empty();
}

std::optional<int> parse_year(const std::string &s) {
    if (s.empty())
        return std::nullopt;
    char *end = nullptr;
    long v = std::strtol(s.c_str(), &end, 10);
    if (end == nullptr || *end != '\0' || v < 0 || v > 9999)
        return std::nullopt;
    return static_cast<int>(v);
}

std::optional<double> parse_real(const std::string &s) {
    if (s.empty())
        return std::nullopt;
    char *end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == nullptr || *end != '\0')
        return std::nullopt;
    return v;
}

} // namespace

TradeLoadResult load_trade_csv(const std::filesystem::path &path, Scheme scheme,
                               const LoadOptions &opts) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw data_error("cannot open trade file: " + path.string());

    CsvReader reader(in);
    std::vector<std::string> fields;
    if (!reader.next_row(fields))
        throw data_error("malformed header in " + path.string() + ": empty file");

    const std::string col_year = column_name(opts, "year");
    const std::string col_country = column_name(opts, "country");
    const std::string col_product = column_name(opts, "product");
    const std::string col_value = column_name(opts, "value");
    auto idx = header_index(fields, {col_year, col_country, col_product, col_value}, path);
    const std::size_t iy = idx[col_year], ic = idx[col_country], ip = idx[col_product],
                      iv = idx[col_value];

    TradeLoadResult out;
    std::map<std::tuple<int, std::string, std::string>, Money> agg;

    auto reject = [&](const std::string &why) {
        ++out.rejected;
        if (out.diagnostics.size() < opts.max_errors + 1)
            out.diagnostics.push_back("line " + std::to_string(reader.line_number()) + ": " + why);
    };

    while (reader.next_row(fields)) {
        if (blank_row(fields))
            continue;
        const std::size_t need = std::max(std::max(iy, ic), std::max(ip, iv)) + 1;
        if (fields.size() < need) {
            reject("expected at least " + std::to_string(need) + " fields, got " +
                   std::to_string(fields.size()));
            continue;
        }
        auto year = parse_year(fields[iy]);
        if (!year) {
            reject("bad year '" + fields[iy] + "'");
            continue;
        }
        if (fields[ic].empty() || fields[ip].empty()) {
            reject("empty country or product code");
            continue;
        }
        bool exact = true;
        auto value = Money::parse(fields[iv], &exact);
        if (!value) {
            reject("non-numeric value '" + fields[iv] + "'");
            continue;
        }
        if (value->is_negative()) {
            reject("negative value '" + fields[iv] + "'");
            continue;
        }
        if (!exact)
            ++out.inexact;
        ++out.accepted;
        agg[{*year, fields[ic], fields[ip]}] += *value;
    }

    if (out.rejected > opts.max_errors) {
        std::string msg = "too many bad rows in " + path.string() + " (" +
                          std::to_string(out.rejected) + " > budget " +
                          std::to_string(opts.max_errors) + "):";
        for (const auto &d : out.diagnostics)
            msg += "\n  " + d;
        throw data_error(msg);
    }

    out.records.reserve(agg.size());
    for (const auto &[key, value] : agg)
        out.records.push_back(
            {std::get<0>(key), std::get<1>(key), std::get<2>(key), value, scheme});
    return out;
}

MetaLoadResult load_country_meta(const std::filesystem::path &path, const LoadOptions &opts) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw data_error("cannot open covariates file: " + path.string());

    CsvReader reader(in);
    std::vector<std::string> fields;
    if (!reader.next_row(fields))
        throw data_error("malformed header in " + path.string() + ": empty file");

    const std::string col_country = column_name(opts, "country");
    const std::string col_year = column_name(opts, "year");
    auto idx = header_index(fields, {col_country, col_year}, path);

    auto col = [&](const char *key) -> std::optional<std::size_t> {
        auto it = idx.find(column_name(opts, key));
        if (it == idx.end())
            return std::nullopt;
        return it->second;
    };
    const auto ic = idx[col_country], iy = idx[col_year];
    const auto igdp = col("gdp_pc"), ipop = col("population"), ihc = col("human_capital"),
               icap = col("capital_per_worker"), ilaw = col("law"), ivoice = col("voice"),
               icorr = col("corruption"), ireg = col("regulatory_quality"),
               igov = col("government_effectiveness"), istab = col("political_stability");

    MetaLoadResult out;
    auto reject = [&](const std::string &why) {
        ++out.rejected;
        if (out.diagnostics.size() < opts.max_errors + 1)
            out.diagnostics.push_back("line " + std::to_string(reader.line_number()) + ": " + why);
    };
    auto field = [&](const std::vector<std::string> &row,
                     std::optional<std::size_t> i) -> std::optional<double> {
        if (!i || *i >= row.size())
            return std::nullopt;
        return parse_real(row[*i]);
    };

    while (reader.next_row(fields)) {
        if (blank_row(fields))
            continue;
        if (fields.size() <= std::max(ic, iy)) {
            reject("short row");
            continue;
        }
        auto year = parse_year(fields[iy]);
        if (!year || fields[ic].empty()) {
            reject("bad country or year");
            continue;
        }
        CountryMeta m;
        m.country = fields[ic];
        m.year = *year;
        m.gdp_pc = field(fields, igdp);
        m.population = field(fields, ipop);
        m.human_capital = field(fields, ihc);
        m.capital_per_worker = field(fields, icap);
        m.law = field(fields, ilaw);
        m.voice = field(fields, ivoice);
        m.corruption = field(fields, icorr);
        m.regulatory_quality = field(fields, ireg);
        m.government_effectiveness = field(fields, igov);
        m.political_stability = field(fields, istab);
        if (m.gdp_pc && *m.gdp_pc <= 0) {
            reject("non-positive gdp_pc");
            continue;
        }
        if (m.population && *m.population <= 0) {
            reject("non-positive population");
            continue;
        }
        ++out.accepted;
        out.series[m.country][m.year] = m;
    }

    if (out.rejected > opts.max_errors) {
        std::string msg = "too many bad rows in " + path.string();
        for (const auto &d : out.diagnostics)
            msg += "\n  " + d;
        throw data_error(msg);
    }
    return out;
}

TradeMatrix build_matrix(const std::vector<TradeRecord> &records, int year) {
    std::set<std::string> cset, pset;
    for (const auto &r : records) {
        if (r.year != year)
            continue;
        cset.insert(r.country);
        pset.insert(r.product);
    }
    if (cset.empty())
        throw data_error("no trade records for year " + std::to_string(year));

    TradeMatrix m(year, {cset.begin(), cset.end()}, {pset.begin(), pset.end()});
    std::map<std::string, std::size_t> cidx, pidx;
    for (std::size_t i = 0; i < m.countries().size(); ++i)
        cidx[m.countries()[i]] = i;
    for (std::size_t j = 0; j < m.products().size(); ++j)
        pidx[m.products()[j]] = j;
    for (const auto &r : records) {
        if (r.year != year)
            continue;
        const auto c = cidx[r.country], p = pidx[r.product];
        m.set(c, p, m.at(c, p) + r.value);
    }
    return m;
}

std::pair<TradeMatrix, FilterReport> apply_static_filters(const TradeMatrix &m,
                                                          const ReferenceData &ref,
                                                          const FilterConfig &cfg) {
    FilterReport report;
    report.year = m.year();
    report.input_total = m.total();
    report.steps = {"excluded_list", "no_meta", "population", "exports"};

    std::vector<std::size_t> keep_rows;
    for (std::size_t c = 0; c < m.n_countries(); ++c) {
        const std::string &code = m.countries()[c];
        std::string reason;
        if (cfg.excluded_countries.count(code)) {
            reason = "excluded_list";
        } else {
            auto it = ref.meta.find(code);
            const bool has_pop = it != ref.meta.end() && it->second.population.has_value();
            if (cfg.min_population > 0 && !has_pop) {
                reason = "no_meta";
            } else if (cfg.min_population > 0 && *it->second.population <= cfg.min_population) {
                reason = "population";
            } else if (!cfg.min_total_exports.is_zero() &&
                       !cfg.min_total_exports.is_negative()) {
                auto ex = ref.total_exports.find(code);
                Money total = ex == ref.total_exports.end() ? Money() : ex->second;
                if (total <= cfg.min_total_exports)
                    reason = "exports";
            }
        }
        if (reason.empty()) {
            keep_rows.push_back(c);
        } else {
            report.countries_dropped.push_back({code, reason});
            report.dropped_country_value += m.row_total(c);
        }
    }
    if (keep_rows.empty())
        throw data_error("degenerate_sample: static filters removed every country for year " +
                         std::to_string(m.year()));

    std::vector<std::size_t> keep_cols(m.n_products());
    for (std::size_t p = 0; p < keep_cols.size(); ++p)
        keep_cols[p] = p;
    TradeMatrix out = m.select(keep_rows, keep_cols);
    report.retained_total = out.total();
    report.retained_trade_share = report.input_total.is_zero()
                                      ? 1.0
                                      : static_cast<double>(report.retained_total.raw()) /
                                            static_cast<double>(report.input_total.raw());
    return {std::move(out), std::move(report)};
}

namespace {

struct CascadeOutcome {
    std::vector<char> row_kept, col_kept; // post-cascade masks
    std::vector<Removal> product_drops, country_drops;
    std::int64_t cells_zeroed = 0;
    std::int64_t zeroed_raw = 0;
    bool changed = false;
};

// One pass of the fixed-order cascade over `vals` (row-major, modified in
// place by the cell-rounding step).
CascadeOutcome run_cascade(std::vector<std::int64_t> &vals, std::size_t C, std::size_t P,
                           const std::vector<std::string> &countries,
                           const std::vector<std::string> &products, const FilterConfig &cfg) {
    CascadeOutcome o;
    o.row_kept.assign(C, 1);
    o.col_kept.assign(P, 1);

    // (1) round small cells to zero
    const std::int64_t min_cell = cfg.min_cell_value.raw();
    if (min_cell > 0) {
        for (auto &v : vals) {
            if (v > 0 && v < min_cell) {
                o.zeroed_raw += v;
                v = 0;
                ++o.cells_zeroed;
                o.changed = true;
            }
        }
    }

    // (2) products below the global-exports minimum
    const std::int64_t min_global = cfg.min_product_global_exports.raw();
    if (min_global > 0) {
        for (std::size_t p = 0; p < P; ++p) {
            std::int64_t world = 0;
            for (std::size_t c = 0; c < C; ++c)
                world += vals[c * P + p];
            if (world < min_global) {
                o.col_kept[p] = 0;
                o.product_drops.push_back({products[p], "global_min"});
                o.changed = true;
            }
        }
    }

    // (3) products that are zero for too many countries
    for (std::size_t p = 0; p < P; ++p) {
        if (!o.col_kept[p])
            continue;
        std::size_t zeros = 0;
        for (std::size_t c = 0; c < C; ++c)
            if (vals[c * P + p] == 0)
                ++zeros;
        if (static_cast<double>(zeros) > cfg.product_zero_share_max * static_cast<double>(C) +
                                              1e-9) {
            o.col_kept[p] = 0;
            o.product_drops.push_back({products[p], "zero_share"});
            o.changed = true;
        }
    }

    // (4) countries that are zero for almost all remaining products
    std::size_t n_cols = 0;
    for (std::size_t p = 0; p < P; ++p)
        n_cols += o.col_kept[p];
    if (n_cols > 0) {
        for (std::size_t c = 0; c < C; ++c) {
            std::size_t zeros = 0;
            for (std::size_t p = 0; p < P; ++p)
                if (o.col_kept[p] && vals[c * P + p] == 0)
                    ++zeros;
            if (static_cast<double>(zeros) >=
                cfg.country_zero_share_max * static_cast<double>(n_cols) - 1e-9) {
                o.row_kept[c] = 0;
                o.country_drops.push_back({countries[c], "zero_share"});
                o.changed = true;
            }
        }
    }

    // sweep all-zero rows/columns among what is left
    for (std::size_t c = 0; c < C; ++c) {
        if (!o.row_kept[c])
            continue;
        bool all_zero = true;
        for (std::size_t p = 0; p < P && all_zero; ++p)
            if (o.col_kept[p] && vals[c * P + p] != 0)
                all_zero = false;
        if (all_zero) {
            o.row_kept[c] = 0;
            o.country_drops.push_back({countries[c], "all_zero"});
            o.changed = true;
        }
    }
    for (std::size_t p = 0; p < P; ++p) {
        if (!o.col_kept[p])
            continue;
        bool all_zero = true;
        for (std::size_t c = 0; c < C && all_zero; ++c)
            if (o.row_kept[c] && vals[c * P + p] != 0)
                all_zero = false;
        if (all_zero) {
            o.col_kept[p] = 0;
            o.product_drops.push_back({products[p], "all_zero"});
            o.changed = true;
        }
    }
    return o;
}

} // namespace

std::pair<TradeMatrix, FilterReport> apply_yearly_filters(const TradeMatrix &m,
                                                          const FilterConfig &cfg) {
    if (m.n_countries() == 0 || m.n_products() == 0)
        throw data_error("yearly filters require a nonempty matrix");

    FilterReport report;
    report.year = m.year();
    report.input_total = m.total();
    report.steps = {"min_cell", "global_min", "product_zero_share", "country_zero_share",
                    "all_zero"};

    const std::size_t C = m.n_countries(), P = m.n_products();
    std::vector<std::int64_t> vals(C * P);
    for (std::size_t c = 0; c < C; ++c)
        for (std::size_t p = 0; p < P; ++p)
            vals[c * P + p] = m.at(c, p).raw();

    CascadeOutcome pass = run_cascade(vals, C, P, m.countries(), m.products(), cfg);
    report.cells_zeroed = pass.cells_zeroed;
    report.zeroed_value = Money::from_raw(pass.zeroed_raw);
    report.products_dropped = std::move(pass.product_drops);
    report.countries_dropped = std::move(pass.country_drops);

    std::vector<std::size_t> rows, cols;
    for (std::size_t c = 0; c < C; ++c)
        if (pass.row_kept[c])
            rows.push_back(c);
    for (std::size_t p = 0; p < P; ++p)
        if (pass.col_kept[p])
            cols.push_back(p);
    if (rows.empty() || cols.empty())
        throw data_error("degenerate_sample: yearly filter cascade emptied the matrix for year " +
                         std::to_string(m.year()));

    // account for value removed with dropped columns, then dropped rows
    std::int64_t col_drop_raw = 0, row_drop_raw = 0;
    for (std::size_t c = 0; c < C; ++c)
        for (std::size_t p = 0; p < P; ++p) {
            if (!pass.col_kept[p])
                col_drop_raw += vals[c * P + p];
            else if (!pass.row_kept[c])
                row_drop_raw += vals[c * P + p];
        }
    report.dropped_product_value = Money::from_raw(col_drop_raw);
    report.dropped_country_value = Money::from_raw(row_drop_raw);

    TradeMatrix out(m.year(), [&] {
        std::vector<std::string> cs;
        for (auto r : rows)
            cs.push_back(m.countries()[r]);
        return cs;
    }(), [&] {
        std::vector<std::string> ps;
        for (auto c : cols)
            ps.push_back(m.products()[c]);
        return ps;
    }());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j)
            out.set(i, j, Money::from_raw(vals[rows[i] * P + cols[j]]));

    report.retained_total = out.total();
    report.retained_trade_share = report.input_total.is_zero()
                                      ? 1.0
                                      : static_cast<double>(report.retained_total.raw()) /
                                            static_cast<double>(report.input_total.raw());

    // Would a second pass change the sample? (single-pass by design; callers
    // can see whether iterating the cascade would shrink it further)
    std::vector<std::int64_t> again(rows.size() * cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j)
            again[i * cols.size() + j] = out.at(i, j).raw();
    CascadeOutcome second =
        run_cascade(again, rows.size(), cols.size(), out.countries(), out.products(), cfg);
    report.stable = !second.changed;
    if (!report.stable)
        report.warnings.push_back("a second cascade pass would change the sample");

    return {std::move(out), std::move(report)};
}

} // namespace ecomplex
