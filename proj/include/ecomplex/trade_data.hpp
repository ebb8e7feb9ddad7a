#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ecomplex/money.hpp"

namespace ecomplex {

enum class Scheme { sitc4, hs4 };

std::string to_string(Scheme s);
std::optional<Scheme> scheme_from_string(const std::string &s);

/// One export flow: country c sold `value` dollars of product p in `year`.
struct TradeRecord {
    int year = 0;
    std::string country; // ISO-3
    std::string product; // classification code
    Money value;
    Scheme scheme = Scheme::sitc4;
};

/// Dense country x product export-value matrix for a single year.
/// Label lists are duplicate-free; values are exact decimals.
class TradeMatrix {
  public:
    TradeMatrix() = default;
    TradeMatrix(int year, std::vector<std::string> countries, std::vector<std::string> products);

    int year() const { return year_; }
    const std::vector<std::string> &countries() const { return countries_; }
    const std::vector<std::string> &products() const { return products_; }
    std::size_t n_countries() const { return countries_.size(); }
    std::size_t n_products() const { return products_.size(); }

    Money at(std::size_t c, std::size_t p) const { return values_[c * products_.size() + p]; }
    void set(std::size_t c, std::size_t p, Money v) { values_[c * products_.size() + p] = v; }

    Money row_total(std::size_t c) const;
    Money col_total(std::size_t p) const;
    Money total() const;

    std::optional<std::size_t> country_index(const std::string &code) const;

    /// Submatrix keeping the given row/column indices (ascending order kept).
    TradeMatrix select(const std::vector<std::size_t> &rows,
                       const std::vector<std::size_t> &cols) const;

  private:
    int year_ = 0;
    std::vector<std::string> countries_;
    std::vector<std::string> products_;
    std::vector<Money> values_; // row-major
};

/// Per-country, per-year covariates (PWT-style plus governance scores).
struct CountryMeta {
    std::string country;
    int year = 0;
    std::optional<double> gdp_pc;          // constant USD per capita, > 0
    std::optional<double> population;      // persons, > 0
    std::optional<double> human_capital;   // index
    std::optional<double> capital_per_worker; // constant USD
    // governance scores, absent before 1996
    std::optional<double> law;
    std::optional<double> voice;
    std::optional<double> corruption;
    std::optional<double> regulatory_quality;
    std::optional<double> government_effectiveness;
    std::optional<double> political_stability;

    std::optional<double> governance(const std::string &name) const;
};

/// Country-level series keyed by (country, year).
using MetaSeries = std::map<std::string, std::map<int, CountryMeta>>;

struct FilterConfig {
    double min_population = 1'250'000;
    int population_reference_year = 2008;
    Money min_total_exports = Money::from_dollars(1'000'000'000);
    int exports_reference_year = 2008;
    std::set<std::string> excluded_countries = {"TCD", "IRQ", "AFG"};
    double product_zero_share_max = 0.80;  // drop product if zero share strictly above
    double country_zero_share_max = 0.95;  // drop country if zero share at least this
    Money min_product_global_exports = Money::from_dollars(10'000'000);
    Money min_cell_value = Money::from_dollars(5'000);
};

struct Removal {
    std::string label;
    std::string reason;
};

/// Audit trail of one filter application. Values are exact, so
/// input_total == retained_total + zeroed_value + dropped totals.
struct FilterReport {
    int year = 0;
    std::vector<Removal> countries_dropped;
    std::vector<Removal> products_dropped;
    std::int64_t cells_zeroed = 0;
    Money input_total;
    Money retained_total;
    Money zeroed_value;
    Money dropped_product_value;
    Money dropped_country_value;
    double retained_trade_share = 1.0;
    /// Yearly cascade only: true when re-running the cascade on the output
    /// would change nothing (the cascade is a single pass, not a fixed point).
    bool stable = true;
    std::vector<std::string> steps;
    std::vector<std::string> warnings;
};

struct LoadOptions {
    // header-name mapping; keys: year/country/product/value for trade files
    std::map<std::string, std::string> columns;
    std::size_t max_errors = 100;
};

struct TradeLoadResult {
    std::vector<TradeRecord> records; // duplicates summed, sorted
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t inexact = 0; // rows whose value was rounded to the 1e-4 grain
    std::vector<std::string> diagnostics;
};

struct MetaLoadResult {
    MetaSeries series;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::vector<std::string> diagnostics;
};

/// Loads trade records from CSV. Duplicate (year,country,product) rows are
/// summed; rows with negative or non-numeric values are rejected with a
/// line-numbered diagnostic. More than `max_errors` bad rows is a hard failure.
TradeLoadResult load_trade_csv(const std::filesystem::path &path, Scheme scheme,
                               const LoadOptions &opts = {});

/// Loads country covariates. Empty cells become absent optionals; rows with
/// non-positive gdp_pc or population are rejected.
MetaLoadResult load_country_meta(const std::filesystem::path &path, const LoadOptions &opts = {});

/// Materializes the year's records as a matrix with lexicographic labels.
TradeMatrix build_matrix(const std::vector<TradeRecord> &records, int year);

/// Reference-year inputs for the static country filters.
struct ReferenceData {
    std::map<std::string, CountryMeta> meta;        // at population_reference_year
    std::map<std::string, Money> total_exports;     // at exports_reference_year
};

/// Removes countries that are explicitly excluded, lack reference-year
/// covariates, or fall below the population / total-exports thresholds.
std::pair<TradeMatrix, FilterReport> apply_static_filters(const TradeMatrix &m,
                                                          const ReferenceData &ref,
                                                          const FilterConfig &cfg);

/// The four time-dependent filters, applied in fixed order: cell rounding,
/// product global minimum, product zero share, country zero share; then any
/// all-zero rows/columns are removed. Throws data_error("degenerate_sample")
/// if nothing survives.
std::pair<TradeMatrix, FilterReport> apply_yearly_filters(const TradeMatrix &m,
                                                          const FilterConfig &cfg);

} // namespace ecomplex
