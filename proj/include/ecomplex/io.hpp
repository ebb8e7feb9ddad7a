#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ecomplex/econometrics.hpp"
#include "ecomplex/metrics.hpp"
#include "ecomplex/trade_data.hpp"

namespace ecomplex {

/// Writes via a temp file in the same directory, then renames; readers never
/// observe partial output. Parent directories are created as needed.
void atomic_write(const std::filesystem::path &path, const std::string &content);

/// label,value rows with "# config_hash=..." and "# metric=... axis=..."
/// header comments.
void write_metric_csv(const std::filesystem::path &path, const MetricVector &v,
                      const std::string &hash);
MetricVector read_metric_csv(const std::filesystem::path &path);

/// country,product,value triplets (exact decimal values, zero cells omitted).
void write_matrix_csv(const std::filesystem::path &path, const TradeMatrix &m,
                      const std::string &hash);

std::string filter_report_json(const FilterReport &r, const std::string &hash);
std::string diagnostics_json(const IterationDiagnostics &d, const std::string &hash);
std::string correlation_json(const CorrelationReport &r, const std::string &hash);
std::string regression_json(const RegressionResult &r, const std::string &hash);

void write_scatter_csv(const std::filesystem::path &path, const CorrelationReport &r,
                       const std::string &hash);

/// Journal-style column table: coefficient rows with SEs in parentheses and
/// significance stars (* 0.10, ** 0.05, *** 0.01, normal critical values).
std::string regression_table_text(const std::vector<RegressionResult> &columns,
                                  const std::string &hash);

struct Prediction {
    std::string country;
    double growth = 0.0;
    int rank = 0;
};

/// country,predicted_growth,rank — callers pass rows already ranked.
void write_predictions_csv(const std::filesystem::path &path,
                           const std::vector<Prediction> &rows, const std::string &hash);

} // namespace ecomplex
