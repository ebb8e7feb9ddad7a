#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ecomplex/trade_data.hpp"

namespace ecomplex {

enum class Axis { country, product };

std::string to_string(Axis a);

/// Solver bookkeeping attached to every metric result. Direct (non-iterative)
/// metrics report iterations=0 and converged=true.
struct IterationDiagnostics {
    std::size_t iterations = 0;
    double final_residual = 0.0;
    bool converged = true;
    double tolerance = 0.0;
    /// Fitness only: countries clamped at the fitness floor (values flowed
    /// to zero; rank information for the rest remains meaningful).
    std::vector<std::string> degenerate_entities;
    /// ECI/PCI only: the informative eigenvalue is not isolated, so the
    /// eigenvector is not unique; values are reported as all zeros.
    bool degenerate_spectrum = false;
    /// Rows/columns removed before solving because they were all-zero.
    std::vector<std::string> dropped_countries;
    std::vector<std::string> dropped_products;
    std::vector<std::string> warnings;
    /// When SolveOptions::trace is set: per-iteration deviation of the
    /// normalization invariant (|mean-1| for F/Q, |mean log| for ECI+/PCI+).
    std::vector<double> normalization_deviation;
};

/// Named per-country (or per-product) scores.
struct MetricVector {
    Axis axis = Axis::country;
    std::string metric_name;
    std::vector<std::string> labels;
    std::vector<double> values;
    IterationDiagnostics diagnostics;
};

struct SolveOptions {
    double tol = 1e-9;       // max absolute (log-)change per step
    std::size_t max_iter = 1000;
    bool trace = false;      // record per-iteration normalization deviations
};

/// Revealed comparative advantage; same shape and labels as the source.
struct RcaMatrix {
    std::vector<std::string> countries;
    std::vector<std::string> products;
    std::vector<double> values; // row-major

    double at(std::size_t c, std::size_t p) const { return values[c * products.size() + p]; }
};

/// M_cp: 1 where RCA >= 1.
struct BinaryMatrix {
    std::vector<std::string> countries;
    std::vector<std::string> products;
    std::vector<std::uint8_t> values; // row-major

    int at(std::size_t c, std::size_t p) const { return values[c * products.size() + p]; }
};

/// R_cp = X_cp * total / (row_c * col_p). Throws data_error naming the label
/// of any all-zero row or column.
RcaMatrix rca(const TradeMatrix &m);

/// Thresholds at 1.0, inclusive.
BinaryMatrix binarize(const RcaMatrix &r);

MetricVector diversity(const BinaryMatrix &m); // k_c, row sums
MetricVector ubiquity(const BinaryMatrix &m);  // k_p, column sums

/// Eigenvector metrics. ECI is the eigenvector of the country-country
/// averaging matrix for the second-largest eigenvalue, z-scored, with the
/// sign fixed so corr(ECI, diversity) >= 0; PCI averages ECI over each
/// product's exporters and is z-scored the same way. All-zero rows/columns
/// are dropped first and recorded. Throws data_error for fewer than 2
/// countries after dropping; a disconnected matrix only warns.
std::pair<MetricVector, MetricVector> eci_pci(const BinaryMatrix &m);

/// Fitness/Q fixed point: F~_c = sum_p M_cp Q_p, Q~_p = 1/sum_c (M_cp/F_c),
/// both mean-normalized every step, from all-ones initial conditions.
/// Countries whose fitness flows to zero are clamped at a small floor and
/// listed in degenerate_entities.
std::pair<MetricVector, MetricVector> fitness(const BinaryMatrix &m,
                                              const SolveOptions &opts = {});

/// ECI+: iteratively corrected total exports, geometric-mean-normalized each
/// step; the reported score subtracts the log of the country's summed
/// product-market shares. Natural logs.
MetricVector eci_plus(const TradeMatrix &m, const SolveOptions &opts = {});

/// PCI+: the product-side analogue. The reported score is
/// log(world trade in p, geometric-mean-normalized) - log(X_p^inf), so it is
/// invariant under a global rescaling of the input.
MetricVector pci_plus(const TradeMatrix &m, const SolveOptions &opts = {});

struct ScatterPoint {
    std::string label;
    double a = 0.0;
    double b = 0.0;
};

struct CorrelationReport {
    std::string metric_a;
    std::string metric_b;
    std::size_t n = 0;
    double pearson_r = 0.0;
    double r_squared = 0.0;
    double spearman_rho = 0.0;
    std::vector<ScatterPoint> scatter; // label-sorted pairs, for plotting
};

/// Statistics over the label intersection (must have >= 3 entries and both
/// vectors on the same axis).
CorrelationReport correlate(const MetricVector &a, const MetricVector &b);

} // namespace ecomplex
