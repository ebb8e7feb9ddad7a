#include "ecomplex/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <Eigen/Dense>

#include "ecomplex/errors.hpp"

namespace ecomplex {

std::string to_string(Axis a) { return a == Axis::country ? "country" : "product"; }

namespace {

constexpr double kFitnessFloor = 1e-13;
constexpr double kDegenerateGap = 1e-12;

// Population mean/SD z-scoring in place. Returns false when the values are
// (numerically) constant, in which case they are left untouched.
bool zscore(std::vector<double> &v) {
    const double n = static_cast<double>(v.size());
    double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double var = 0.0;
    for (double x : v)
        var += (x - mean) * (x - mean);
    double sd = std::sqrt(var / n);
    if (!(sd > kDegenerateGap))
        return false;
    for (double &x : v)
        x = (x - mean) / sd;
    return true;
}

double pearson(const std::vector<double> &a, const std::vector<double> &b) {
    const double n = static_cast<double>(a.size());
    double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (saa <= 0.0 || sbb <= 0.0)
        throw data_error("correlation undefined: zero variance");
    return sab / std::sqrt(saa * sbb);
}

// Binary matrix with all-zero rows/columns removed and the survivors held as
// adjacency lists (products per country and countries per product).
struct Pruned {
    std::vector<std::string> countries, products;
    std::vector<std::vector<std::uint32_t>> rows; // country -> product ids
    std::vector<std::vector<std::uint32_t>> cols; // product -> country ids
    std::vector<std::string> dropped_countries, dropped_products;
};

Pruned prune(const BinaryMatrix &m) {
    const std::size_t C = m.countries.size(), P = m.products.size();
    std::vector<char> row_ok(C, 0), col_ok(P, 0);
    for (std::size_t c = 0; c < C; ++c)
        for (std::size_t p = 0; p < P; ++p)
            if (m.at(c, p)) {
                row_ok[c] = 1;
                col_ok[p] = 1;
            }

    Pruned out;
    std::vector<std::uint32_t> cmap(C), pmap(P);
    for (std::size_t c = 0; c < C; ++c) {
        if (row_ok[c]) {
            cmap[c] = static_cast<std::uint32_t>(out.countries.size());
            out.countries.push_back(m.countries[c]);
        } else {
            out.dropped_countries.push_back(m.countries[c]);
        }
    }
    for (std::size_t p = 0; p < P; ++p) {
        if (col_ok[p]) {
            pmap[p] = static_cast<std::uint32_t>(out.products.size());
            out.products.push_back(m.products[p]);
        } else {
            out.dropped_products.push_back(m.products[p]);
        }
    }
    out.rows.resize(out.countries.size());
    out.cols.resize(out.products.size());
    for (std::size_t c = 0; c < C; ++c) {
        if (!row_ok[c])
            continue;
        for (std::size_t p = 0; p < P; ++p)
            if (col_ok[p] && m.at(c, p)) {
                out.rows[cmap[c]].push_back(pmap[p]);
                out.cols[pmap[p]].push_back(cmap[c]);
            }
    }
    return out;
}

// Number of connected components of the bipartite country-product graph.
std::size_t component_count(const Pruned &g) {
    const std::size_t n = g.countries.size() + g.products.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t c = 0; c < g.rows.size(); ++c)
        for (auto p : g.rows[c])
            parent[find(c)] = find(g.countries.size() + p);
    std::vector<char> seen(n, 0);
    std::size_t k = 0;
    for (std::size_t c = 0; c < g.countries.size(); ++c) {
        auto r = find(c);
        if (!seen[r]) {
            seen[r] = 1;
            ++k;
        }
    }
    return k;
}

void attach(IterationDiagnostics &d, const Pruned &g) {
    d.dropped_countries = g.dropped_countries;
    d.dropped_products = g.dropped_products;
}

} // namespace

RcaMatrix rca(const TradeMatrix &m) {
    const std::size_t C = m.n_countries(), P = m.n_products();
    std::vector<double> row(C), col(P);
    for (std::size_t c = 0; c < C; ++c) {
        row[c] = static_cast<double>(m.row_total(c).raw());
        if (row[c] <= 0.0)
            throw data_error("rca: all-zero row for country " + m.countries()[c]);
    }
    for (std::size_t p = 0; p < P; ++p) {
        col[p] = static_cast<double>(m.col_total(p).raw());
        if (col[p] <= 0.0)
            throw data_error("rca: all-zero column for product " + m.products()[p]);
    }
    const double total = static_cast<double>(m.total().raw());

    RcaMatrix r;
    r.countries = m.countries();
    r.products = m.products();
    r.values.resize(C * P);
    for (std::size_t c = 0; c < C; ++c)
        for (std::size_t p = 0; p < P; ++p)
            r.values[c * P + p] =
                (static_cast<double>(m.at(c, p).raw()) * total) / (row[c] * col[p]);
    return r;
}

BinaryMatrix binarize(const RcaMatrix &r) {
    BinaryMatrix m;
    m.countries = r.countries;
    m.products = r.products;
    m.values.resize(r.values.size());
    for (std::size_t i = 0; i < r.values.size(); ++i)
        m.values[i] = r.values[i] >= 1.0 ? 1 : 0;
    return m;
}

MetricVector diversity(const BinaryMatrix &m) {
    MetricVector out;
    out.axis = Axis::country;
    out.metric_name = "diversity";
    out.labels = m.countries;
    out.values.assign(m.countries.size(), 0.0);
    for (std::size_t c = 0; c < m.countries.size(); ++c)
        for (std::size_t p = 0; p < m.products.size(); ++p)
            out.values[c] += m.at(c, p);
    return out;
}

MetricVector ubiquity(const BinaryMatrix &m) {
    MetricVector out;
    out.axis = Axis::product;
    out.metric_name = "ubiquity";
    out.labels = m.products;
    out.values.assign(m.products.size(), 0.0);
    for (std::size_t c = 0; c < m.countries.size(); ++c)
        for (std::size_t p = 0; p < m.products.size(); ++p)
            out.values[p] += m.at(c, p);
    return out;
}

std::pair<MetricVector, MetricVector> eci_pci(const BinaryMatrix &m) {
    Pruned g = prune(m);
    const std::size_t C = g.countries.size(), P = g.products.size();
    if (C < 2)
        throw data_error("eci_pci: need at least 2 countries with exports");

    MetricVector eci, pci;
    eci.axis = Axis::country;
    eci.metric_name = "eci";
    eci.labels = g.countries;
    pci.axis = Axis::product;
    pci.metric_name = "pci";
    pci.labels = g.products;
    attach(eci.diagnostics, g);
    attach(pci.diagnostics, g);

    if (std::size_t k = component_count(g); k > 1) {
        std::string w = "disconnected matrix (" + std::to_string(k) +
                        " components); eigenvector basis within the top eigenspace is "
                        "arbitrary";
        eci.diagnostics.warnings.push_back(w);
        pci.diagnostics.warnings.push_back(w);
    }

    std::vector<double> kc(C), kp(P);
    for (std::size_t c = 0; c < C; ++c)
        kc[c] = static_cast<double>(g.rows[c].size());
    for (std::size_t p = 0; p < P; ++p)
        kp[p] = static_cast<double>(g.cols[p].size());

    // Symmetrized form of the row-stochastic averaging matrix: with
    // S = D_c^{-1/2} M D_p^{-1/2}, A = S S^T is similar to
    // M~ = D_c^{-1} M D_p^{-1} M^T, so A's spectrum is M~'s and
    // v = D_c^{-1/2} u maps eigenvectors back.
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(C),
                                              static_cast<Eigen::Index>(P));
    for (std::size_t c = 0; c < C; ++c)
        for (auto p : g.rows[c])
            S(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(p)) =
                1.0 / std::sqrt(kc[c] * kp[p]);
    Eigen::MatrixXd A = S * S.transpose();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    if (es.info() != Eigen::Success)
        throw data_error("eci_pci: eigendecomposition failed");
    const auto &ev = es.eigenvalues(); // ascending
    const Eigen::Index second = static_cast<Eigen::Index>(C) - 2;
    const double lambda2 = ev(second);

    bool degenerate = lambda2 <= kDegenerateGap; // no informative direction
    if (C >= 3 && lambda2 - ev(second - 1) <= kDegenerateGap)
        degenerate = true; // eigenvector of lambda2 not unique

    std::vector<double> v(C, 0.0);
    if (!degenerate) {
        for (std::size_t c = 0; c < C; ++c)
            v[c] = es.eigenvectors()(static_cast<Eigen::Index>(c), second) / std::sqrt(kc[c]);

        // Residual of the eigenpair on the original (unsymmetrized) matrix,
        // before standardization shifts the vector off the eigenspace.
        double resid = 0.0;
        for (std::size_t c = 0; c < C; ++c) {
            double acc = 0.0;
            for (auto p : g.rows[c])
                for (auto c2 : g.cols[p])
                    acc += v[c2] / (kc[c] * kp[p]);
            resid = std::max(resid, std::abs(acc - lambda2 * v[c]));
        }
        eci.diagnostics.final_residual = resid;

        if (!zscore(v)) {
            degenerate = true; // constant eigenvector after mapping back
            std::fill(v.begin(), v.end(), 0.0);
            eci.diagnostics.final_residual = 0.0;
        }
    }

    if (!degenerate) {
        // Sign convention: corr(ECI, diversity) >= 0; when the correlation is
        // exactly zero, the lexicographically smallest country with a nonzero
        // score gets the nonnegative value.
        double cov = 0.0, mean_k = std::accumulate(kc.begin(), kc.end(), 0.0) / C;
        for (std::size_t c = 0; c < C; ++c)
            cov += v[c] * (kc[c] - mean_k);
        bool flip = false;
        if (cov < -kDegenerateGap) {
            flip = true;
        } else if (cov <= kDegenerateGap) {
            std::vector<std::size_t> order(C);
            std::iota(order.begin(), order.end(), 0);
            std::sort(order.begin(), order.end(),
                      [&](std::size_t a, std::size_t b) { return g.countries[a] < g.countries[b]; });
            for (auto c : order)
                if (std::abs(v[c]) > kDegenerateGap) {
                    flip = v[c] < 0.0;
                    break;
                }
        }
        if (flip)
            for (double &x : v)
                x = -x;
    }

    eci.values = v;
    eci.diagnostics.degenerate_spectrum = degenerate;
    eci.diagnostics.tolerance = 0.0;

    pci.values.assign(P, 0.0);
    pci.diagnostics.degenerate_spectrum = degenerate;
    if (!degenerate) {
        for (std::size_t p = 0; p < P; ++p) {
            double acc = 0.0;
            for (auto c : g.cols[p])
                acc += v[c];
            pci.values[p] = acc / kp[p];
        }
        if (!zscore(pci.values)) {
            std::fill(pci.values.begin(), pci.values.end(), 0.0);
            pci.diagnostics.degenerate_spectrum = true;
            pci.diagnostics.warnings.push_back("pci constant across products");
        }
    }
    return {std::move(eci), std::move(pci)};
}

std::pair<MetricVector, MetricVector> fitness(const BinaryMatrix &m, const SolveOptions &opts) {
    Pruned g = prune(m);
    const std::size_t C = g.countries.size(), P = g.products.size();
    if (C == 0 || P == 0)
        throw data_error("fitness: matrix has no nonzero entries");

    std::vector<double> F(C, 1.0), Q(P, 1.0), Fn(C), Qn(P);

    // Stall bookkeeping: a country whose fitness vanishes in the limit decays
    // harmonically (1/F grows by a near-constant amount per window), so the
    // iteration can never reach `tol` on its own. A country showing that
    // signature at two consecutive checkpoints is pinned to the floor from
    // then on; the rest of the system then converges normally. The two-window
    // requirement makes the trigger conservative: an ordinary linearly
    // convergent country has window increments of 1/F that decay
    // geometrically, so it cannot sustain the signature.
    constexpr std::size_t kWindow = 200;
    std::vector<double> w_prev(C, 1.0), dw_prev(C, 0.0), f_prev(C, 1.0);
    std::vector<int> strikes(C, 0);
    std::vector<char> pinned(C, 0);
    bool any_pinned = false;

    MetricVector fv, qv;
    auto &diag = fv.diagnostics;
    diag.tolerance = opts.tol;
    double resid = 0.0;
    std::size_t iter = 0;

    while (iter < opts.max_iter) {
        ++iter;
        for (std::size_t c = 0; c < C; ++c) {
            double acc = 0.0;
            for (auto p : g.rows[c])
                acc += Q[p];
            Fn[c] = acc;
        }
        for (std::size_t p = 0; p < P; ++p) {
            double acc = 0.0;
            for (auto c : g.cols[p])
                acc += 1.0 / F[c];
            Qn[p] = 1.0 / acc;
        }
        double fm = std::accumulate(Fn.begin(), Fn.end(), 0.0) / static_cast<double>(C);
        double qm = std::accumulate(Qn.begin(), Qn.end(), 0.0) / static_cast<double>(P);
        for (double &x : Fn)
            x /= fm;
        for (double &x : Qn)
            x /= qm;
        for (std::size_t c = 0; c < C; ++c)
            if (pinned[c] || Fn[c] < kFitnessFloor)
                Fn[c] = kFitnessFloor;
        if (any_pinned) {
            // restore mean(F)=1 exactly, scaling only the unpinned entries
            double floor_sum = 0.0, rest = 0.0;
            for (double x : Fn)
                (x <= kFitnessFloor ? floor_sum : rest) += x;
            if (rest > 0.0) {
                double s = (static_cast<double>(C) - floor_sum) / rest;
                for (double &x : Fn)
                    if (x > kFitnessFloor)
                        x *= s;
            }
        }

        resid = 0.0;
        for (std::size_t c = 0; c < C; ++c)
            resid = std::max(resid, std::abs(Fn[c] - F[c]));
        for (std::size_t p = 0; p < P; ++p)
            resid = std::max(resid, std::abs(Qn[p] - Q[p]));

        if (opts.trace) {
            double df = std::abs(std::accumulate(Fn.begin(), Fn.end(), 0.0) /
                                     static_cast<double>(C) -
                                 1.0);
            double dq = std::abs(std::accumulate(Qn.begin(), Qn.end(), 0.0) /
                                     static_cast<double>(P) -
                                 1.0);
            diag.normalization_deviation.push_back(std::max(df, dq));
        }

        F.swap(Fn);
        Q.swap(Qn);
        if (resid <= opts.tol)
            break;

        if (iter % kWindow == 0) {
            for (std::size_t c = 0; c < C; ++c) {
                if (pinned[c])
                    continue;
                double dw = 1.0 / F[c] - w_prev[c];
                bool vanishing =
                    F[c] < 0.1 && F[c] < f_prev[c] && dw >= std::max(1.0, 0.5 * dw_prev[c]);
                strikes[c] = vanishing ? strikes[c] + 1 : 0;
                if (strikes[c] >= 2) {
                    pinned[c] = 1;
                    any_pinned = true;
                }
                dw_prev[c] = dw;
                w_prev[c] = 1.0 / F[c];
                f_prev[c] = F[c];
            }
        }
    }

    diag.iterations = iter;
    diag.final_residual = resid;
    diag.converged = resid <= opts.tol;
    for (std::size_t c = 0; c < C; ++c)
        if (F[c] <= kFitnessFloor * (1.0 + 1e-9))
            diag.degenerate_entities.push_back(g.countries[c]);
    attach(diag, g);

    fv.axis = Axis::country;
    fv.metric_name = "fitness";
    fv.labels = g.countries;
    fv.values = F;

    qv.axis = Axis::product;
    qv.metric_name = "q";
    qv.labels = g.products;
    qv.values = Q;
    qv.diagnostics = diag;
    return {std::move(fv), std::move(qv)};
}

namespace {

// Dense positive-entry view of a trade matrix for the ECI+/PCI+ maps.
struct DenseTrade {
    std::size_t C = 0, P = 0;
    std::vector<double> x;        // row-major X_cp
    std::vector<double> row, col; // X_c, X_p totals

    double at(std::size_t c, std::size_t p) const { return x[c * P + p]; }
};

DenseTrade to_dense(const TradeMatrix &m, const char *who) {
    DenseTrade d;
    d.C = m.n_countries();
    d.P = m.n_products();
    d.x.resize(d.C * d.P);
    d.row.assign(d.C, 0.0);
    d.col.assign(d.P, 0.0);
    for (std::size_t c = 0; c < d.C; ++c)
        for (std::size_t p = 0; p < d.P; ++p) {
            double v = m.at(c, p).dollars();
            d.x[c * d.P + p] = v;
            d.row[c] += v;
            d.col[p] += v;
        }
    for (std::size_t c = 0; c < d.C; ++c)
        if (!(d.row[c] > 0.0))
            throw data_error(std::string(who) + ": all-zero row for country " +
                             m.countries()[c]);
    for (std::size_t p = 0; p < d.P; ++p)
        if (!(d.col[p] > 0.0))
            throw data_error(std::string(who) + ": all-zero column for product " +
                             m.products()[p]);
    return d;
}

// Subtracts the mean of logs (geometric-mean normalization in log space) and
// returns the absolute residual mean afterwards.
double lognorm(std::vector<double> &logs) {
    double mu = std::accumulate(logs.begin(), logs.end(), 0.0) /
                static_cast<double>(logs.size());
    for (double &x : logs)
        x -= mu;
    return std::abs(std::accumulate(logs.begin(), logs.end(), 0.0) /
                    static_cast<double>(logs.size()));
}

} // namespace

MetricVector eci_plus(const TradeMatrix &m, const SolveOptions &opts) {
    DenseTrade d = to_dense(m, "eci_plus");
    const std::size_t C = d.C, P = d.P;

    MetricVector out;
    out.axis = Axis::country;
    out.metric_name = "eci_plus";
    out.labels = m.countries();
    out.diagnostics.tolerance = opts.tol;

    std::vector<double> L(C); // log X_c, geometric mean 1
    for (std::size_t c = 0; c < C; ++c)
        L[c] = std::log(d.row[c]);
    double dev = lognorm(L);
    if (opts.trace)
        out.diagnostics.normalization_deviation.push_back(dev);

    std::vector<double> X(C), share(P), Lnew(C);
    double resid = 0.0;
    std::size_t iter = 0;
    while (iter < opts.max_iter) {
        ++iter;
        for (std::size_t c = 0; c < C; ++c)
            X[c] = std::exp(L[c]);
        for (std::size_t p = 0; p < P; ++p)
            share[p] = 0.0;
        for (std::size_t c = 0; c < C; ++c) {
            const double inv = 1.0 / X[c];
            const double *xr = &d.x[c * P];
            for (std::size_t p = 0; p < P; ++p)
                share[p] += xr[p] * inv;
        }
        for (std::size_t p = 0; p < P; ++p)
            share[p] = 1.0 / share[p];
        for (std::size_t c = 0; c < C; ++c) {
            double acc = 0.0;
            const double *xr = &d.x[c * P];
            for (std::size_t p = 0; p < P; ++p)
                acc += xr[p] * share[p];
            Lnew[c] = std::log(acc);
        }
        dev = lognorm(Lnew);
        if (opts.trace)
            out.diagnostics.normalization_deviation.push_back(dev);
        resid = 0.0;
        for (std::size_t c = 0; c < C; ++c)
            resid = std::max(resid, std::abs(Lnew[c] - L[c]));
        L.swap(Lnew);
        if (resid <= opts.tol)
            break;
    }

    out.diagnostics.iterations = iter;
    out.diagnostics.final_residual = resid;
    out.diagnostics.converged = resid <= opts.tol;

    out.values.resize(C);
    for (std::size_t c = 0; c < C; ++c) {
        double corr = 0.0;
        const double *xr = &d.x[c * P];
        for (std::size_t p = 0; p < P; ++p)
            corr += xr[p] / d.col[p];
        out.values[c] = L[c] - std::log(corr);
    }
    return out;
}

MetricVector pci_plus(const TradeMatrix &m, const SolveOptions &opts) {
    DenseTrade d = to_dense(m, "pci_plus");
    const std::size_t C = d.C, P = d.P;

    MetricVector out;
    out.axis = Axis::product;
    out.metric_name = "pci_plus";
    out.labels = m.products();
    out.diagnostics.tolerance = opts.tol;

    // initial country sizes X_c^0, geometric mean 1
    std::vector<double> lc(C);
    for (std::size_t c = 0; c < C; ++c)
        lc[c] = std::log(d.row[c]);
    lognorm(lc);

    std::vector<double> L(P); // log X_p
    for (std::size_t p = 0; p < P; ++p)
        L[p] = 0.0;
    for (std::size_t c = 0; c < C; ++c) {
        const double inv = std::exp(-lc[c]);
        const double *xr = &d.x[c * P];
        for (std::size_t p = 0; p < P; ++p)
            L[p] += xr[p] * inv;
    }
    for (std::size_t p = 0; p < P; ++p)
        L[p] = std::log(L[p]);
    double dev = lognorm(L);
    if (opts.trace)
        out.diagnostics.normalization_deviation.push_back(dev);

    std::vector<double> Xp(P), Lnew(P);
    double resid = 0.0;
    std::size_t iter = 0;
    while (iter < opts.max_iter) {
        ++iter;
        for (std::size_t p = 0; p < P; ++p) {
            Xp[p] = std::exp(-L[p]); // reciprocal of the current iterate
            Lnew[p] = 0.0;
        }
        for (std::size_t c = 0; c < C; ++c) {
            const double *xr = &d.x[c * P];
            double denom = 0.0;
            for (std::size_t p = 0; p < P; ++p)
                denom += xr[p] * Xp[p];
            const double inv = 1.0 / denom;
            for (std::size_t p = 0; p < P; ++p)
                Lnew[p] += xr[p] * inv;
        }
        for (std::size_t p = 0; p < P; ++p)
            Lnew[p] = std::log(Lnew[p]);
        dev = lognorm(Lnew);
        if (opts.trace)
            out.diagnostics.normalization_deviation.push_back(dev);
        resid = 0.0;
        for (std::size_t p = 0; p < P; ++p)
            resid = std::max(resid, std::abs(Lnew[p] - L[p]));
        L.swap(Lnew);
        if (resid <= opts.tol)
            break;
    }

    out.diagnostics.iterations = iter;
    out.diagnostics.final_residual = resid;
    out.diagnostics.converged = resid <= opts.tol;

    // Score against world trade per product, geometric-mean-normalized so the
    // result is invariant under a global rescaling of X.
    std::vector<double> lw(P);
    for (std::size_t p = 0; p < P; ++p)
        lw[p] = std::log(d.col[p]);
    lognorm(lw);
    out.values.resize(P);
    for (std::size_t p = 0; p < P; ++p)
        out.values[p] = lw[p] - L[p];
    return out;
}

CorrelationReport correlate(const MetricVector &a, const MetricVector &b) {
    if (a.axis != b.axis)
        throw data_error("correlate: metrics are on different axes");

    std::map<std::string, double> bm;
    for (std::size_t i = 0; i < b.labels.size(); ++i)
        bm[b.labels[i]] = b.values[i];

    CorrelationReport rep;
    rep.metric_a = a.metric_name;
    rep.metric_b = b.metric_name;
    for (std::size_t i = 0; i < a.labels.size(); ++i) {
        auto it = bm.find(a.labels[i]);
        if (it != bm.end())
            rep.scatter.push_back({a.labels[i], a.values[i], it->second});
    }
    std::sort(rep.scatter.begin(), rep.scatter.end(),
              [](const ScatterPoint &x, const ScatterPoint &y) { return x.label < y.label; });
    rep.n = rep.scatter.size();
    if (rep.n < 3)
        throw data_error("correlate: fewer than 3 shared labels");

    std::vector<double> va, vb;
    va.reserve(rep.n);
    vb.reserve(rep.n);
    for (const auto &s : rep.scatter) {
        va.push_back(s.a);
        vb.push_back(s.b);
    }
    rep.pearson_r = pearson(va, vb);
    rep.r_squared = rep.pearson_r * rep.pearson_r;

    // Spearman: Pearson on average ranks (ties share the mean rank).
    auto ranks = [](const std::vector<double> &v) {
        std::vector<std::size_t> order(v.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
        std::vector<double> r(v.size());
        std::size_t i = 0;
        while (i < order.size()) {
            std::size_t j = i;
            while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]])
                ++j;
            double mean_rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
            for (std::size_t k = i; k <= j; ++k)
                r[order[k]] = mean_rank;
            i = j + 1;
        }
        return r;
    };
    rep.spearman_rho = pearson(ranks(va), ranks(vb));
    return rep;
}

} // namespace ecomplex
