#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "f2p/block.hpp"
#include "f2p/dense_eig.hpp"
#include "f2p/errors.hpp"
#include "f2p/filter.hpp"
#include "f2p/metrics.hpp"
#include "f2p/qr.hpp"
#include "f2p/random.hpp"
#include "f2p/sparse.hpp"

namespace f2p {

/// Computed eigenpairs, eigenvalues in decreasing order. residuals holds the
/// scaled relative residual ||A x - lambda x|| / (rho ||x||) of each pair
/// (rho = 1 for the plain power subspace iteration). Eigenvector columns
/// have unit norm with the largest-magnitude entry made positive.
struct EigResult {
    std::vector<double> values;
    Block vectors;
    std::vector<double> residuals;
    bool converged = false;

    int count() const { return static_cast<int>(values.size()); }
    bool empty() const { return values.empty(); }
};

/// Per-outer-iteration instrumentation. err_hist entries are -1 when no pair
/// qualified that iteration; num_ay_hist counts (A - sigma I) Y products;
/// eigm_hist is the sliding shift-estimate window (length <= num_eigm).
struct RunHistory {
    std::vector<double> err_hist;
    std::vector<int> num_ay_hist;
    std::vector<double> eigm_hist;
};

/// Knobs of the F2P driver (and of the restricted power subspace iteration
/// inside it).
struct F2PConfig {
    int m = 0;             // block width
    int num_cmp = 0;       // pairs tracked per inner iteration (<= m)
    int num_out = 0;       // pairs returned (<= num_cmp)
    int num_eigm = 5;      // shift-window length
    double min_eig = -std::numeric_limits<double>::max();  // lower spectrum estimate
    int max_it = 50;       // outer iterations
    int sub_max_it = 100;  // inner power iterations per outer iteration
    double sub_tol = 0.1;  // inner acceptance tolerance
    std::uint64_t seed = 1;

    void validate() const {
        if (m < 1) throw ConfigError("config: m must be >= 1");
        if (num_out < 1 || num_out > num_cmp || num_cmp > m)
            throw ConfigError("config: need 1 <= num_out <= num_cmp <= m");
        if (max_it < 1) throw ConfigError("config: max_it must be >= 1");
        if (sub_max_it < 1) throw ConfigError("config: sub_max_it must be >= 1");
        if (num_eigm < 1) throw ConfigError("config: num_eigm must be >= 1");
        if (!(sub_tol > 0.0)) throw ConfigError("config: sub_tol must be positive");
    }
};

/// Test/diagnostic hook: called once per Rayleigh-Ritz pass with the
/// iteration number and the ascending Ritz values.
using RitzObserver = std::function<void(int iter, std::span<const double> ritz)>;

/// Diagnostic hook of the restricted power iteration: accepted-pair count
/// and max accepted residual of each iteration, before the exit tests run.
using PsiProgressObserver = std::function<void(int iter, int count, double err)>;

/// Eigenpairs plus instrumentation returned by the drivers.
struct DriverOutcome {
    EigResult result;
    RunHistory history;
    double rho = 1.0;
    FilterStats filter_stats;
};

namespace detail {

inline const std::uint64_t kDefaultRhoSeed = rho_seed(0xf2b5eedULL);

/// Unit-normalizes a column and makes its largest-magnitude entry positive.
inline void normalize_sign_fix(std::span<double> col) {
    double nrm = norm2(col);
    if (nrm == 0.0) return;
    int imax = 0;
    for (int i = 1; i < static_cast<int>(col.size()); ++i)
        if (std::abs(col[i]) > std::abs(col[imax])) imax = i;
    if (col[imax] < 0.0) nrm = -nrm;
    for (double& v : col) v /= nrm;
}

/// ||A x - lambda x|| / (rho ||x||).
inline double scaled_residual(const SparseSymMatrix& a, std::span<const double> x,
                              double lambda, double rho) {
    std::vector<double> ax = a.multiply(x);
    double num = 0.0;
    for (std::size_t i = 0; i < ax.size(); ++i) {
        const double d = ax[i] - lambda * x[i];
        num += d * d;
    }
    return std::sqrt(num) / (rho * norm2(x));
}

/// x = Y v for one small coefficient column.
inline std::vector<double> basis_times(const Block& y, std::span<const double> v) {
    std::vector<double> x(y.rows(), 0.0);
    for (int l = 0; l < y.cols(); ++l) {
        const double c = v[l];
        if (c == 0.0) continue;
        const double* yl = y.col(l);
        for (int i = 0; i < y.rows(); ++i) x[i] += c * yl[i];
    }
    return x;
}

struct PairList {
    std::vector<double> values;
    std::vector<std::vector<double>> cols;
    std::vector<double> errs;

    void push(double v, std::vector<double> col, double err) {
        values.push_back(v);
        cols.push_back(std::move(col));
        errs.push_back(err);
    }
    int count() const { return static_cast<int>(values.size()); }

    EigResult to_result(int n, bool converged) const {
        EigResult r;
        r.values = values;
        r.residuals = errs;
        r.vectors = Block(n, count());
        for (int j = 0; j < count(); ++j) r.vectors.set_col(j, cols[j]);
        r.converged = converged;
        return r;
    }
    EigResult to_result_truncated(int n, int leng, bool converged) const {
        PairList t;
        t.values.assign(values.begin(), values.begin() + leng);
        t.cols.assign(cols.begin(), cols.begin() + leng);
        t.errs.assign(errs.begin(), errs.begin() + leng);
        return t.to_result(n, converged);
    }
};

}  // namespace detail

/// Outcome of the restricted power subspace iteration: the accepted pairs,
/// the iteration basis for the next correction, the (rollback-adjusted)
/// iteration count, and the updated shift-estimate window.
struct PsiOutcome {
    EigResult result;
    Block y;
    int iter = 0;
    std::vector<double> eigm_hist;
};

/// Power subspace iteration for the first num_cmp largest eigenvalues of A
/// inside (a, b), applied to a block Y whose span approximately lies in the
/// target eigenspace. Per iteration: Rayleigh-Ritz, greedy extraction of the
/// in-interval Ritz values in decreasing order (accepting those with scaled
/// residual < tol among the first num_cmp hits), then the exit tests that
/// detect loss of the subspace condition. When a test detects degradation
/// the previous iteration's state is restored (snapshot rollback) and the
/// reported iteration count is decremented. Otherwise the shift
/// sigma = (mean of the eigm window + a1)/2 is applied: Y <- (A - sigma I) Y,
/// followed by re-orthonormalization.
inline PsiOutcome psi_restricted(const SparseSymMatrix& a, Block y, int num_cmp,
                                 int num_eigm, double min_eig, double lo, double hi,
                                 double rho, std::vector<double> eigm_hist, int max_it,
                                 double tol, const RitzObserver& observer = {},
                                 const PsiProgressObserver& progress = {}) {
    const int n = a.rows(), m = y.cols();
    const double a1 = std::min(std::max(lo, min_eig), hi);

    struct Snapshot {
        detail::PairList pairs;
        std::vector<double> eigm_hist;
        Block y;
        double err = 0.0;
        int count = 0;
    };
    Snapshot snap;
    int count0 = -1;
    double err0 = std::numeric_limits<double>::infinity();

    y = qr_orthonormalize(y);
    detail::PairList pairs;
    int performed = 0;

    for (int iter = 1; iter <= max_it; ++iter) {
        performed = iter;
        const Block ay = a.multiply(y);
        const Block ahat = transpose_times(y, ay);
        const DenseEig eig = dense_sym_eig(ahat);
        if (observer) observer(iter, eig.values);

        pairs = detail::PairList{};
        std::vector<double> vals = eig.values;
        double err = -1.0;
        int count = 0, count1 = 0;
        double eigm = std::numeric_limits<double>::infinity();
        for (int i = 0; i < m; ++i) {
            int i0 = 0;
            for (int k = 1; k < m; ++k)
                if (vals[k] > vals[i0]) i0 = k;  // ties: lowest index wins
            if (vals[i0] > lo && vals[i0] < hi) {
                ++count1;
                if (count1 <= num_cmp) {
                    std::vector<double> x = detail::basis_times(y, eig.vectors.col_span(i0));
                    const double erri = detail::scaled_residual(a, x, vals[i0], rho);
                    if (erri < tol) {
                        ++count;
                        detail::normalize_sign_fix(x);
                        pairs.push(vals[i0], std::move(x), erri);
                        err = std::max(err, erri);
                    }
                }
                eigm = std::min(eigm, vals[i0]);
            }
            vals[i0] = lo - 1.0;
        }
        if (progress) progress(iter, count, err);

        if (count == count0) {
            if (count == 0) break;
            if (err > err0) {
                pairs = snap.pairs;
                eigm_hist = snap.eigm_hist;
                y = snap.y;
                performed = iter - 1;
                break;
            }
        }
        if (count < count0) {
            pairs = snap.pairs;
            eigm_hist = snap.eigm_hist;
            y = snap.y;
            performed = iter - 1;
            break;
        }
        if (count1 == 0 || max_it == 1) break;

        snap = {pairs, eigm_hist, y, err, count};
        err0 = err;
        count0 = count;

        eigm_hist.push_back(eigm);
        if (static_cast<int>(eigm_hist.size()) > num_eigm)
            eigm_hist.erase(eigm_hist.begin());
        double mean = 0.0;
        for (double v : eigm_hist) mean += v;
        mean /= static_cast<double>(eigm_hist.size());
        const double sigma = 0.5 * (mean + a1);
        y = a.multiply_shifted(y, sigma);
        y = qr_orthonormalize(y);
    }

    PsiOutcome out;
    out.result = pairs.to_result(n, pairs.count() > 0);
    out.y = std::move(y);
    out.iter = performed;
    out.eigm_hist = std::move(eigm_hist);
    return out;
}

/// Plain power subspace iteration toward the m dominant eigenpairs:
/// Rayleigh-Ritz on the current basis, residual check over all m pairs
/// (unscaled), then Y <- A Y and re-orthonormalization. Returns the last
/// iterate's pairs sorted by decreasing eigenvalue; converged reports
/// whether the residual test passed within max_it.
inline DriverOutcome psi_simple(const SparseSymMatrix& a, Block y, int max_it, double tol) {
    const int n = a.rows(), m = y.cols();
    y = qr_orthonormalize(y);
    DriverOutcome out;
    for (int iter = 1; iter <= max_it; ++iter) {
        const Block ay = a.multiply(y);
        const Block ahat = transpose_times(y, ay);
        const DenseEig eig = dense_sym_eig(ahat);

        detail::PairList pairs;
        for (int i = m - 1; i >= 0; --i) {  // descending eigenvalues
            std::vector<double> x = detail::basis_times(y, eig.vectors.col_span(i));
            const double erri = detail::scaled_residual(a, x, eig.values[i], 1.0);
            detail::normalize_sign_fix(x);
            pairs.push(eig.values[i], std::move(x), erri);
        }
        const double tau = *std::max_element(pairs.errs.begin(), pairs.errs.end());
        out.history.err_hist.push_back(tau);
        out.result = pairs.to_result(n, tau < tol);
        if (tau < tol) return out;
        if (iter == max_it) break;
        y = qr_orthonormalize(a.multiply(y));
        out.history.num_ay_hist.push_back(1);
    }
    return out;
}

/// FEAST subspace iteration: filter the block through the single contour,
/// Rayleigh-Ritz on the generalized pencil (ZᵀAZ, ZᵀZ), replace Y by the
/// Ritz vectors, and stop when the scaled residual over the in-interval
/// pairs drops below tol. An ill-conditioned Gram matrix is retried once per
/// iteration by re-orthonormalizing Z (which makes the Gram the identity);
/// if the retry fails too, GramFailure is thrown. On max_it exhaustion the
/// best iterate (smallest defined residual) is returned, converged = false.
inline DriverOutcome feast(const SparseSymMatrix& a, Block y, double lo, double hi,
                           const QuadratureRule& rule, int max_it, double tol,
                           const SolverOptions& solver, double rho = 0.0,
                           const RitzObserver& observer = {}) {
    const int n = a.rows(), m = y.cols();
    const Contour gamma = make_single_contour(lo, hi, rule);
    DriverOutcome out;
    out.rho = rho > 0.0 ? rho : scale_factor(a, detail::kDefaultRhoSeed);

    detail::PairList best;
    double err0 = std::numeric_limits<double>::infinity();
    for (int iter = 1; iter <= max_it; ++iter) {
        Block z = apply_filter(a, y, gamma, solver, &out.filter_stats);
        const Block az = a.multiply(z);
        Block ahat = transpose_times(z, az);
        DenseEig eig;
        try {
            const Block bhat = transpose_times(z, z);
            eig = dense_gen_sym_eig(ahat, bhat);
        } catch (const IllConditionedGram&) {
            try {
                z = qr_orthonormalize(z);
            } catch (const RankDeficient& rd) {
                throw GramFailure("feast: Gram retry failed at iteration " +
                                  std::to_string(iter) + ": " + rd.what());
            }
            ahat = transpose_times(z, a.multiply(z));
            eig = dense_sym_eig(ahat);
        }
        if (observer) observer(iter, eig.values);
        const Block x = times_small(z, eig.vectors);
        y = x;

        detail::PairList pairs;
        double err = -1.0;
        for (int i = m - 1; i >= 0; --i) {
            if (!(eig.values[i] > lo && eig.values[i] < hi)) continue;
            std::vector<double> col(x.col(i), x.col(i) + n);
            const double erri = detail::scaled_residual(a, col, eig.values[i], out.rho);
            detail::normalize_sign_fix(col);
            pairs.push(eig.values[i], std::move(col), erri);
            err = std::max(err, erri);
        }
        out.history.err_hist.push_back(err);
        out.history.num_ay_hist.push_back(0);
        if (err != -1.0 && err < err0) {
            best = pairs;
            err0 = err;
        }
        if (err != -1.0 && err < tol) {
            out.result = pairs.to_result(n, true);
            return out;
        }
    }
    out.result = best.to_result(n, false);
    return out;
}

/// FEAST with the two-circle corrector: filter through Gamma_L then Gamma_R,
/// QR-orthonormalize (so the projected problem is standard), Rayleigh-Ritz,
/// and the same stopping rule as feast. A rank-deficient filtered block
/// surfaces as RankDeficient annotated with the iteration index.
inline DriverOutcome feast2(const SparseSymMatrix& a, Block y, const IntervalSpec& spec,
                            const QuadratureRule& rule, int max_it, double tol,
                            const SolverOptions& solver, double rho = 0.0,
                            const RitzObserver& observer = {}) {
    const int n = a.rows(), m = y.cols();
    const auto [left, right] = make_pair_contours(spec, rule);
    DriverOutcome out;
    out.rho = rho > 0.0 ? rho : scale_factor(a, detail::kDefaultRhoSeed);

    detail::PairList best;
    double err0 = std::numeric_limits<double>::infinity();
    for (int iter = 1; iter <= max_it; ++iter) {
        Block z = apply_filter_pair(a, y, left, right, solver, &out.filter_stats);
        Block q;
        try {
            q = qr_orthonormalize(z);
        } catch (const RankDeficient& rd) {
            throw RankDeficient("feast2: filtered block rank-deficient at iteration " +
                                    std::to_string(iter) + ": " + rd.what(),
                                rd.column);
        }
        y = q;
        const Block ahat = transpose_times(q, a.multiply(q));
        const DenseEig eig = dense_sym_eig(ahat);
        if (observer) observer(iter, eig.values);
        const Block x = times_small(q, eig.vectors);

        detail::PairList pairs;
        double err = -1.0;
        for (int i = m - 1; i >= 0; --i) {
            if (!(eig.values[i] > spec.a && eig.values[i] < spec.b)) continue;
            std::vector<double> col(x.col(i), x.col(i) + n);
            const double erri = detail::scaled_residual(a, col, eig.values[i], out.rho);
            detail::normalize_sign_fix(col);
            pairs.push(eig.values[i], std::move(col), erri);
            err = std::max(err, erri);
        }
        out.history.err_hist.push_back(err);
        out.history.num_ay_hist.push_back(0);
        if (err != -1.0 && err < err0) {
            best = pairs;
            err0 = err;
        }
        if (err != -1.0 && err < tol) {
            out.result = pairs.to_result(n, true);
            return out;
        }
    }
    out.result = best.to_result(n, false);
    return out;
}

/// The combined FEAST-power subspace iteration with two contour integrations
/// per outer iteration. Each outer step corrects the basis with the
/// two-circle filter, runs the restricted power subspace iteration on the
/// corrected block, and keeps the output with the smallest maximum residual
/// over the first num_out pairs. Runs all max_it outer iterations; the
/// result is empty only if no iteration produced an accepted pair.
inline DriverOutcome f2p(const SparseSymMatrix& a, const F2PConfig& cfg,
                         const IntervalSpec& spec, const QuadratureRule& rule,
                         const SolverOptions& solver, const RitzObserver& observer = {}) {
    cfg.validate();
    const int n = a.rows();
    const auto [left, right] = make_pair_contours(spec, rule);

    DriverOutcome out;
    out.rho = scale_factor(a, rho_seed(cfg.seed));
    Block y = random_block(n, cfg.m, cfg.seed);
    std::vector<double> eigm_hist;

    detail::PairList best;
    int best_leng = 0;
    double err0 = std::numeric_limits<double>::infinity();
    for (int iter = 1; iter <= cfg.max_it; ++iter) {
        Block z = apply_filter_pair(a, y, left, right, solver, &out.filter_stats);
        RitzObserver sub_observer;
        if (observer) sub_observer = [&](int, std::span<const double> ritz) {
            observer(iter, ritz);
        };
        PsiOutcome psi =
            psi_restricted(a, std::move(z), cfg.num_cmp, cfg.num_eigm, cfg.min_eig, spec.a,
                           spec.b, out.rho, std::move(eigm_hist), cfg.sub_max_it,
                           cfg.sub_tol, sub_observer);
        y = std::move(psi.y);
        eigm_hist = std::move(psi.eigm_hist);
        out.history.num_ay_hist.push_back(psi.iter - 1);

        const int leng = std::min(cfg.num_out, psi.result.count());
        double err = -1.0;
        for (int i = 0; i < leng; ++i) err = std::max(err, psi.result.residuals[i]);
        out.history.err_hist.push_back(err);
        if (err != -1.0 && err < err0) {
            best = detail::PairList{};
            for (int i = 0; i < leng; ++i) {
                best.push(psi.result.values[i],
                          std::vector<double>(psi.result.vectors.col(i),
                                              psi.result.vectors.col(i) + n),
                          psi.result.residuals[i]);
            }
            best_leng = leng;
            err0 = err;
        }
    }
    out.history.eigm_hist = std::move(eigm_hist);
    out.result = best.to_result(n, best_leng > 0);
    return out;
}

}  // namespace f2p
