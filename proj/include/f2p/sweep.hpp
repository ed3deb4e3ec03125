#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "f2p/eigensolvers.hpp"
#include "f2p/errors.hpp"

namespace f2p {

/// Eigenvalues from two windows closer than this (relative) are the same.
inline bool sweep_same_eigenvalue(double x, double y) {
    return std::abs(x - y) <= 1e-9 * std::max(1.0, std::abs(x));
}

struct SweepWindow {
    double a = 0.0;
    double b = 0.0;
    EigResult result;
    RunHistory history;
};

struct SweepOutcome {
    std::vector<SweepWindow> windows;
    EigResult merged;  // deduplicated union, restricted to the original (a, b)
    double rho = 1.0;
    FilterStats filter_stats;
};

/// Finds all eigenvalues in (a, b) by sliding a window of length b - a
/// downward: after each f2p call returning lambda_1 >= ... >= lambda_k, the
/// current window is split into 10 equal subintervals and the next window's
/// right end is the right endpoint of the subinterval holding lambda_k (a
/// boundary hit goes with the subinterval starting there, so b_next strictly
/// exceeds lambda_k). A window that returns fewer than num_out pairs, none
/// at all, or nothing above a ends the sweep, as does a window falling
/// entirely below a. The shift window of the inner iteration restarts with
/// every sweep window.
inline SweepOutcome sweep_interval(const SparseSymMatrix& a, double lo, double hi,
                                   const F2PConfig& cfg, double radius,
                                   const QuadratureRule& rule, const SolverOptions& solver) {
    cfg.validate();
    if (!(lo < hi)) throw EmptyInterval("sweep_interval: need a < b");
    const double delta = hi - lo;

    SweepOutcome out;
    struct Candidate {
        double value;
        std::vector<double> col;
        double err;
    };
    std::vector<Candidate> found;

    double wa = lo, wb = hi;
    double prev_leading = std::numeric_limits<double>::quiet_NaN();
    bool first_rho = true;
    for (;;) {
        const IntervalSpec spec{wa, wb, radius};
        DriverOutcome run = f2p(a, cfg, spec, rule, solver);
        if (first_rho) {
            out.rho = run.rho;
            first_rho = false;
        }
        out.filter_stats.merge(run.filter_stats);
        out.windows.push_back({wa, wb, run.result, run.history});
        const EigResult& res = out.windows.back().result;
        if (res.empty()) break;

        for (int i = 0; i < res.count(); ++i)
            found.push_back({res.values[i],
                             std::vector<double>(res.vectors.col(i),
                                                 res.vectors.col(i) + a.rows()),
                             res.residuals[i]});

        const double leading = res.values.front();
        if (leading <= lo) break;                 // nothing above the original a
        if (res.count() < cfg.num_out) break;     // window exhausted its interval
        if (!std::isnan(prev_leading) && sweep_same_eigenvalue(leading, prev_leading))
            throw NonProgress("sweep_interval: window made no progress");
        prev_leading = leading;

        const double lambda_k = res.values.back();
        const double w = (wb - wa) / 10.0;
        int idx = static_cast<int>(std::floor((lambda_k - wa) / w));
        idx = std::clamp(idx, 0, 9);
        double b_next = wa + (idx + 1) * w;
        if (!(b_next > lambda_k)) b_next = wa + (idx + 2) * w;
        if (b_next <= lo) break;
        wb = b_next;
        wa = b_next - delta;
    }

    // deduplicated union inside the original interval; adjacent-window
    // duplicates keep the copy with the smaller residual
    std::sort(found.begin(), found.end(),
              [](const Candidate& x, const Candidate& y) { return x.value > y.value; });
    detail::PairList merged;
    for (Candidate& c : found) {
        if (!(c.value > lo && c.value < hi)) continue;
        if (!merged.values.empty() && sweep_same_eigenvalue(merged.values.back(), c.value)) {
            if (c.err < merged.errs.back()) {
                merged.values.back() = c.value;
                merged.cols.back() = std::move(c.col);
                merged.errs.back() = c.err;
            }
            continue;
        }
        merged.push(c.value, std::move(c.col), c.err);
    }
    out.merged = merged.to_result(a.rows(), !merged.values.empty());
    return out;
}

}  // namespace f2p
