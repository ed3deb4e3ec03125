#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "f2p/config.hpp"
#include "f2p/eigensolvers.hpp"
#include "f2p/errors.hpp"
#include "f2p/matrix_market.hpp"
#include "f2p/report.hpp"
#include "f2p/sweep.hpp"
#include "f2p/synthetic.hpp"

namespace f2p {

/// Resolves a matrix spec: "diag:n" (values 1..n), "diag:start:step:stop",
/// "lap1d:n", or a Matrix Market file path.
inline SparseSymMatrix load_matrix(const std::string& spec) {
    auto split = [](const std::string& s) {
        std::vector<std::string> parts;
        std::size_t start = 0;
        for (;;) {
            const auto colon = s.find(':', start);
            parts.push_back(s.substr(start, colon - start));
            if (colon == std::string::npos) return parts;
            start = colon + 1;
        }
    };
    if (spec.rfind("diag:", 0) == 0) {
        const auto parts = split(spec);
        try {
            if (parts.size() == 2) {
                const int n = std::stoi(parts[1]);
                return diagonal_range(1.0, 1.0, static_cast<double>(n));
            }
            if (parts.size() == 4)
                return diagonal_range(std::stod(parts[1]), std::stod(parts[2]),
                                      std::stod(parts[3]));
        } catch (const Error&) {
            throw;
        } catch (const std::exception&) {
        }
        throw ConfigError("bad diag spec '" + spec + "' (want diag:n or diag:a:step:b)");
    }
    if (spec.rfind("lap1d:", 0) == 0) {
        try {
            return laplacian_1d(std::stoi(spec.substr(6)));
        } catch (const Error&) {
            throw;
        } catch (const std::exception&) {
            throw ConfigError("bad lap1d spec '" + spec + "'");
        }
    }
    return read_matrix_market(spec);
}

namespace detail {

inline LaneReport make_lane(std::string name, const EigResult& res, const RunHistory& hist,
                            const FilterStats& fstats,
                            const std::vector<double>& reference) {
    LaneReport lane;
    lane.name = std::move(name);
    lane.converged = res.converged;
    lane.eigenvalues = res.values;
    lane.residuals = res.residuals;
    lane.err_hist = hist.err_hist;
    lane.num_ay_hist = hist.num_ay_hist;
    lane.metrics.eig_out = res.count();
    lane.metrics.iter_max_inner = fstats.max_iterations;
    for (int ay : hist.num_ay_hist) lane.metrics.num_ay_total += ay;
    lane.metrics.tau_r = hist.err_hist.empty() ? -1.0 : tau_r(hist.err_hist);
    if (!reference.empty())
        lane.metrics.tau_lambda = tau_lambda(res.values, reference);
    return lane;
}

/// EigAab of the metric definitions: reference values inside (a, b), sorted
/// decreasing.
inline std::vector<double> interval_reference(std::vector<double> ref, double a, double b,
                                              bool restrict) {
    if (restrict) {
        std::erase_if(ref, [&](double v) { return !(v > a && v < b); });
    }
    std::sort(ref.begin(), ref.end(), std::greater<>());
    return ref;
}

}  // namespace detail

/// Dense reference spectrum (decreasing) of a small matrix; the bundled
/// oracle behind tau_lambda comparisons and the `oracle` subcommand.
inline std::vector<double> dense_spectrum(const SparseSymMatrix& a) {
    if (a.rows() > 2000)
        throw ConfigError("oracle: dense reference spectrum is limited to n <= 2000");
    DenseEig eig = dense_sym_eig(a.to_dense());
    std::reverse(eig.values.begin(), eig.values.end());
    return eig.values;
}

/// Executes one config end to end and assembles the report. `compare` runs
/// feast, feast2, and f2p from the identical seeded start block and aligns
/// their histories; `sweep` reports one lane per window plus the merged
/// union; `filter-scan` samples the scalar filter over the configured grid
/// (lane metrics stay empty).
inline RunReport run(const RunConfig& cfg) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    RunReport report;
    report.config = cfg;

    const QuadratureRule rule = gauss_legendre(cfg.q);
    const SolverOptions solver = cfg.solver_options();

    if (cfg.algorithm == "filter-scan") {
        const bool use_ab = std::isnan(cfg.scan_center) || cfg.scan_radius <= 0.0;
        const Contour gamma = use_ab ? make_single_contour(cfg.a, cfg.b, rule)
                                     : Contour{cfg.scan_center, cfg.scan_radius, rule};
        const double lo = std::isnan(cfg.scan_min) ? gamma.center - 5.0 * gamma.radius
                                                   : cfg.scan_min;
        const double hi = std::isnan(cfg.scan_max) ? gamma.center + 5.0 * gamma.radius
                                                   : cfg.scan_max;
        if (!(lo < hi)) throw ConfigError("filter-scan: need scan_min < scan_max");
        std::vector<double> lambdas(cfg.scan_points), response(cfg.scan_points);
        for (int i = 0; i < cfg.scan_points; ++i) {
            lambdas[i] = lo + (hi - lo) * i / (cfg.scan_points - 1);
            response[i] = scalar_filter(lambdas[i], gamma);
        }
        if (!cfg.csv.empty()) write_filter_scan_csv(lambdas, response, cfg.csv);
        LaneReport lane;
        lane.name = "filter-scan";
        lane.eigenvalues = lambdas;   // grid
        lane.residuals = response;    // response values
        report.lanes.push_back(std::move(lane));
        report.total_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return report;
    }

    const SparseSymMatrix a = load_matrix(cfg.matrix);
    const auto t1 = std::chrono::steady_clock::now();
    report.read_seconds = std::chrono::duration<double>(t1 - t0).count();

    std::vector<double> reference;
    if (!cfg.reference.empty())
        reference = detail::interval_reference(read_spectrum_csv(cfg.reference), cfg.a,
                                               cfg.b, cfg.needs_interval());

    const double rho = scale_factor(a, rho_seed(cfg.seed));
    const IntervalSpec spec{cfg.a, cfg.b, cfg.effective_radius()};

    if (cfg.algorithm == "f2p") {
        DriverOutcome out = f2p(a, cfg.f2p_config(), spec, rule, solver);
        report.lanes.push_back(
            detail::make_lane("f2p", out.result, out.history, out.filter_stats, reference));
        if (!cfg.csv.empty())
            write_history_csv(out.history.err_hist, out.history.num_ay_hist, cfg.csv);
    } else if (cfg.algorithm == "feast") {
        Block y = random_block(a.rows(), cfg.m, cfg.seed);
        DriverOutcome out =
            feast(a, std::move(y), cfg.a, cfg.b, rule, cfg.max_it, cfg.tol, solver, rho);
        report.lanes.push_back(detail::make_lane("feast", out.result, out.history,
                                                 out.filter_stats, reference));
        if (!cfg.csv.empty())
            write_history_csv(out.history.err_hist, out.history.num_ay_hist, cfg.csv);
    } else if (cfg.algorithm == "feast2") {
        Block y = random_block(a.rows(), cfg.m, cfg.seed);
        DriverOutcome out =
            feast2(a, std::move(y), spec, rule, cfg.max_it, cfg.tol, solver, rho);
        report.lanes.push_back(detail::make_lane("feast2", out.result, out.history,
                                                 out.filter_stats, reference));
        if (!cfg.csv.empty())
            write_history_csv(out.history.err_hist, out.history.num_ay_hist, cfg.csv);
    } else if (cfg.algorithm == "psi") {
        Block y = random_block(a.rows(), cfg.m, cfg.seed);
        DriverOutcome out = psi_simple(a, std::move(y), cfg.max_it, cfg.tol);
        std::vector<double> psi_ref;
        if (!reference.empty()) psi_ref = reference;  // full-spectrum comparison
        report.lanes.push_back(
            detail::make_lane("psi", out.result, out.history, out.filter_stats, psi_ref));
        if (!cfg.csv.empty())
            write_history_csv(out.history.err_hist, out.history.num_ay_hist, cfg.csv);
    } else if (cfg.algorithm == "sweep") {
        SweepOutcome out =
            sweep_interval(a, cfg.a, cfg.b, cfg.f2p_config(), spec.radius, rule, solver);
        for (std::size_t i = 0; i < out.windows.size(); ++i) {
            const SweepWindow& w = out.windows[i];
            LaneReport lane = detail::make_lane("window[" + std::to_string(i) + "]",
                                                w.result, w.history, {}, {});
            lane.err_hist.clear();  // keep window lanes lean; merged lane carries metrics
            lane.num_ay_hist.clear();
            report.lanes.push_back(std::move(lane));
        }
        report.lanes.push_back(detail::make_lane("sweep", out.merged, {}, out.filter_stats,
                                                 reference));
        report.lanes.back().metrics.tau_r = -1.0;
    } else if (cfg.algorithm == "compare") {
        // identical start block, full histories (tol = 0 disables early exit)
        DriverOutcome rf = feast(a, random_block(a.rows(), cfg.m, cfg.seed), cfg.a, cfg.b,
                                 rule, cfg.max_it, 0.0, solver, rho);
        DriverOutcome rf2 = feast2(a, random_block(a.rows(), cfg.m, cfg.seed), spec, rule,
                                   cfg.max_it, 0.0, solver, rho);
        DriverOutcome rp = f2p(a, cfg.f2p_config(), spec, rule, solver);
        report.lanes.push_back(
            detail::make_lane("feast", rf.result, rf.history, rf.filter_stats, reference));
        report.lanes.push_back(detail::make_lane("feast2", rf2.result, rf2.history,
                                                 rf2.filter_stats, reference));
        report.lanes.push_back(
            detail::make_lane("f2p", rp.result, rp.history, rp.filter_stats, reference));
        if (!cfg.csv.empty())
            write_compare_csv(rf.history.err_hist, rf2.history.err_hist,
                              rp.history.err_hist, cfg.csv);
    }

    const auto t2 = std::chrono::steady_clock::now();
    report.solve_seconds = std::chrono::duration<double>(t2 - t1).count();
    report.total_seconds = std::chrono::duration<double>(t2 - t0).count();
    return report;
}

}  // namespace f2p
