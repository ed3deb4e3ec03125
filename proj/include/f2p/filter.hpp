#pragma once

#include <atomic>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "f2p/block.hpp"
#include "f2p/errors.hpp"
#include "f2p/quadrature.hpp"
#include "f2p/random.hpp"
#include "f2p/shifted.hpp"
#include "f2p/sparse.hpp"

namespace f2p {

/// One circle in the complex plane plus the quadrature rule discretizing the
/// contour integral over it. The real-axis footprint is (center - radius,
/// center + radius).
struct Contour {
    double center = 0.0;
    double radius = 0.0;
    QuadratureRule rule;
};

/// Open search interval (a, b) plus the shared radius of the two circles
/// centered at c_L = b - r and c_R = a + r. Their real-axis overlap is
/// exactly (a, b) whenever r >= (b - a)/2.
struct IntervalSpec {
    double a = 0.0;
    double b = 0.0;
    double radius = 0.0;
};

inline Contour make_single_contour(double a, double b, QuadratureRule rule) {
    if (!(a < b)) throw EmptyInterval("make_single_contour: need a < b");
    return {0.5 * (a + b), 0.5 * (b - a), std::move(rule)};
}

inline std::pair<Contour, Contour> make_pair_contours(const IntervalSpec& spec,
                                                      const QuadratureRule& rule) {
    if (!(spec.a < spec.b)) throw EmptyInterval("make_pair_contours: need a < b");
    if (!(spec.radius >= 0.5 * (spec.b - spec.a)))
        throw CirclesDoNotCover("make_pair_contours: radius < (b - a)/2");
    Contour left{spec.b - spec.radius, spec.radius, rule};
    Contour right{spec.a + spec.radius, spec.radius, rule};
    return {std::move(left), std::move(right)};
}

/// Aggregate over the inner solves of one (or more) filter applications.
struct FilterStats {
    int max_iterations = 0;
    long long total_iterations = 0;
    int systems = 0;
    int unconverged = 0;

    void absorb(const SolveStats& s) {
        max_iterations = std::max(max_iterations, s.iterations);
        total_iterations += s.iterations;
        systems += 1;
        if (!s.converged) unconverged += 1;
    }
    void merge(const FilterStats& o) {
        max_iterations = std::max(max_iterations, o.max_iterations);
        total_iterations += o.total_iterations;
        systems += o.systems;
        unconverged += o.unconverged;
    }
};

/// Scalar response of the quadrature-discretized filter:
/// h(lambda) = r * sum_k w_k Re{ e^{i pi t_k} / (z_k - lambda) }.
/// Approximately 1 inside the circle and decaying outside.
inline double scalar_filter(double lambda, const Contour& gamma) {
    double h = 0.0;
    for (int k = 0; k < gamma.rule.order; ++k) {
        const double ang = std::numbers::pi * gamma.rule.nodes[k];
        const Complex phase(std::cos(ang), std::sin(ang));
        const Complex zk = Complex(gamma.center, 0.0) + gamma.radius * phase;
        h += gamma.rule.weights[k] * (phase / (zk - lambda)).real();
    }
    return gamma.radius * h;
}

namespace detail {

inline int resolve_threads(const SolverOptions& opt) {
    if (opt.threads > 0) return opt.threads;
    if (const char* env = std::getenv("F2P_NUM_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Solves (z_k I - A) x = y_j; restarts once with a perturbed random shadow
/// on breakdown, then lets the failure surface.
inline std::pair<std::vector<Complex>, SolveStats> solve_system(
    const SparseSymMatrix& a, Shift z, const std::vector<Complex>& rhs, double tol,
    int max_iter, int k, int j) {
    try {
        return bicg_shifted(a, z, rhs, tol, max_iter);
    } catch (const Breakdown&) {
        const int n = a.rows();
        double bmax = 0.0;
        for (const Complex& v : rhs) bmax = std::max(bmax, std::abs(v));
        const std::uint64_t seed =
            0x9e3779b97f4a7c15ULL ^ (static_cast<std::uint64_t>(k) << 32) ^
            static_cast<std::uint64_t>(j);
        NormalSampler gen(seed);
        std::vector<Complex> shadow(n);
        for (int i = 0; i < n; ++i)
            shadow[i] = std::conj(rhs[i]) + 1e-6 * bmax * Complex(gen.next(), gen.next());
        return bicg_shifted(a, z, rhs, tol, max_iter, shadow);
    }
}

}  // namespace detail

/// Z = r * sum_k w_k Re{ e^{i pi t_k} X(t_k) } with (z_k I - A) X(t_k) = Y,
/// the filtered block of the contour projector applied to Y. The m*q systems
/// are independent; with opt.parallel they are solved concurrently, but the
/// reduction always accumulates in fixed (k, then j) order so results are
/// identical run to run and with parallelism on or off.
inline Block apply_filter(const SparseSymMatrix& a, const Block& y, const Contour& gamma,
                          const SolverOptions& opt, FilterStats* stats = nullptr) {
    if (y.rows() != a.rows()) throw DimMismatch("apply_filter: block rows != n");
    const int n = a.rows(), m = y.cols(), q = gamma.rule.order;
    const int max_iter = opt.max_iter > 0 ? opt.max_iter : 5 * n;

    std::vector<Shift> shifts(q);
    std::vector<double> re_w(q), im_w(q);  // weight * r * e^{i pi t_k}
    for (int k = 0; k < q; ++k) {
        const double ang = std::numbers::pi * gamma.rule.nodes[k];
        shifts[k] = {gamma.center + gamma.radius * std::cos(ang),
                     gamma.radius * std::sin(ang)};
        re_w[k] = gamma.radius * gamma.rule.weights[k] * std::cos(ang);
        im_w[k] = gamma.radius * gamma.rule.weights[k] * std::sin(ang);
    }

    // per-system real contribution Re{w_k e^{i pi t_k} x_{kj}}, then a
    // deterministic ordered sum
    const int tasks = q * m;
    std::vector<std::vector<double>> contrib(tasks);
    std::vector<SolveStats> stat(tasks);

    auto run_task = [&](int t) {
        const int k = t / m, j = t % m;
        std::vector<Complex> rhs(n);
        const double* yj = y.col(j);
        for (int i = 0; i < n; ++i) rhs[i] = Complex(yj[i], 0.0);
        auto [x, s] = detail::solve_system(a, shifts[k], rhs, opt.tol, max_iter, k, j);
        stat[t] = s;
        std::vector<double> c(n);
        for (int i = 0; i < n; ++i)
            c[i] = re_w[k] * x[i].real() - im_w[k] * x[i].imag();
        contrib[t] = std::move(c);
    };

    const int nthreads = opt.parallel ? std::min(detail::resolve_threads(opt), tasks) : 1;
    if (nthreads <= 1) {
        for (int t = 0; t < tasks; ++t) run_task(t);
    } else {
        std::atomic<int> next{0};
        std::exception_ptr first_error;
        std::mutex error_mutex;
        auto worker = [&] {
            for (;;) {
                const int t = next.fetch_add(1);
                if (t >= tasks) return;
                try {
                    run_task(t);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (std::thread& th : pool) th.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    Block z(n, m);
    for (int k = 0; k < q; ++k)
        for (int j = 0; j < m; ++j) {
            const std::vector<double>& c = contrib[k * m + j];
            double* zj = z.col(j);
            for (int i = 0; i < n; ++i) zj[i] += c[i];
        }
    if (stats)
        for (int t = 0; t < tasks; ++t) stats->absorb(stat[t]);
    if (!z.all_finite()) throw NonFinite("apply_filter: non-finite output entry");
    return z;
}

/// Two-circle corrector: filter over Gamma_L first, then Gamma_R.
inline Block apply_filter_pair(const SparseSymMatrix& a, const Block& y, const Contour& left,
                               const Contour& right, const SolverOptions& opt,
                               FilterStats* stats = nullptr) {
    Block w = apply_filter(a, y, left, opt, stats);
    return apply_filter(a, w, right, opt, stats);
}

}  // namespace f2p
