#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "f2p/errors.hpp"
#include "f2p/sparse.hpp"

namespace f2p {

using Complex = std::complex<double>;

/// Complex shift z = re + i*im of the system (z I - A) x = y. Quadrature
/// shifts always have im = r sin(pi t_k) > 0.
struct Shift {
    double re = 0.0;
    double im = 0.0;
    Complex value() const { return {re, im}; }
};

struct SolveStats {
    int iterations = 0;
    double final_relres = 0.0;
    bool converged = false;
};

/// Options threaded through to the inner solves.
struct SolverOptions {
    double tol = 1e-10;   // relative residual target
    int max_iter = 0;     // 0 -> 5n
    bool parallel = false;
    int threads = 0;      // 0 -> F2P_NUM_THREADS env, then hardware
};

inline constexpr double kBreakdownFloor = 1e-300;

namespace detail {

/// y = (z I - A) x.
inline void shifted_apply(const SparseSymMatrix& a, Complex z, std::span<const Complex> x,
                          std::span<Complex> y) {
    a.multiply(x, y);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = z * x[i] - y[i];
}

/// y = (z I - A)ᴴ x = (conj(z) I - A) x, since A is real symmetric.
inline void shifted_apply_adjoint(const SparseSymMatrix& a, Complex z,
                                  std::span<const Complex> x, std::span<Complex> y) {
    shifted_apply(a, std::conj(z), x, y);
}

inline double norm2c(std::span<const Complex> v) {
    double s = 0.0;
    for (const Complex& x : v) s += std::norm(x);
    return std::sqrt(s);
}

}  // namespace detail

/// BiCG for the complex symmetric shifted system (z I - A) x = b, zero
/// initial guess. The shadow residual starts at conj(b) unless an explicit
/// shadow vector is supplied (the breakdown-restart path does that).
///
/// Convergence is declared only after the recurrence residual has been
/// confirmed by an explicitly recomputed one; the returned final_relres is
/// always recomputed, so converged implies final_relres <= tol <= 2*tol.
/// On max_iter exhaustion the best iterate seen so far is returned with
/// converged = false. Breakdown of either inner product throws Breakdown.
inline std::pair<std::vector<Complex>, SolveStats> bicg_shifted(
    const SparseSymMatrix& a, Shift z, std::span<const Complex> b, double tol, int max_iter,
    std::span<const Complex> shadow = {}) {
    const int n = a.rows();
    if (static_cast<int>(b.size()) != n) throw DimMismatch("bicg_shifted: rhs length != n");
    if (!(tol > 0.0)) throw InvalidArgument("bicg_shifted: tol must be positive");
    if (max_iter <= 0) max_iter = 5 * n;
    const Complex zc = z.value();

    std::vector<Complex> x(n, Complex(0.0));
    SolveStats stats;
    const double bnorm = detail::norm2c(b);
    if (bnorm == 0.0) {
        stats.converged = true;
        return {std::move(x), stats};
    }

    std::vector<Complex> r(b.begin(), b.end());
    std::vector<Complex> rs(n);
    if (shadow.empty()) {
        for (int i = 0; i < n; ++i) rs[i] = std::conj(r[i]);
    } else {
        if (static_cast<int>(shadow.size()) != n)
            throw DimMismatch("bicg_shifted: shadow length != n");
        for (int i = 0; i < n; ++i) rs[i] = shadow[i];
    }
    std::vector<Complex> p = r, ps = rs;
    std::vector<Complex> q(n), qs(n), rtrue(n);

    auto cdot = [n](const std::vector<Complex>& u, const std::vector<Complex>& v) {
        Complex s(0.0);
        for (int i = 0; i < n; ++i) s += std::conj(u[i]) * v[i];
        return s;
    };

    Complex rho = cdot(rs, r);
    std::vector<Complex> best_x = x;
    double best_rnorm = bnorm;

    for (int it = 1; it <= max_iter; ++it) {
        if (std::abs(rho) < kBreakdownFloor)
            throw Breakdown("bicg_shifted: rho breakdown at iteration " + std::to_string(it),
                            it);
        detail::shifted_apply(a, zc, p, q);
        detail::shifted_apply_adjoint(a, zc, ps, qs);
        const Complex denom = cdot(ps, q);
        if (std::abs(denom) < kBreakdownFloor)
            throw Breakdown(
                "bicg_shifted: pivot breakdown at iteration " + std::to_string(it), it);
        const Complex alpha = rho / denom;
        for (int i = 0; i < n; ++i) x[i] += alpha * p[i];
        for (int i = 0; i < n; ++i) r[i] -= alpha * q[i];
        for (int i = 0; i < n; ++i) rs[i] -= std::conj(alpha) * qs[i];
        stats.iterations = it;

        const double rnorm = detail::norm2c(r);
        if (rnorm < best_rnorm) {
            best_rnorm = rnorm;
            best_x = x;
        }
        if (rnorm / bnorm <= tol) {
            // confirm against the true residual before declaring victory
            detail::shifted_apply(a, zc, x, rtrue);
            for (int i = 0; i < n; ++i) rtrue[i] = b[i] - rtrue[i];
            const double explicit_rel = detail::norm2c(rtrue) / bnorm;
            if (explicit_rel <= tol) {
                stats.converged = true;
                stats.final_relres = explicit_rel;
                return {std::move(x), stats};
            }
        }

        const Complex rho_next = cdot(rs, r);
        const Complex beta = rho_next / rho;
        rho = rho_next;
        for (int i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
        for (int i = 0; i < n; ++i) ps[i] = rs[i] + std::conj(beta) * ps[i];
    }

    detail::shifted_apply(a, zc, best_x, rtrue);
    for (int i = 0; i < n; ++i) rtrue[i] = b[i] - rtrue[i];
    stats.final_relres = detail::norm2c(rtrue) / bnorm;
    stats.converged = false;
    return {std::move(best_x), stats};
}

/// Upper bound 1 + 2*delta/(r sin(pi t)) on the 2-norm condition number of
/// z_k I - A, where delta is the half-width of an interval containing the
/// spectrum of A.
inline double condition_bound(double delta, double radius, double node) {
    if (!(node > 0.0 && node < 1.0))
        throw InvalidNode("condition_bound: node must lie in (0, 1)");
    if (delta < 0.0 || !(radius > 0.0))
        throw InvalidArgument("condition_bound: need delta >= 0 and radius > 0");
    return 1.0 + 2.0 * delta / (radius * std::sin(std::numbers::pi * node));
}

}  // namespace f2p
