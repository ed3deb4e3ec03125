#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "f2p/block.hpp"
#include "f2p/errors.hpp"

namespace f2p {

/// Full spectral decomposition of a small dense symmetric matrix.
/// values are ascending; vectors holds the matching orthonormal columns.
struct DenseEig {
    std::vector<double> values;
    Block vectors;
};

namespace detail {

/// Householder reduction to tridiagonal form with accumulated transform.
/// On exit a holds the orthogonal matrix, d the diagonal, e the
/// sub-diagonal in e[1..n-1].
inline void tridiagonalize(Block& a, std::vector<double>& d, std::vector<double>& e) {
    const int n = a.rows();
    d.assign(n, 0.0);
    e.assign(n, 0.0);
    for (int i = n - 1; i >= 1; --i) {
        const int l = i - 1;
        double h = 0.0, scale = 0.0;
        if (l > 0) {
            for (int k = 0; k <= l; ++k) scale += std::abs(a(i, k));
            if (scale == 0.0) {
                e[i] = a(i, l);
            } else {
                for (int k = 0; k <= l; ++k) {
                    a(i, k) /= scale;
                    h += a(i, k) * a(i, k);
                }
                double f = a(i, l);
                double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                a(i, l) = f - g;
                f = 0.0;
                for (int j = 0; j <= l; ++j) {
                    a(j, i) = a(i, j) / h;
                    g = 0.0;
                    for (int k = 0; k <= j; ++k) g += a(j, k) * a(i, k);
                    for (int k = j + 1; k <= l; ++k) g += a(k, j) * a(i, k);
                    e[j] = g / h;
                    f += e[j] * a(i, j);
                }
                const double hh = f / (h + h);
                for (int j = 0; j <= l; ++j) {
                    f = a(i, j);
                    g = e[j] - hh * f;
                    e[j] = g;
                    for (int k = 0; k <= j; ++k) a(j, k) -= f * e[k] + g * a(i, k);
                }
            }
        } else {
            e[i] = a(i, l);
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for (int i = 0; i < n; ++i) {
        if (d[i] != 0.0) {
            for (int j = 0; j < i; ++j) {
                double g = 0.0;
                for (int k = 0; k < i; ++k) g += a(i, k) * a(k, j);
                for (int k = 0; k < i; ++k) a(k, j) -= g * a(k, i);
            }
        }
        d[i] = a(i, i);
        a(i, i) = 1.0;
        for (int j = 0; j < i; ++j) a(j, i) = a(i, j) = 0.0;
    }
}

/// QL iteration with implicit shifts on a tridiagonal (d, e); the rotations
/// are accumulated into the columns of a.
inline void ql_implicit(std::vector<double>& d, std::vector<double>& e, Block& a) {
    const int n = static_cast<int>(d.size());
    for (int i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
            }
            if (m != l) {
                if (iter++ == 50)
                    throw Error("dense_sym_eig: QL iteration failed to converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    for (int k = 0; k < n; ++k) {
                        f = a(k, i + 1);
                        a(k, i + 1) = s * a(k, i) + c * f;
                        a(k, i) = c * a(k, i) - s * f;
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

inline void check_square_symmetric(const Block& s, const char* who) {
    if (s.rows() != s.cols()) throw DimMismatch(std::string(who) + ": matrix not square");
    double amax = 0.0, dmax = 0.0;
    for (int j = 0; j < s.cols(); ++j)
        for (int i = 0; i <= j; ++i) {
            amax = std::max(amax, std::abs(s(i, j)));
            dmax = std::max(dmax, std::abs(s(i, j) - s(j, i)));
        }
    if (dmax > 1e-12 * std::max(amax, 1e-300))
        throw NotSymmetric(std::string(who) + ": input is not symmetric");
}

}  // namespace detail

/// Full spectral decomposition of a dense symmetric matrix, eigenvalues
/// ascending. Intended for the small projected problems (m up to ~2000).
inline DenseEig dense_sym_eig(const Block& s) {
    detail::check_square_symmetric(s, "dense_sym_eig");
    const int n = s.rows();
    DenseEig out;
    out.vectors = s;
    // fold in the transpose so rounding asymmetry cannot bias the iteration
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < j; ++i) {
            const double v = 0.5 * (s(i, j) + s(j, i));
            out.vectors(i, j) = out.vectors(j, i) = v;
        }
    std::vector<double> d, e;
    if (n == 1) {
        out.values = {s(0, 0)};
        out.vectors(0, 0) = 1.0;
        return out;
    }
    detail::tridiagonalize(out.vectors, d, e);
    detail::ql_implicit(d, e, out.vectors);

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) { return d[i] < d[j]; });
    out.values.resize(n);
    Block sorted(n, n);
    for (int j = 0; j < n; ++j) {
        out.values[j] = d[order[j]];
        sorted.set_col(j, out.vectors.col_span(order[j]));
    }
    out.vectors = std::move(sorted);
    return out;
}

/// Lower Cholesky factor of an SPD matrix; throws IllConditionedGram when a
/// pivot drops to (or below) the numerical floor.
inline Block cholesky(const Block& b) {
    detail::check_square_symmetric(b, "cholesky");
    const int n = b.rows();
    double dmax = 0.0;
    for (int i = 0; i < n; ++i) dmax = std::max(dmax, std::abs(b(i, i)));
    Block l(n, n);
    for (int j = 0; j < n; ++j) {
        double diag = b(j, j);
        for (int k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
        if (!(diag > 1e-14 * dmax))
            throw IllConditionedGram("cholesky: matrix is not numerically SPD");
        l(j, j) = std::sqrt(diag);
        for (int i = j + 1; i < n; ++i) {
            double v = b(i, j);
            for (int k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
            l(i, j) = v / l(j, j);
        }
    }
    return l;
}

/// Eigenpairs of the symmetric pencil (Ahat, Bhat) with Bhat SPD, via
/// Bhat = L Lᵀ and the standard problem on L⁻¹ Ahat L⁻ᵀ. The returned
/// vectors are Bhat-orthonormal.
inline DenseEig dense_gen_sym_eig(const Block& ahat, const Block& bhat) {
    detail::check_square_symmetric(ahat, "dense_gen_sym_eig");
    if (ahat.rows() != bhat.rows()) throw DimMismatch("dense_gen_sym_eig: sizes differ");
    const int n = ahat.rows();
    const Block l = cholesky(bhat);

    // W = L⁻¹ Ahat (forward substitution per column)
    Block w = ahat;
    for (int j = 0; j < n; ++j) {
        double* wj = w.col(j);
        for (int i = 0; i < n; ++i) {
            double v = wj[i];
            for (int k = 0; k < i; ++k) v -= l(i, k) * wj[k];
            wj[i] = v / l(i, i);
        }
    }
    // C = L⁻¹ Wᵀ, symmetrized
    Block c(n, n);
    for (int j = 0; j < n; ++j) {
        double* cj = c.col(j);
        for (int i = 0; i < n; ++i) cj[i] = w(j, i);
        for (int i = 0; i < n; ++i) {
            double v = cj[i];
            for (int k = 0; k < i; ++k) v -= l(i, k) * cj[k];
            cj[i] = v / l(i, i);
        }
    }
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < j; ++i) {
            const double v = 0.5 * (c(i, j) + c(j, i));
            c(i, j) = c(j, i) = v;
        }

    DenseEig eig = dense_sym_eig(c);
    // back-transform: x = L⁻ᵀ u
    for (int j = 0; j < n; ++j) {
        double* xj = eig.vectors.col(j);
        for (int i = n - 1; i >= 0; --i) {
            double v = xj[i];
            for (int k = i + 1; k < n; ++k) v -= l(k, i) * xj[k];
            xj[i] = v / l(i, i);
        }
    }
    return eig;
}

}  // namespace f2p
