#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "f2p/errors.hpp"
#include "f2p/sparse.hpp"

namespace f2p {

/// Bundled synthetic test matrices: diagonal and 1-D Laplacian.

inline SparseSymMatrix diagonal_matrix(std::span<const double> d) {
    std::vector<SparseSymMatrix::Triplet> t;
    t.reserve(d.size());
    for (int i = 0; i < static_cast<int>(d.size()); ++i) t.push_back({i, i, d[i]});
    return SparseSymMatrix::from_triplets(static_cast<int>(d.size()), std::move(t));
}

/// Values start, start+step, ..., stop (inclusive up to rounding, colon-style).
inline std::vector<double> range_values(double start, double step, double stop) {
    if (step <= 0.0 || stop < start) throw InvalidArgument("range_values: bad range");
    const double nsteps = (stop - start) / step;
    long long k = std::llround(nsteps);
    if (std::abs(nsteps - static_cast<double>(k)) > 1e-6) k = static_cast<long long>(nsteps);
    std::vector<double> v(static_cast<std::size_t>(k) + 1);
    for (long long i = 0; i <= k; ++i) v[i] = start + static_cast<double>(i) * step;
    return v;
}

inline SparseSymMatrix diagonal_range(double start, double step, double stop) {
    const std::vector<double> v = range_values(start, step, stop);
    return diagonal_matrix(v);
}

/// Tridiagonal 1-D Laplacian: 2 on the diagonal, -1 off.
inline SparseSymMatrix laplacian_1d(int n) {
    if (n < 1) throw InvalidArgument("laplacian_1d: n must be positive");
    std::vector<SparseSymMatrix::Triplet> t;
    t.reserve(static_cast<std::size_t>(3) * n);
    for (int i = 0; i < n; ++i) {
        t.push_back({i, i, 2.0});
        if (i + 1 < n) t.push_back({i + 1, i, -1.0});
    }
    return SparseSymMatrix::from_triangle(n, std::move(t));
}

}  // namespace f2p
