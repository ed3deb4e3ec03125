#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <tuple>
#include <vector>

#include "f2p/block.hpp"
#include "f2p/errors.hpp"

namespace f2p {

/// Real symmetric sparse matrix in CSR form. Both triangles are stored
/// explicitly: for every (i, j, v) the mirror (j, i, v) is present too,
/// column indices are sorted within each row and duplicates are summed at
/// construction. Immutable after construction and safe to share across
/// threads.
class SparseSymMatrix {
public:
    struct Triplet {
        int row;
        int col;
        double value;
    };

    SparseSymMatrix() = default;

    /// Builds from triplets covering the full symmetric pattern; a strictly
    /// lower (or upper) entry without its mirror is rejected.
    static SparseSymMatrix from_triplets(int n, std::vector<Triplet> entries) {
        SparseSymMatrix a = assemble(n, std::move(entries));
        a.check_symmetry();
        return a;
    }

    /// Builds from one triangle: every off-diagonal triplet is mirrored.
    /// Duplicates are summed before mirroring.
    static SparseSymMatrix from_triangle(int n, std::vector<Triplet> entries) {
        std::vector<Triplet> full;
        full.reserve(entries.size() * 2);
        for (const Triplet& t : entries) {
            full.push_back(t);
            if (t.row != t.col) full.push_back({t.col, t.row, t.value});
        }
        return assemble(n, std::move(full));
    }

    int rows() const { return n_; }
    std::int64_t nnz() const { return static_cast<std::int64_t>(values_.size()); }

    const std::vector<std::int64_t>& row_ptr() const { return row_ptr_; }
    const std::vector<int>& col_idx() const { return col_idx_; }
    const std::vector<double>& values() const { return values_; }

    /// y = A x.
    void multiply(std::span<const double> x, std::span<double> y) const {
        if (static_cast<int>(x.size()) != n_ || static_cast<int>(y.size()) != n_)
            throw DimMismatch("spmv: vector length != n");
        for (int i = 0; i < n_; ++i) {
            double s = 0.0;
            for (std::int64_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
                s += values_[k] * x[col_idx_[k]];
            y[i] = s;
        }
    }

    std::vector<double> multiply(std::span<const double> x) const {
        std::vector<double> y(n_);
        multiply(x, y);
        return y;
    }

    /// y = A x for complex x (A stays real).
    void multiply(std::span<const std::complex<double>> x,
                  std::span<std::complex<double>> y) const {
        if (static_cast<int>(x.size()) != n_ || static_cast<int>(y.size()) != n_)
            throw DimMismatch("spmv: vector length != n");
        for (int i = 0; i < n_; ++i) {
            double sr = 0.0, si = 0.0;
            for (std::int64_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
                const double v = values_[k];
                const std::complex<double> xc = x[col_idx_[k]];
                sr += v * xc.real();
                si += v * xc.imag();
            }
            y[i] = {sr, si};
        }
    }

    /// Y = A X column by column.
    Block multiply(const Block& x) const {
        if (x.rows() != n_) throw DimMismatch("spmm: block rows != n");
        Block y(n_, x.cols());
        for (int j = 0; j < x.cols(); ++j) multiply(x.col_span(j), y.col_span(j));
        return y;
    }

    /// Y = (A - sigma I) X, the power-step kernel.
    Block multiply_shifted(const Block& x, double sigma) const {
        Block y = multiply(x);
        for (int j = 0; j < x.cols(); ++j) {
            double* yj = y.col(j);
            const double* xj = x.col(j);
            for (int i = 0; i < n_; ++i) yj[i] -= sigma * xj[i];
        }
        return y;
    }

    /// Dense copy, for the reference spectrum tool and small oracles.
    Block to_dense() const {
        Block d(n_, n_);
        for (int i = 0; i < n_; ++i)
            for (std::int64_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
                d(i, col_idx_[k]) = values_[k];
        return d;
    }

private:
    static SparseSymMatrix assemble(int n, std::vector<Triplet> entries) {
        if (n <= 0) throw InvalidArgument("SparseSymMatrix: n must be positive");
        for (const Triplet& t : entries) {
            if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n)
                throw InvalidArgument("SparseSymMatrix: index out of range");
        }
        std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
            return std::tie(a.row, a.col) < std::tie(b.row, b.col);
        });
        SparseSymMatrix a;
        a.n_ = n;
        a.row_ptr_.assign(static_cast<std::size_t>(n) + 1, 0);
        for (std::size_t k = 0; k < entries.size();) {
            std::size_t e = k;
            double sum = 0.0;
            while (e < entries.size() && entries[e].row == entries[k].row &&
                   entries[e].col == entries[k].col) {
                sum += entries[e].value;
                ++e;
            }
            a.col_idx_.push_back(entries[k].col);
            a.values_.push_back(sum);
            a.row_ptr_[entries[k].row + 1]++;
            k = e;
        }
        for (int i = 0; i < n; ++i) a.row_ptr_[i + 1] += a.row_ptr_[i];
        return a;
    }

    /// Every stored (i, j, v) must have its mirror (j, i, v) stored with an
    /// identical value.
    void check_symmetry() const {
        for (int i = 0; i < n_; ++i) {
            for (std::int64_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
                const int j = col_idx_[k];
                if (j == i) continue;
                const auto begin = col_idx_.begin() + row_ptr_[j];
                const auto end = col_idx_.begin() + row_ptr_[j + 1];
                const auto it = std::lower_bound(begin, end, i);
                if (it == end || *it != i)
                    throw NotSymmetric("SparseSymMatrix: missing mirror entry");
                const std::int64_t pos = it - col_idx_.begin();
                if (values_[pos] != values_[k])
                    throw NotSymmetric("SparseSymMatrix: mirror value differs");
            }
        }
    }

    int n_ = 0;
    std::vector<std::int64_t> row_ptr_;
    std::vector<int> col_idx_;
    std::vector<double> values_;
};

}  // namespace f2p
