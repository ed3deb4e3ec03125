#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "f2p/errors.hpp"

namespace f2p {

/// Dense real matrix in column-major storage. Used both for n-by-m blocks of
/// iteration vectors (Y, Z, Q) and for small m-by-m projected matrices.
class Block {
public:
    Block() = default;
    Block(int rows, int cols)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, 0.0) {
        if (rows < 0 || cols < 0) throw InvalidArgument("Block: negative dimension");
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    double& operator()(int i, int j) { return data_[idx(i, j)]; }
    double operator()(int i, int j) const { return data_[idx(i, j)]; }

    double* col(int j) { return data_.data() + idx(0, j); }
    const double* col(int j) const { return data_.data() + idx(0, j); }
    std::span<double> col_span(int j) { return {col(j), static_cast<std::size_t>(rows_)}; }
    std::span<const double> col_span(int j) const {
        return {col(j), static_cast<std::size_t>(rows_)};
    }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::size_t size() const { return data_.size(); }

    void set_col(int j, std::span<const double> v) {
        if (static_cast<int>(v.size()) != rows_) throw DimMismatch("Block::set_col: length");
        double* c = col(j);
        for (int i = 0; i < rows_; ++i) c[i] = v[i];
    }

    bool all_finite() const {
        for (double v : data_)
            if (!std::isfinite(v)) return false;
        return true;
    }

private:
    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(j) * rows_ + static_cast<std::size_t>(i);
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

// ---- small dense helpers shared by the solvers ----

/// C = Xᵀ Y, where X is n-by-k and Y is n-by-m.
inline Block transpose_times(const Block& x, const Block& y) {
    if (x.rows() != y.rows()) throw DimMismatch("transpose_times: row counts differ");
    Block c(x.cols(), y.cols());
    for (int j = 0; j < y.cols(); ++j) {
        const double* yj = y.col(j);
        for (int i = 0; i < x.cols(); ++i) {
            const double* xi = x.col(i);
            double s = 0.0;
            for (int r = 0; r < x.rows(); ++r) s += xi[r] * yj[r];
            c(i, j) = s;
        }
    }
    return c;
}

/// C = X S, where X is n-by-m and S is m-by-k.
inline Block times_small(const Block& x, const Block& s) {
    if (x.cols() != s.rows()) throw DimMismatch("times_small: inner dimensions differ");
    Block c(x.rows(), s.cols());
    for (int j = 0; j < s.cols(); ++j) {
        double* cj = c.col(j);
        for (int l = 0; l < x.cols(); ++l) {
            const double a = s(l, j);
            if (a == 0.0) continue;
            const double* xl = x.col(l);
            for (int r = 0; r < x.rows(); ++r) cj[r] += a * xl[r];
        }
    }
    return c;
}

inline double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double max_abs(const Block& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) m = std::max(m, std::abs(b.data()[i]));
    return m;
}

}  // namespace f2p
