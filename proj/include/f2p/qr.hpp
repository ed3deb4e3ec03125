#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "f2p/block.hpp"
#include "f2p/errors.hpp"

namespace f2p {

/// Relative floor on |R_ii| below which a column counts as numerically
/// dependent on the ones before it.
inline constexpr double kQrRankTol = 1e-12;

/// Householder QR of Y (n >= m): returns Q with orthonormal columns spanning
/// span{Y}. Throws RankDeficient with the offending column index when any
/// |R_ii| <= 1e-12 * max_j |R_jj|.
inline Block qr_orthonormalize(const Block& y) {
    const int n = y.rows(), m = y.cols();
    if (n < m) throw DimMismatch("qr_orthonormalize: need rows >= cols");
    if (m == 0) return y;

    Block a = y;                       // reflectors accumulate in place
    std::vector<double> rdiag(m), tau(m);
    for (int k = 0; k < m; ++k) {
        double* ak = a.col(k);
        double norm = 0.0;
        for (int i = k; i < n; ++i) norm += ak[i] * ak[i];
        norm = std::sqrt(norm);
        if (norm == 0.0) {
            rdiag[k] = 0.0;
            tau[k] = 0.0;
            continue;
        }
        const double alpha = (ak[k] >= 0.0) ? -norm : norm;
        rdiag[k] = alpha;
        // v = x - alpha e_k, normalized so v[k] = 1
        const double vk = ak[k] - alpha;
        for (int i = k + 1; i < n; ++i) ak[i] /= vk;
        ak[k] = 1.0;
        tau[k] = -vk / alpha;          // = 2 / (vᵀv) scaled for v[k] = 1
        for (int j = k + 1; j < m; ++j) {
            double* aj = a.col(j);
            double s = 0.0;
            for (int i = k; i < n; ++i) s += ak[i] * aj[i];
            s *= tau[k];
            for (int i = k; i < n; ++i) aj[i] -= s * ak[i];
        }
    }

    double rmax = 0.0;
    for (int k = 0; k < m; ++k) rmax = std::max(rmax, std::abs(rdiag[k]));
    for (int k = 0; k < m; ++k) {
        if (std::abs(rdiag[k]) <= kQrRankTol * rmax)
            throw RankDeficient(
                "qr_orthonormalize: column " + std::to_string(k) + " is numerically dependent",
                k);
    }

    // Q = H_0 ... H_{m-1} applied to the first m identity columns
    Block q(n, m);
    for (int j = 0; j < m; ++j) q(j, j) = 1.0;
    for (int k = m - 1; k >= 0; --k) {
        if (tau[k] == 0.0) continue;
        const double* vk = a.col(k);
        for (int j = 0; j < m; ++j) {
            double* qj = q.col(j);
            double s = 0.0;
            for (int i = k; i < n; ++i) s += vk[i] * qj[i];
            s *= tau[k];
            for (int i = k; i < n; ++i) qj[i] -= s * vk[i];
        }
    }
    return q;
}

}  // namespace f2p
