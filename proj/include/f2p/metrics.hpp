#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <span>
#include <vector>

#include "f2p/errors.hpp"
#include "f2p/random.hpp"
#include "f2p/sparse.hpp"

namespace f2p {

/// Derives the seed of the scale-factor probe vector from the block seed.
/// Distinct stream, so changing the block width m never changes rho.
inline std::uint64_t rho_seed(std::uint64_t block_seed) {
    return block_seed ^ 0x517cc1b727220a95ULL;
}

/// rho = sqrt((Ay)ᵀ(Ay)/n) for a seeded standard-normal y; approximately the
/// root mean square of the eigenvalues. Degenerate rho = 0 (A = 0) falls back
/// to 1 so scaled residuals stay defined.
inline double scale_factor(const SparseSymMatrix& a, std::uint64_t seed) {
    const int n = a.rows();
    const std::vector<double> y = random_vector(n, seed);
    const std::vector<double> ay = a.multiply(y);
    double s = 0.0;
    for (double v : ay) s += v * v;
    const double rho = std::sqrt(s / n);
    if (rho == 0.0) {
        std::cerr << "f2p: warning: scale factor is 0, falling back to 1\n";
        return 1.0;
    }
    return rho;
}

/// Minimum over the defined entries of a residual history; -1 entries mean
/// "no accepted pairs that iteration" and are skipped. Returns -1 when every
/// entry is -1.
inline double tau_r(std::span<const double> err_hist) {
    if (err_hist.empty()) throw InvalidArgument("tau_r: empty history");
    double best = -1.0;
    for (double e : err_hist) {
        if (e == -1.0) continue;
        if (best == -1.0 || e < best) best = e;
    }
    return best;
}

/// Maximum relative eigenvalue error over the compared prefix. When the
/// reference prefix contains a zero the comparison switches to absolute
/// errors and is flagged.
struct TauLambda {
    double value = -1.0;  // -1 when nothing was compared
    bool absolute = false;
};

/// Both lists must be sorted decreasing; pairing is positional over the
/// first min(#computed, #reference) entries.
inline TauLambda tau_lambda(std::span<const double> computed,
                            std::span<const double> reference) {
    const std::size_t leng = std::min(computed.size(), reference.size());
    TauLambda out;
    if (leng == 0) return out;
    for (std::size_t i = 0; i < leng; ++i)
        if (reference[i] == 0.0) out.absolute = true;
    double worst = 0.0;
    for (std::size_t i = 0; i < leng; ++i) {
        const double diff = std::abs(computed[i] - reference[i]);
        worst = std::max(worst, out.absolute ? diff : diff / std::abs(reference[i]));
    }
    out.value = worst;
    return out;
}

/// Headline metrics of one run.
struct Metrics {
    double tau_r = -1.0;
    std::optional<TauLambda> tau_lambda;
    int iter_max_inner = 0;    // max BiCG iterations over all shifted systems
    long long num_ay_total = 0;  // sum of the per-iteration power-step counts
    int eig_out = 0;
};

}  // namespace f2p
