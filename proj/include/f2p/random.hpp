#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "f2p/block.hpp"
#include "f2p/errors.hpp"

namespace f2p {

/// Standard-normal sampler: mt19937_64 plus an explicit Box-Muller transform.
/// std::normal_distribution is implementation-defined, so it is avoided here;
/// this pairing is bit-reproducible for a given seed.
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t seed) : gen_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

private:
    double uniform01() {
        // 53-bit mantissa draw in (0, 1]
        const std::uint64_t bits = gen_() >> 11;
        const double u = (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
        return u;
    }

    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// n-by-m block with iid N(0,1) entries, filled in column-major order.
inline Block random_block(int n, int m, std::uint64_t seed) {
    if (m > n) throw DimMismatch("random_block: need m <= n");
    if (n < 0 || m < 1) throw InvalidArgument("random_block: bad shape");
    Block y(n, m);
    NormalSampler s(seed);
    for (std::size_t i = 0; i < y.size(); ++i) y.data()[i] = s.next();
    return y;
}

inline std::vector<double> random_vector(int n, std::uint64_t seed) {
    std::vector<double> v(n);
    NormalSampler s(seed);
    for (double& x : v) x = s.next();
    return v;
}

}  // namespace f2p
