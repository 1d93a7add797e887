#pragma once

#include <cstdint>
#include <random>

#include "ncdist/algebra.hpp"

namespace ncdist {

/// Deterministic per-instance randomness: a fixed engine seeded from a
/// 64-bit value run through splitmix so nearby seeds decorrelate.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(mix(seed)) {}

    double uniform(double lo = 0.0, double hi = 1.0) {
        return lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(eng_);
    }
    double gaussian() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }
    int uniform_int(int lo, int hi) {  // inclusive
        return std::uniform_int_distribution<int>(lo, hi)(eng_);
    }
    bool coin() { return uniform_int(0, 1) == 1; }

    Complex cgauss() { return Complex(gaussian(), gaussian()) * std::sqrt(0.5); }

    Matrix gaussian_matrix(int n) {
        Matrix m(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) m(r, c) = cgauss();
        return m;
    }

    TracedElement gaussian_element(const TracedAlgebra& alg) {
        std::vector<Matrix> bs;
        for (int j = 0; j < alg.block_count(); ++j) bs.push_back(gaussian_matrix(alg.dim(j)));
        return TracedElement(alg, std::move(bs));
    }

    TracedElement hermitian_element(const TracedAlgebra& alg) {
        TracedElement g = gaussian_element(alg);
        return (g + g.adjoint()).scaled(0.5);
    }

    TracedElement psd_element(const TracedAlgebra& alg) {
        TracedElement g = gaussian_element(alg);
        return g.adjoint() * g;
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    std::mt19937_64 eng_;
};

}  // namespace ncdist
