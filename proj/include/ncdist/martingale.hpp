#pragma once

#include <vector>

#include "ncdist/algebra.hpp"
#include "ncdist/filtration.hpp"

namespace ncdist {

/// Martingale difference sequence: d_k lies in the level-k range and is
/// annihilated by the level-(k-1) expectation (with E_{-1} = 0).
struct DifferenceSequence {
    const Filtration* filtration = nullptr;
    std::vector<TracedElement> d;

    /// Largest deviation from the two defining conditions.
    double defect(double scale_tol = 1e-10) const;
};

/// Martingale differences of x: d_0 = E_0 x, d_k = E_k x - E_{k-1} x.
/// Telescopes back to x exactly when the last level is the full algebra.
DifferenceSequence differences(const TracedElement& x, const Filtration& F);

TracedElement transform(const DifferenceSequence& d, const std::vector<int>& signs);

/// Generalized transform: sum of d_k tensor xi_k with xi_k in an auxiliary
/// algebra of unit trace.
TracedElement transform(const DifferenceSequence& d, const std::vector<TracedElement>& xi);

struct SquarePair {
    TracedElement column;  // sum of d_k* d_k
    TracedElement row;     // sum of d_k d_k*
};
SquarePair square_functions(const DifferenceSequence& d);

std::vector<TracedElement> stein_map(const std::vector<TracedElement>& xs, const Filtration& F);

/// Sum of E_k a_k for positive a_k (eigenvalues below -1e-8 are rejected).
TracedElement dual_doob_sum(const std::vector<TracedElement>& as, const Filtration& F);

/// Sum of x_k tensor e_{k0} in A tensor M_K. The square identity
/// |sum|^2 = (sum of x_k* x_k) tensor e_00 is asserted on every call.
TracedElement column_embed(const std::vector<TracedElement>& xs);

struct GundyParts {
    TracedElement alpha, beta, gamma, delta;
};

struct GundyReport {
    double c_alpha = 0.0;  // |alpha|_2^2 / (lambda |x|_1)
    double c_beta = 0.0;   // sum |beta_k|_1 / |x|_1
    double c_gamma = 0.0;  // tau(join supp |gamma_k|) * lambda / |x|_1
    double c_delta = 0.0;  // tau(join supp |delta_k*|) * lambda / |x|_1
    double reconstruction = 0.0;  // deviation of alpha+beta+gamma+delta from x
    bool within_bounds(double slack = 1e-9) const {
        return c_alpha <= 2.0 + slack && c_beta <= 4.0 + slack && c_gamma <= 1.0 + slack &&
               c_delta <= 1.0 + slack;
    }
};

struct GundyResult {
    GundyParts parts;
    GundyReport report;
};

/// Four-part decomposition of a self-adjoint x at threshold lambda, built
/// from the spectral stopping projections of the martingale E_k x (first
/// level where the compressed martingale exceeds lambda). The report carries
/// the measured constants; the reconstruction x = alpha+beta+gamma+delta is
/// exact by construction.
GundyResult gundy_decompose(const TracedElement& x, const Filtration& F, double lambda);

}  // namespace ncdist
