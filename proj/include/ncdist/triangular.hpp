#pragma once

#include <vector>

#include "ncdist/algebra.hpp"
#include "ncdist/filtration.hpp"
#include "ncdist/step_function.hpp"

namespace ncdist {

enum class TruncationMode { strict_upper, block_upper };

/// Strict upper truncation zeroes entries at or below the diagonal; block
/// upper truncation keeps block (k, l) iff k <= l for the given cuts
/// (the block diagonal included).
TracedElement truncate(const TracedElement& a, TruncationMode mode,
                       const std::vector<int>& cuts = {});

struct CornerSplit {
    std::vector<TracedElement> columns;      // a_k = a (p_{k+1} - p_k)
    std::vector<TracedElement> compressed;   // E_k(a_k)
    TracedElement truncated;                 // block upper part of a
    StepFunction mu_row_sum;                 // mu of (sum a_k a_k*)^{1/2} = mu(|a*|)
    StepFunction mu_row_sum_compressed;      // mu of (sum E_k(a_k) E_k(a_k)*)^{1/2}
    double identity_deviation = 0.0;
};

/// Splits a into column blocks along the cuts, applies the corner-filtration
/// expectations and asserts the two algebraic identities
///   sum a_k a_k* = a a*   and   sum E_k(a_k) E_k(a_k)* = P(a) P(a)*
/// (internal error on failure; they hold by algebra).
CornerSplit corner_split(const TracedElement& a, const std::vector<int>& cuts, double tol = 1e-10);

struct GrowthRecord {
    std::vector<int> sizes;
    std::vector<double> opnorm_full;
    std::vector<double> opnorm_truncated;
    // least squares slope of opnorm_truncated / opnorm_full against log n
    double slope = 0.0;
    std::string to_csv() const;
};

/// Antisymmetric surrogate with entries 1/(i - j) off the diagonal.
TracedElement hilbert_surrogate(int n);

/// Demonstrates the logarithmic growth of strict triangular truncation on
/// the surrogate family.
GrowthRecord hilbert_demo(const std::vector<int>& sizes);

}  // namespace ncdist
