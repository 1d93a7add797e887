#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ncdist/step_function.hpp"

namespace ncdist {

using Matrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

struct AlgebraBlock {
    int dim = 1;
    double weight = 1.0;
};

/// Finite model of a semifinite traced algebra: a direct sum of full matrix
/// blocks with positive weights. The trace of an element is the weighted sum
/// of the blockwise matrix traces.
class TracedAlgebra {
public:
    TracedAlgebra() = default;
    explicit TracedAlgebra(std::vector<AlgebraBlock> blocks);

    static TracedAlgebra single(int dim, double weight = 1.0);
    static TracedAlgebra atoms(std::vector<double> weights);  // dim-1 blocks

    const std::vector<AlgebraBlock>& blocks() const { return blocks_; }
    int block_count() const { return static_cast<int>(blocks_.size()); }
    int dim(int j) const { return blocks_[static_cast<std::size_t>(j)].dim; }
    double weight(int j) const { return blocks_[static_cast<std::size_t>(j)].weight; }
    double trace_of_identity() const;

    TracedAlgebra tensor(const TracedAlgebra& other) const;
    TracedAlgebra with_weights_scaled(double c) const;

    bool operator==(const TracedAlgebra& other) const;

private:
    std::vector<AlgebraBlock> blocks_;
};

class TracedElement {
public:
    TracedElement() = default;
    TracedElement(TracedAlgebra alg, std::vector<Matrix> blocks);

    static TracedElement zero(const TracedAlgebra& alg);
    static TracedElement identity(const TracedAlgebra& alg);
    /// Diagonal element of an all-atoms algebra.
    static TracedElement diagonal(const TracedAlgebra& alg, const std::vector<double>& values);

    const TracedAlgebra& algebra() const { return alg_; }
    const std::vector<Matrix>& blocks() const { return blocks_; }
    Matrix& block(int j) { return blocks_[static_cast<std::size_t>(j)]; }
    const Matrix& block(int j) const { return blocks_[static_cast<std::size_t>(j)]; }

    Complex trace() const;
    TracedElement adjoint() const;
    TracedElement tensor(const TracedElement& other) const;
    TracedElement rebase(const TracedAlgebra& alg) const;  // same dims, new weights

    TracedElement operator+(const TracedElement&) const;
    TracedElement operator-(const TracedElement&) const;
    TracedElement operator*(const TracedElement&) const;  // blockwise product
    TracedElement scaled(Complex c) const;

    bool is_hermitian(double tol = 1e-12) const;
    double max_abs() const;

    std::string to_json() const;
    static TracedElement from_json(const std::string& text);

private:
    TracedAlgebra alg_;
    std::vector<Matrix> blocks_;
};

/// Singular values of one matrix, descending.
std::vector<double> singular_values(const Matrix& m);

/// The singular value function: each singular value of block j contributes a
/// piece of that block's weight.
StepFunction mu(const TracedElement& x);

double norm_lp(const TracedElement& x, double p);  // (tau |x|^p)^{1/p}; p = inf allowed
double norm_op(const TracedElement& x);            // operator norm

TracedElement abs_of(const TracedElement& x);    // |x| = (x* x)^{1/2}
TracedElement sqrt_psd(const TracedElement& x);  // hermitian square root, clips tiny negatives

/// f applied to a hermitian element by eigendecomposition; the input is
/// symmetrized through (x + x*)/2 after a 1e-12 asymmetry guard.
TracedElement herm_apply(const TracedElement& x, const std::function<double(double)>& f);

double min_eigenvalue(const TracedElement& x);  // hermitian input

}  // namespace ncdist
