#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ncdist/algebra.hpp"

namespace ncdist {

using Partition = std::vector<std::vector<int>>;  // cells of block indices

/// An increasing chain of subalgebras of a traced algebra, each carrying a
/// trace-preserving conditional expectation:
///  - AtomicPartition: cells of blocks; E averages the weighted block traces
///    over each cell (the commutative model when every block has dim 1);
///  - CornerBlock: growing corners of one n x n block, with the complement
///    pinched to band diagonal; the last cut must equal n;
///  - TensorCut: growing prefixes of a tensor product of single-block
///    factors; E is identity on the prefix tensored with the normalized
///    partial trace of the rest (prefix 0 means the scalars).
class Filtration {
public:
    enum class Kind { AtomicPartition, CornerBlock, TensorCut };

    static Filtration atomic(TracedAlgebra alg, std::vector<Partition> levels);
    static Filtration corner(TracedAlgebra alg, std::vector<int> cuts);
    static Filtration tensor_cuts(const std::vector<TracedAlgebra>& factors,
                                  std::vector<int> prefixes);

    Kind kind() const { return kind_; }
    const TracedAlgebra& algebra() const { return alg_; }
    int levels() const;
    /// True when the top level is the whole algebra (exact telescoping).
    bool last_level_full() const;
    std::string describe() const;

    TracedElement cond_exp(int level, const TracedElement& x) const;

private:
    Kind kind_ = Kind::AtomicPartition;
    TracedAlgebra alg_;
    std::vector<Partition> partitions_;   // AtomicPartition
    std::vector<int> cuts_;               // CornerBlock
    std::vector<int> factor_dims_;        // TensorCut
    std::vector<double> factor_weights_;  // TensorCut
    std::vector<int> prefixes_;           // TensorCut
};

struct AxiomFailure {
    std::string axiom;
    int level = 0;
    double deviation = 0.0;
    TracedElement witness;  // the element that exposed the failure
};

struct AxiomReport {
    bool pass = true;
    std::vector<AxiomFailure> failures;
    double worst = 0.0;
};

/// Randomized check of the conditional expectation axioms: adjoint
/// compatibility, positivity, fixed points, the Kadison-Schwarz inequality,
/// trace preservation, L1/Linf contractivity via the singular value function,
/// bimodularity, and the tower law. Returns failures instead of throwing.
AxiomReport validate(const Filtration& F, std::uint64_t seed, int elements_per_level = 8,
                     double tol = 1e-10);

}  // namespace ncdist
