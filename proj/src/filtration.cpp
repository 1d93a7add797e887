#include "ncdist/filtration.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ncdist/rng.hpp"

namespace ncdist {

namespace {

void check_partition(const Partition& part, int n_blocks) {
    std::vector<int> seen(static_cast<std::size_t>(n_blocks), 0);
    for (const auto& cell : part) {
        if (cell.empty()) throw std::invalid_argument("filtration: empty partition cell");
        for (int i : cell) {
            if (i < 0 || i >= n_blocks) throw std::invalid_argument("filtration: cell index out of range");
            if (seen[static_cast<std::size_t>(i)]++)
                throw std::invalid_argument("filtration: partition cells overlap");
        }
    }
    for (int c : seen)
        if (!c) throw std::invalid_argument("filtration: partition does not cover all blocks");
}

std::vector<int> cell_ids(const Partition& part, int n_blocks) {
    std::vector<int> id(static_cast<std::size_t>(n_blocks), -1);
    for (std::size_t c = 0; c < part.size(); ++c)
        for (int i : part[c]) id[static_cast<std::size_t>(i)] = static_cast<int>(c);
    return id;
}

}  // namespace

Filtration Filtration::atomic(TracedAlgebra alg, std::vector<Partition> levels) {
    if (levels.empty()) throw std::invalid_argument("filtration: at least one level required");
    const int nb = alg.block_count();
    for (const Partition& p : levels) check_partition(p, nb);
    // each level must refine the previous one
    for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
        std::vector<int> coarse = cell_ids(levels[k], nb);
        for (const auto& cell : levels[k + 1]) {
            int id = coarse[static_cast<std::size_t>(cell.front())];
            for (int i : cell)
                if (coarse[static_cast<std::size_t>(i)] != id)
                    throw std::invalid_argument("filtration: partitions must refine downward");
        }
    }
    Filtration f;
    f.kind_ = Kind::AtomicPartition;
    f.alg_ = std::move(alg);
    f.partitions_ = std::move(levels);
    return f;
}

Filtration Filtration::corner(TracedAlgebra alg, std::vector<int> cuts) {
    if (alg.block_count() != 1)
        throw std::invalid_argument("corner filtration: single-block algebra required");
    if (cuts.empty()) throw std::invalid_argument("corner filtration: cuts required");
    int prev = 0;
    for (int c : cuts) {
        if (c <= prev) throw std::invalid_argument("corner filtration: cuts must increase");
        prev = c;
    }
    if (cuts.back() != alg.dim(0))
        throw std::invalid_argument("corner filtration: last cut must equal the block dim");
    Filtration f;
    f.kind_ = Kind::CornerBlock;
    f.alg_ = std::move(alg);
    f.cuts_ = std::move(cuts);
    return f;
}

Filtration Filtration::tensor_cuts(const std::vector<TracedAlgebra>& factors,
                                   std::vector<int> prefixes) {
    if (factors.empty()) throw std::invalid_argument("tensor filtration: factors required");
    Filtration f;
    f.kind_ = Kind::TensorCut;
    TracedAlgebra acc = factors.front();
    f.factor_dims_.push_back(factors.front().dim(0));
    f.factor_weights_.push_back(factors.front().weight(0));
    for (std::size_t i = 1; i < factors.size(); ++i) {
        if (factors[i].block_count() != 1)
            throw std::invalid_argument("tensor filtration: factors must be single blocks");
        acc = acc.tensor(factors[i]);
        f.factor_dims_.push_back(factors[i].dim(0));
        f.factor_weights_.push_back(factors[i].weight(0));
    }
    if (factors.front().block_count() != 1)
        throw std::invalid_argument("tensor filtration: factors must be single blocks");
    if (prefixes.empty()) throw std::invalid_argument("tensor filtration: prefixes required");
    int prev = -1;
    for (int p : prefixes) {
        if (p <= prev || p > static_cast<int>(factors.size()))
            throw std::invalid_argument("tensor filtration: prefixes must increase within range");
        prev = p;
    }
    f.alg_ = std::move(acc);
    f.prefixes_ = std::move(prefixes);
    return f;
}

int Filtration::levels() const {
    switch (kind_) {
        case Kind::AtomicPartition:
            return static_cast<int>(partitions_.size());
        case Kind::CornerBlock:
            return static_cast<int>(cuts_.size());
        case Kind::TensorCut:
            return static_cast<int>(prefixes_.size());
    }
    return 0;
}

bool Filtration::last_level_full() const {
    switch (kind_) {
        case Kind::AtomicPartition: {
            if (partitions_.back().size() != static_cast<std::size_t>(alg_.block_count()))
                return false;
            for (int j = 0; j < alg_.block_count(); ++j)
                if (alg_.dim(j) != 1) return false;
            return true;
        }
        case Kind::CornerBlock:
            return true;  // last cut equals the dim by construction
        case Kind::TensorCut:
            return prefixes_.back() == static_cast<int>(factor_dims_.size());
    }
    return false;
}

std::string Filtration::describe() const {
    switch (kind_) {
        case Kind::AtomicPartition:
            return "atomic(levels=" + std::to_string(partitions_.size()) +
                   ",atoms=" + std::to_string(alg_.block_count()) + ")";
        case Kind::CornerBlock:
            return "corner(cuts=" + std::to_string(cuts_.size()) +
                   ",dim=" + std::to_string(alg_.dim(0)) + ")";
        case Kind::TensorCut:
            return "tensor(factors=" + std::to_string(factor_dims_.size()) +
                   ",levels=" + std::to_string(prefixes_.size()) + ")";
    }
    return "";
}

TracedElement Filtration::cond_exp(int level, const TracedElement& x) const {
    if (level < 0 || level >= levels())
        throw std::invalid_argument("cond_exp: level out of range");
    if (!(x.algebra() == alg_))
        throw std::invalid_argument("cond_exp: element algebra mismatch");

    switch (kind_) {
        case Kind::AtomicPartition: {
            TracedElement out = TracedElement::zero(alg_);
            for (const auto& cell : partitions_[static_cast<std::size_t>(level)]) {
                Complex num = 0.0;
                double den = 0.0;
                for (int j : cell) {
                    num += alg_.weight(j) * x.block(j).trace();
                    den += alg_.weight(j) * alg_.dim(j);
                }
                Complex avg = num / den;
                for (int j : cell)
                    out.block(j) = avg * Matrix::Identity(alg_.dim(j), alg_.dim(j));
            }
            return out;
        }
        case Kind::CornerBlock: {
            const int n = alg_.dim(0);
            const int corner = cuts_[static_cast<std::size_t>(level)];
            const Matrix& m = x.block(0);
            Matrix out = Matrix::Zero(n, n);
            out.topLeftCorner(corner, corner) = m.topLeftCorner(corner, corner);
            int lo = corner;
            for (std::size_t l = static_cast<std::size_t>(level) + 1; l < cuts_.size(); ++l) {
                int hi = cuts_[l];
                out.block(lo, lo, hi - lo, hi - lo) = m.block(lo, lo, hi - lo, hi - lo);
                lo = hi;
            }
            return TracedElement(alg_, {out});
        }
        case Kind::TensorCut: {
            const int k = prefixes_[static_cast<std::size_t>(level)];
            long pre = 1, post = 1;
            for (std::size_t i = 0; i < factor_dims_.size(); ++i)
                (static_cast<int>(i) < k ? pre : post) *= factor_dims_[i];
            const Matrix& m = x.block(0);
            Matrix tr = Matrix::Zero(pre, pre);
            for (long a = 0; a < pre; ++a)
                for (long c = 0; c < pre; ++c) {
                    Complex s = 0.0;
                    for (long b = 0; b < post; ++b) s += m(a * post + b, c * post + b);
                    tr(a, c) = s / static_cast<double>(post);
                }
            Matrix out = Matrix::Zero(pre * post, pre * post);
            for (long a = 0; a < pre; ++a)
                for (long c = 0; c < pre; ++c)
                    for (long b = 0; b < post; ++b) out(a * post + b, c * post + b) = tr(a, c);
            return TracedElement(alg_, {out});
        }
    }
    throw std::logic_error("cond_exp: unreachable");
}

namespace {

double max_diff(const TracedElement& a, const TracedElement& b) {
    double d = 0.0;
    for (int j = 0; j < a.algebra().block_count(); ++j)
        d = std::max(d, (a.block(j) - b.block(j)).cwiseAbs().maxCoeff());
    return d;
}

}  // namespace

AxiomReport validate(const Filtration& F, std::uint64_t seed, int elements_per_level, double tol) {
    AxiomReport rep;
    const TracedElement* current = nullptr;
    auto record = [&rep, &current](const std::string& axiom, int level, double dev,
                                   double budget) {
        rep.worst = std::max(rep.worst, dev / std::max(budget, 1e-300));
        if (dev > budget) {
            rep.pass = false;
            rep.failures.push_back({axiom, level, dev, current ? *current : TracedElement()});
        }
    };
    Rng rng(seed);
    const TracedAlgebra& alg = F.algebra();
    const TracedElement one = TracedElement::identity(alg);

    for (int k = 0; k < F.levels(); ++k) {
        for (int rep_i = 0; rep_i < elements_per_level; ++rep_i) {
            TracedElement x = rng.gaussian_element(alg);
            TracedElement y = rng.gaussian_element(alg);
            current = &x;
            double sc = std::max(1.0, x.max_abs());

            // (a) adjoint compatibility
            record("adjoint", k, max_diff(F.cond_exp(k, x.adjoint()), F.cond_exp(k, x).adjoint()),
                   tol * sc);
            // (b) positivity
            TracedElement pos = x.adjoint() * x;
            record("positivity", k, std::max(0.0, -min_eigenvalue(F.cond_exp(k, pos))),
                   tol * std::max(1.0, pos.max_abs()));
            // (d) fixed points and unitality
            TracedElement ex = F.cond_exp(k, x);
            record("idempotent", k, max_diff(F.cond_exp(k, ex), ex), tol * sc);
            record("unital", k, max_diff(F.cond_exp(k, one), one), tol);
            // (e) Kadison-Schwarz
            TracedElement ks = F.cond_exp(k, x.adjoint() * x) - ex.adjoint() * ex;
            record("kadison-schwarz", k, std::max(0.0, -min_eigenvalue(ks)),
                   tol * std::max(1.0, pos.max_abs()));
            // (f) trace preservation
            record("trace", k, std::abs(F.cond_exp(k, x).trace() - x.trace()), tol * sc);
            // (g) L1 and Linf contractivity via mu
            StepFunction mx = mu(x), mex = mu(ex);
            record("l1-contraction", k,
                   std::max(0.0, mex.total_integral() - mx.total_integral()),
                   tol * std::max(1.0, mx.total_integral()));
            record("linf-contraction", k, std::max(0.0, mex.sup_value() - mx.sup_value()),
                   tol * std::max(1.0, mx.sup_value()));
            // (h) bimodularity over level-k elements
            TracedElement a = F.cond_exp(k, y);
            record("bimodular-left", k, max_diff(F.cond_exp(k, a * x), a * F.cond_exp(k, x)),
                   tol * std::max(1.0, (a * x).max_abs()));
            record("bimodular-right", k, max_diff(F.cond_exp(k, x * a), F.cond_exp(k, x) * a),
                   tol * std::max(1.0, (x * a).max_abs()));
            // tower law against every other level
            for (int l = 0; l < F.levels(); ++l) {
                TracedElement lhs = F.cond_exp(k, F.cond_exp(l, x));
                TracedElement rhs = F.cond_exp(std::min(k, l), x);
                record("tower", k, max_diff(lhs, rhs), tol * sc);
            }
        }
    }
    return rep;
}

}  // namespace ncdist
