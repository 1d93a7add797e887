#include "ncdist/martingale.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "ncdist/log_poly.hpp"

namespace ncdist {

namespace {

double max_diff(const TracedElement& a, const TracedElement& b) {
    double d = 0.0;
    for (int j = 0; j < a.algebra().block_count(); ++j)
        d = std::max(d, (a.block(j) - b.block(j)).cwiseAbs().maxCoeff());
    return d;
}

}  // namespace

double DifferenceSequence::defect(double) const {
    double worst = 0.0;
    for (std::size_t k = 0; k < d.size(); ++k) {
        double sc = std::max(1.0, d[k].max_abs());
        int lvl = static_cast<int>(k);
        worst = std::max(worst, max_diff(filtration->cond_exp(lvl, d[k]), d[k]) / sc);
        if (k > 0) {
            TracedElement prev = filtration->cond_exp(lvl - 1, d[k]);
            worst = std::max(worst, prev.max_abs() / sc);
        }
    }
    return worst;
}

DifferenceSequence differences(const TracedElement& x, const Filtration& F) {
    DifferenceSequence seq;
    seq.filtration = &F;
    TracedElement prev = TracedElement::zero(F.algebra());
    for (int k = 0; k < F.levels(); ++k) {
        TracedElement cur = F.cond_exp(k, x);
        seq.d.push_back(cur - prev);
        prev = cur;
    }
    return seq;
}

TracedElement transform(const DifferenceSequence& d, const std::vector<int>& signs) {
    if (signs.size() != d.d.size())
        throw std::invalid_argument("transform: one sign per difference required");
    TracedElement out = TracedElement::zero(d.filtration->algebra());
    for (std::size_t k = 0; k < d.d.size(); ++k) {
        if (signs[k] != 1 && signs[k] != -1)
            throw std::invalid_argument("transform: signs must be +1 or -1");
        out = out + d.d[k].scaled(static_cast<double>(signs[k]));
    }
    return out;
}

TracedElement transform(const DifferenceSequence& d, const std::vector<TracedElement>& xi) {
    if (xi.size() != d.d.size())
        throw std::invalid_argument("transform: one multiplier per difference required");
    if (xi.empty()) throw std::invalid_argument("transform: empty sequence");
    const TracedAlgebra& aux = xi.front().algebra();
    double unit = aux.trace_of_identity();
    if (std::abs(unit - 1.0) > 1e-12)
        throw std::invalid_argument("transform: auxiliary algebra must have unit trace");
    TracedElement out = d.d.front().tensor(xi.front());
    for (std::size_t k = 1; k < d.d.size(); ++k) {
        if (!(xi[k].algebra() == aux))
            throw std::invalid_argument("transform: multipliers live in different algebras");
        out = out + d.d[k].tensor(xi[k]);
    }
    return out;
}

SquarePair square_functions(const DifferenceSequence& d) {
    TracedElement col = TracedElement::zero(d.filtration->algebra());
    TracedElement row = col;
    for (const TracedElement& dk : d.d) {
        col = col + dk.adjoint() * dk;
        row = row + dk * dk.adjoint();
    }
    return {col, row};
}

std::vector<TracedElement> stein_map(const std::vector<TracedElement>& xs, const Filtration& F) {
    if (static_cast<int>(xs.size()) > F.levels())
        throw std::invalid_argument("stein_map: more elements than levels");
    std::vector<TracedElement> out;
    out.reserve(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k)
        out.push_back(F.cond_exp(static_cast<int>(k), xs[k]));
    return out;
}

TracedElement dual_doob_sum(const std::vector<TracedElement>& as, const Filtration& F) {
    if (static_cast<int>(as.size()) > F.levels())
        throw std::invalid_argument("dual_doob_sum: more elements than levels");
    TracedElement out = TracedElement::zero(F.algebra());
    for (std::size_t k = 0; k < as.size(); ++k) {
        double sc = std::max(1.0, as[k].max_abs());
        if (min_eigenvalue(as[k]) < -1e-8 * sc)
            throw std::invalid_argument("dual_doob_sum: summand is not positive");
        out = out + F.cond_exp(static_cast<int>(k), as[k]);
    }
    return out;
}

TracedElement column_embed(const std::vector<TracedElement>& xs) {
    if (xs.empty()) throw std::invalid_argument("column_embed: empty list");
    const TracedAlgebra& A = xs.front().algebra();
    const int K = static_cast<int>(xs.size());
    TracedAlgebra MK = TracedAlgebra::single(K, 1.0);
    TracedElement out = TracedElement::zero(A.tensor(MK));
    TracedElement colsum = TracedElement::zero(A);
    for (int k = 0; k < K; ++k) {
        if (!(xs[static_cast<std::size_t>(k)].algebra() == A))
            throw std::invalid_argument("column_embed: common algebra required");
        Matrix unit = Matrix::Zero(K, K);
        unit(k, 0) = 1.0;
        out = out + xs[static_cast<std::size_t>(k)].tensor(TracedElement(MK, {unit}));
        colsum = colsum + xs[static_cast<std::size_t>(k)].adjoint() * xs[static_cast<std::size_t>(k)];
    }
    // |sum x_k tensor e_k0|^2 collapses onto the 00 corner
    Matrix corner = Matrix::Zero(K, K);
    corner(0, 0) = 1.0;
    TracedElement expected = colsum.tensor(TracedElement(MK, {corner}));
    double dev = max_diff(out.adjoint() * out, expected);
    if (dev > 1e-10 * std::max(1.0, expected.max_abs()))
        throw internal_error("column_embed: square identity failed");
    return out;
}

namespace {

// q_prev minus the spectral projection of q_prev x q_prev onto |eigenvalue| > lambda.
TracedElement shrink_projection(const TracedElement& q_prev, const TracedElement& compressed,
                                double lambda) {
    std::vector<Matrix> bs;
    for (int j = 0; j < compressed.algebra().block_count(); ++j) {
        const Matrix& m = compressed.block(j);
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()));
        Matrix high = Matrix::Zero(m.rows(), m.cols());
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
            if (std::abs(es.eigenvalues()[i]) > lambda) {
                auto v = es.eigenvectors().col(i);
                high += v * v.adjoint();
            }
        }
        bs.push_back(q_prev.block(j) - high);
    }
    return TracedElement(compressed.algebra(), std::move(bs));
}

// Trace of the join of the column spaces of the given elements. The rank
// cutoff is relative to the largest entry across all blocks, so blocks that
// hold nothing but rounding residue contribute nothing.
double support_join_trace(const std::vector<TracedElement>& parts) {
    if (parts.empty()) return 0.0;
    const TracedAlgebra& alg = parts.front().algebra();
    double scale = 0.0;
    for (const TracedElement& p : parts) scale = std::max(scale, p.max_abs());
    if (scale == 0.0) return 0.0;
    const double cutoff = 1e-8 * scale;
    double total = 0.0;
    for (int j = 0; j < alg.block_count(); ++j) {
        const int n = alg.dim(j);
        Matrix stack(n, n * static_cast<Eigen::Index>(parts.size()));
        for (std::size_t k = 0; k < parts.size(); ++k)
            stack.block(0, static_cast<Eigen::Index>(k) * n, n, n) = parts[k].block(j);
        Eigen::JacobiSVD<Matrix> svd(stack);
        int rank = 0;
        for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
            if (svd.singularValues()[i] > cutoff) ++rank;
        total += alg.weight(j) * rank;
    }
    return total;
}

}  // namespace

GundyResult gundy_decompose(const TracedElement& x, const Filtration& F, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("gundy: lambda must be > 0");
    if (!x.is_hermitian(1e-12)) throw std::invalid_argument("gundy: x must be self-adjoint");
    if (!F.last_level_full())
        throw std::invalid_argument("gundy: filtration must end at the full algebra");

    const TracedAlgebra& alg = F.algebra();
    const int K = F.levels();
    const TracedElement one = TracedElement::identity(alg);

    DifferenceSequence seq = differences(x, F);

    GundyResult res;
    res.parts = {TracedElement::zero(alg), TracedElement::zero(alg), TracedElement::zero(alg),
                 TracedElement::zero(alg)};

    TracedElement q_prev = one;
    TracedElement x_k = TracedElement::zero(alg);
    for (int k = 0; k < K; ++k) {
        const TracedElement& dk = seq.d[static_cast<std::size_t>(k)];
        x_k = x_k + dk;
        TracedElement q_k = shrink_projection(q_prev, q_prev * x_k * q_prev, lambda);

        TracedElement one_minus_qprev = one - q_prev;
        TracedElement gamma_k = dk * one_minus_qprev;
        TracedElement delta_k = one_minus_qprev * dk * q_prev;
        TracedElement m_k = q_prev * dk * q_prev;
        TracedElement inner = q_k * m_k * q_k;
        TracedElement jump = m_k - inner;
        if (k > 0) {
            // compensate so that alpha and beta stay martingales
            TracedElement ci = F.cond_exp(k - 1, inner);
            TracedElement cj = F.cond_exp(k - 1, jump);
            res.parts.alpha = res.parts.alpha + (inner - ci);
            res.parts.beta = res.parts.beta + (jump - cj);
        } else {
            res.parts.alpha = res.parts.alpha + inner;
            res.parts.beta = res.parts.beta + jump;
        }
        res.parts.gamma = res.parts.gamma + gamma_k;
        res.parts.delta = res.parts.delta + delta_k;
        q_prev = q_k;
    }

    // measured constants; the property report, not the construction, is the contract
    double x1 = norm_lp(x, 1.0);
    GundyReport& rep = res.report;
    TracedElement recon =
        res.parts.alpha + res.parts.beta + res.parts.gamma + res.parts.delta;
    rep.reconstruction = max_diff(recon, x);

    if (x1 > 0.0) {
        double a2 = norm_lp(res.parts.alpha, 2.0);
        rep.c_alpha = a2 * a2 / (lambda * x1);
        DifferenceSequence beta_d = differences(res.parts.beta, F);
        double bsum = 0.0;
        for (const TracedElement& bk : beta_d.d) bsum += norm_lp(bk, 1.0);
        rep.c_beta = bsum / x1;
        DifferenceSequence gamma_d = differences(res.parts.gamma, F);
        DifferenceSequence delta_d = differences(res.parts.delta, F);
        std::vector<TracedElement> gstars, dparts;
        for (const TracedElement& gk : gamma_d.d) gstars.push_back(gk.adjoint());
        for (const TracedElement& dk : delta_d.d) dparts.push_back(dk);
        rep.c_gamma = support_join_trace(gstars) * lambda / x1;
        rep.c_delta = support_join_trace(dparts) * lambda / x1;
    }
    return res;
}

}  // namespace ncdist
