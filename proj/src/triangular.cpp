#include "ncdist/triangular.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ncdist/log_poly.hpp"

namespace ncdist {

namespace {

std::vector<int> band_of(const std::vector<int>& cuts, int n) {
    std::vector<int> band(static_cast<std::size_t>(n));
    int b = 0, lo = 0;
    for (int c : cuts) {
        for (int i = lo; i < c; ++i) band[static_cast<std::size_t>(i)] = b;
        lo = c;
        ++b;
    }
    return band;
}

}  // namespace

TracedElement truncate(const TracedElement& a, TruncationMode mode,
                       const std::vector<int>& cuts) {
    if (a.algebra().block_count() != 1)
        throw std::invalid_argument("truncate: single-block element required");
    const Matrix& m = a.block(0);
    if (m.rows() != m.cols()) throw std::invalid_argument("truncate: square block required");
    const int n = static_cast<int>(m.rows());
    Matrix out = Matrix::Zero(n, n);
    if (mode == TruncationMode::strict_upper) {
        for (int r = 0; r < n; ++r)
            for (int c = r + 1; c < n; ++c) out(r, c) = m(r, c);
    } else {
        if (cuts.empty() || cuts.back() != n)
            throw std::invalid_argument("truncate: block cuts must end at the dimension");
        std::vector<int> band = band_of(cuts, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                if (band[static_cast<std::size_t>(r)] <= band[static_cast<std::size_t>(c)])
                    out(r, c) = m(r, c);
    }
    return TracedElement(a.algebra(), {out});
}

CornerSplit corner_split(const TracedElement& a, const std::vector<int>& cuts, double tol) {
    Filtration F = Filtration::corner(a.algebra(), cuts);
    const Matrix& m = a.block(0);
    const int n = static_cast<int>(m.rows());

    CornerSplit out;
    int lo = 0;
    for (int c : cuts) {
        Matrix col = Matrix::Zero(n, n);
        col.middleCols(lo, c - lo) = m.middleCols(lo, c - lo);
        out.columns.emplace_back(a.algebra(), std::vector<Matrix>{col});
        lo = c;
    }
    for (std::size_t k = 0; k < out.columns.size(); ++k)
        out.compressed.push_back(F.cond_exp(static_cast<int>(k), out.columns[k]));
    out.truncated = truncate(a, TruncationMode::block_upper, cuts);

    // accumulate the row sums through the column bands (the zero columns of
    // a_k contribute nothing, so each product is n x w times w x n)
    Matrix row_sum = Matrix::Zero(n, n);
    Matrix row_sum_c = Matrix::Zero(n, n);
    lo = 0;
    for (std::size_t k = 0; k < out.columns.size(); ++k) {
        int c = cuts[k];
        auto band = out.columns[k].block(0).middleCols(lo, c - lo);
        row_sum += band * band.adjoint();
        auto corner = out.compressed[k].block(0).block(0, lo, c, c - lo);
        row_sum_c.topLeftCorner(c, c) += corner * corner.adjoint();
        lo = c;
    }
    TracedElement full = a * a.adjoint();
    TracedElement trunc = out.truncated * out.truncated.adjoint();
    double scale = std::max(1.0, full.max_abs());
    out.identity_deviation =
        std::max((row_sum - full.block(0)).cwiseAbs().maxCoeff(),
                 (row_sum_c - trunc.block(0)).cwiseAbs().maxCoeff()) /
        scale;
    if (out.identity_deviation > tol)
        throw internal_error("corner_split: algebraic identity failed");

    out.mu_row_sum = mu(TracedElement(a.algebra(), {row_sum})).power(0.5);
    out.mu_row_sum_compressed = mu(TracedElement(a.algebra(), {row_sum_c})).power(0.5);
    return out;
}

TracedElement hilbert_surrogate(int n) {
    if (n < 2) throw std::invalid_argument("hilbert_surrogate: n must be >= 2");
    Matrix m(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) m(r, c) = r == c ? 0.0 : 1.0 / static_cast<double>(r - c);
    return TracedElement(TracedAlgebra::single(n, 1.0), {m});
}

GrowthRecord hilbert_demo(const std::vector<int>& sizes) {
    GrowthRecord rec;
    for (int n : sizes) {
        TracedElement a = hilbert_surrogate(n);
        rec.sizes.push_back(n);
        rec.opnorm_full.push_back(norm_op(a));
        rec.opnorm_truncated.push_back(norm_op(truncate(a, TruncationMode::strict_upper)));
    }
    // least squares fit of the normalized truncated norm against log n; the
    // raw truncated norm grows like the harmonic sum (slope about 1), the
    // ratio to the full norm isolates the reciprocal-pi mechanism
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(rec.sizes.size());
    for (std::size_t i = 0; i < rec.sizes.size(); ++i) {
        double x = std::log(static_cast<double>(rec.sizes[i]));
        double y = rec.opnorm_truncated[i] / rec.opnorm_full[i];
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    rec.slope = (m * sxy - sx * sy) / std::max(m * sxx - sx * sx, 1e-300);
    return rec;
}

std::string GrowthRecord::to_csv() const {
    std::ostringstream os;
    os << "n,opnorm_full,opnorm_truncated,log_n\n";
    os.precision(17);
    for (std::size_t i = 0; i < sizes.size(); ++i)
        os << sizes[i] << ',' << opnorm_full[i] << ',' << opnorm_truncated[i] << ','
           << std::log(static_cast<double>(sizes[i])) << '\n';
    return os.str();
}

}  // namespace ncdist
