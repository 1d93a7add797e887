#include "ncdist/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <json.hpp>

namespace ncdist {

TracedAlgebra::TracedAlgebra(std::vector<AlgebraBlock> blocks) : blocks_(std::move(blocks)) {
    if (blocks_.empty()) throw std::invalid_argument("algebra: at least one block required");
    for (const AlgebraBlock& b : blocks_) {
        if (b.dim < 1) throw std::invalid_argument("algebra: block dim must be >= 1");
        if (!(b.weight > 0.0) || !std::isfinite(b.weight))
            throw std::invalid_argument("algebra: block weight must be positive and finite");
    }
}

TracedAlgebra TracedAlgebra::single(int dim, double weight) {
    return TracedAlgebra({{dim, weight}});
}

TracedAlgebra TracedAlgebra::atoms(std::vector<double> weights) {
    std::vector<AlgebraBlock> bs;
    bs.reserve(weights.size());
    for (double w : weights) bs.push_back({1, w});
    return TracedAlgebra(std::move(bs));
}

double TracedAlgebra::trace_of_identity() const {
    double s = 0.0;
    for (const AlgebraBlock& b : blocks_) s += b.weight * b.dim;
    return s;
}

TracedAlgebra TracedAlgebra::tensor(const TracedAlgebra& other) const {
    std::vector<AlgebraBlock> bs;
    bs.reserve(blocks_.size() * other.blocks_.size());
    for (const AlgebraBlock& a : blocks_)
        for (const AlgebraBlock& b : other.blocks_)
            bs.push_back({a.dim * b.dim, a.weight * b.weight});
    return TracedAlgebra(std::move(bs));
}

TracedAlgebra TracedAlgebra::with_weights_scaled(double c) const {
    if (!(c > 0.0)) throw std::invalid_argument("algebra: scale must be positive");
    std::vector<AlgebraBlock> bs = blocks_;
    for (AlgebraBlock& b : bs) b.weight *= c;
    return TracedAlgebra(std::move(bs));
}

bool TracedAlgebra::operator==(const TracedAlgebra& other) const {
    if (blocks_.size() != other.blocks_.size()) return false;
    for (std::size_t i = 0; i < blocks_.size(); ++i)
        if (blocks_[i].dim != other.blocks_[i].dim ||
            blocks_[i].weight != other.blocks_[i].weight)
            return false;
    return true;
}

TracedElement::TracedElement(TracedAlgebra alg, std::vector<Matrix> blocks)
    : alg_(std::move(alg)), blocks_(std::move(blocks)) {
    if (static_cast<int>(blocks_.size()) != alg_.block_count())
        throw std::invalid_argument("element: block count mismatch");
    for (int j = 0; j < alg_.block_count(); ++j) {
        const Matrix& m = blocks_[static_cast<std::size_t>(j)];
        if (m.rows() != alg_.dim(j) || m.cols() != alg_.dim(j))
            throw std::invalid_argument("element: block dimension mismatch");
        if (!m.allFinite()) throw std::invalid_argument("element: non-finite matrix entries");
    }
}

TracedElement TracedElement::zero(const TracedAlgebra& alg) {
    std::vector<Matrix> bs;
    for (int j = 0; j < alg.block_count(); ++j) bs.push_back(Matrix::Zero(alg.dim(j), alg.dim(j)));
    return TracedElement(alg, std::move(bs));
}

TracedElement TracedElement::identity(const TracedAlgebra& alg) {
    std::vector<Matrix> bs;
    for (int j = 0; j < alg.block_count(); ++j)
        bs.push_back(Matrix::Identity(alg.dim(j), alg.dim(j)));
    return TracedElement(alg, std::move(bs));
}

TracedElement TracedElement::diagonal(const TracedAlgebra& alg, const std::vector<double>& values) {
    if (static_cast<int>(values.size()) != alg.block_count())
        throw std::invalid_argument("diagonal: one value per atom required");
    std::vector<Matrix> bs;
    for (int j = 0; j < alg.block_count(); ++j) {
        if (alg.dim(j) != 1) throw std::invalid_argument("diagonal: atoms-only algebra required");
        bs.push_back(Matrix::Constant(1, 1, values[static_cast<std::size_t>(j)]));
    }
    return TracedElement(alg, std::move(bs));
}

Complex TracedElement::trace() const {
    Complex s = 0.0;
    for (int j = 0; j < alg_.block_count(); ++j)
        s += alg_.weight(j) * blocks_[static_cast<std::size_t>(j)].trace();
    return s;
}

TracedElement TracedElement::adjoint() const {
    std::vector<Matrix> bs;
    bs.reserve(blocks_.size());
    for (const Matrix& m : blocks_) bs.push_back(m.adjoint());
    return TracedElement(alg_, std::move(bs));
}

TracedElement TracedElement::tensor(const TracedElement& other) const {
    std::vector<Matrix> bs;
    for (const Matrix& a : blocks_)
        for (const Matrix& b : other.blocks_) {
            Matrix k(a.rows() * b.rows(), a.cols() * b.cols());
            for (Eigen::Index i = 0; i < a.rows(); ++i)
                for (Eigen::Index j = 0; j < a.cols(); ++j)
                    k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
            bs.push_back(std::move(k));
        }
    return TracedElement(alg_.tensor(other.alg_), std::move(bs));
}

TracedElement TracedElement::rebase(const TracedAlgebra& alg) const {
    return TracedElement(alg, blocks_);
}

namespace {
void check_same(const TracedAlgebra& a, const TracedAlgebra& b) {
    if (!(a == b)) throw std::invalid_argument("elements live in different algebras");
}
}  // namespace

TracedElement TracedElement::operator+(const TracedElement& o) const {
    check_same(alg_, o.alg_);
    std::vector<Matrix> bs;
    bs.reserve(blocks_.size());
    for (std::size_t j = 0; j < blocks_.size(); ++j) bs.push_back(blocks_[j] + o.blocks_[j]);
    return TracedElement(alg_, std::move(bs));
}

TracedElement TracedElement::operator-(const TracedElement& o) const {
    check_same(alg_, o.alg_);
    std::vector<Matrix> bs;
    bs.reserve(blocks_.size());
    for (std::size_t j = 0; j < blocks_.size(); ++j) bs.push_back(blocks_[j] - o.blocks_[j]);
    return TracedElement(alg_, std::move(bs));
}

TracedElement TracedElement::operator*(const TracedElement& o) const {
    check_same(alg_, o.alg_);
    std::vector<Matrix> bs;
    bs.reserve(blocks_.size());
    for (std::size_t j = 0; j < blocks_.size(); ++j) bs.push_back(blocks_[j] * o.blocks_[j]);
    return TracedElement(alg_, std::move(bs));
}

TracedElement TracedElement::scaled(Complex c) const {
    std::vector<Matrix> bs;
    bs.reserve(blocks_.size());
    for (const Matrix& m : blocks_) bs.push_back(c * m);
    return TracedElement(alg_, std::move(bs));
}

bool TracedElement::is_hermitian(double tol) const {
    for (const Matrix& m : blocks_) {
        double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
        if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol * scale) return false;
    }
    return true;
}

double TracedElement::max_abs() const {
    double s = 0.0;
    for (const Matrix& m : blocks_)
        if (m.size() > 0) s = std::max(s, m.cwiseAbs().maxCoeff());
    return s;
}

std::vector<double> singular_values(const Matrix& m) {
    const Eigen::Index n = m.rows();
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    double scale = n > 0 ? std::max(1.0, m.cwiseAbs().maxCoeff()) : 1.0;
    const double herm_tol = 1e-13 * scale;
    if (n > 128 && m.imag().cwiseAbs().maxCoeff() == 0.0) {
        // large real matrices (the demo sizes): eigenvalues of m^T m
        Eigen::MatrixXd r = m.real();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r.transpose() * r,
                                                          Eigen::EigenvaluesOnly);
        for (Eigen::Index i = 0; i < n; ++i)
            out.push_back(std::sqrt(std::max(es.eigenvalues()[i], 0.0)));
        std::sort(out.begin(), out.end(), std::greater<double>());
        return out;
    }
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() <= herm_tol) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()),
                                                 Eigen::EigenvaluesOnly);
        for (Eigen::Index i = 0; i < n; ++i) out.push_back(std::abs(es.eigenvalues()[i]));
    } else if ((m + m.adjoint()).cwiseAbs().maxCoeff() <= herm_tol) {
        // anti-hermitian: i m is hermitian with the same singular values
        Matrix im = Complex(0.0, 1.0) * m;
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (im + im.adjoint()),
                                                 Eigen::EigenvaluesOnly);
        for (Eigen::Index i = 0; i < n; ++i) out.push_back(std::abs(es.eigenvalues()[i]));
    } else if (n <= 128) {
        Eigen::JacobiSVD<Matrix> svd(m);
        for (Eigen::Index i = 0; i < n; ++i) out.push_back(svd.singularValues()[i]);
    } else {
        Eigen::BDCSVD<Matrix> svd(m);
        for (Eigen::Index i = 0; i < n; ++i) out.push_back(svd.singularValues()[i]);
    }
    std::sort(out.begin(), out.end(), std::greater<double>());
    return out;
}

StepFunction mu(const TracedElement& x) {
    std::vector<std::pair<double, double>> sv;  // (value, weight)
    for (int j = 0; j < x.algebra().block_count(); ++j) {
        double w = x.algebra().weight(j);
        for (double s : singular_values(x.block(j))) sv.emplace_back(s, w);
    }
    std::sort(sv.begin(), sv.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    std::vector<Piece> pieces;
    pieces.reserve(sv.size());
    for (const auto& [v, w] : sv) pieces.push_back({w, v});
    return StepFunction(std::move(pieces));
}

double norm_lp(const TracedElement& x, double p) {
    if (std::isinf(p)) return norm_op(x);
    if (!(p > 0.0)) throw std::invalid_argument("norm_lp: p must be > 0");
    double s = 0.0;
    for (int j = 0; j < x.algebra().block_count(); ++j) {
        double w = x.algebra().weight(j);
        for (double v : singular_values(x.block(j))) s += w * std::pow(v, p);
    }
    return std::pow(s, 1.0 / p);
}

double norm_op(const TracedElement& x) {
    double s = 0.0;
    for (int j = 0; j < x.algebra().block_count(); ++j) {
        auto sv = singular_values(x.block(j));
        if (!sv.empty()) s = std::max(s, sv.front());
    }
    return s;
}

TracedElement herm_apply(const TracedElement& x, const std::function<double(double)>& f) {
    if (!x.is_hermitian(1e-12))
        throw std::invalid_argument("herm_apply: element is not hermitian");
    std::vector<Matrix> bs;
    for (const Matrix& m : x.blocks()) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()));
        Eigen::VectorXd ev = es.eigenvalues();
        Eigen::VectorXd fe(ev.size());
        for (Eigen::Index i = 0; i < ev.size(); ++i) fe[i] = f(ev[i]);
        bs.push_back(es.eigenvectors() * fe.asDiagonal() * es.eigenvectors().adjoint());
    }
    return TracedElement(x.algebra(), std::move(bs));
}

TracedElement sqrt_psd(const TracedElement& x) {
    double scale = std::max(1.0, x.max_abs());
    return herm_apply(x, [scale](double v) {
        if (v < -1e-10 * scale)
            throw std::invalid_argument("sqrt_psd: negative eigenvalue beyond clip tolerance");
        return std::sqrt(std::max(v, 0.0));
    });
}

TracedElement abs_of(const TracedElement& x) { return sqrt_psd(x.adjoint() * x); }

double min_eigenvalue(const TracedElement& x) {
    if (!x.is_hermitian(1e-12))
        throw std::invalid_argument("min_eigenvalue: element is not hermitian");
    double lo = std::numeric_limits<double>::infinity();
    for (const Matrix& m : x.blocks()) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
        lo = std::min(lo, es.eigenvalues().minCoeff());
    }
    return lo;
}

std::string TracedElement::to_json() const {
    nlohmann::ordered_json j;
    j["blocks"] = nlohmann::ordered_json::array();
    for (int b = 0; b < alg_.block_count(); ++b) {
        const Matrix& m = blocks_[static_cast<std::size_t>(b)];
        nlohmann::ordered_json e;
        e["dim"] = alg_.dim(b);
        e["weight"] = alg_.weight(b);
        auto part = [&](bool re) {
            nlohmann::ordered_json rows = nlohmann::ordered_json::array();
            for (Eigen::Index r = 0; r < m.rows(); ++r) {
                nlohmann::ordered_json row = nlohmann::ordered_json::array();
                for (Eigen::Index c = 0; c < m.cols(); ++c)
                    row.push_back(re ? m(r, c).real() : m(r, c).imag());
                rows.push_back(row);
            }
            return rows;
        };
        e["re"] = part(true);
        e["im"] = part(false);
        j["blocks"].push_back(e);
    }
    return j.dump();
}

TracedElement TracedElement::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    std::vector<AlgebraBlock> abs_;
    std::vector<Matrix> ms;
    for (const auto& e : j.at("blocks")) {
        int dim = e.at("dim").get<int>();
        double w = e.at("weight").get<double>();
        abs_.push_back({dim, w});
        Matrix m(dim, dim);
        const auto& re = e.at("re");
        const auto& im = e.at("im");
        for (int r = 0; r < dim; ++r)
            for (int c = 0; c < dim; ++c)
                m(r, c) = Complex(re.at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c)).get<double>(),
                                  im.at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c)).get<double>());
        ms.push_back(std::move(m));
    }
    return TracedElement(TracedAlgebra(std::move(abs_)), std::move(ms));
}

}  // namespace ncdist
