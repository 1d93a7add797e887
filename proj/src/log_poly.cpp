#include "ncdist/log_poly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ncdist {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Antiderivative of t^k log(t)^j evaluated at t > 0.
//   k == -1: log(t)^{j+1} / (j+1)
//   else   : t^{k+1} * P(log t) with P from the reduction
//            I(k,j) = t^{k+1} log^j t/(k+1) - j/(k+1) I(k,j-1).
double antiderivative(int k, int j, double t) {
    double L = std::log(t);
    if (k == -1) return std::pow(L, j + 1) / (j + 1);
    double kp1 = k + 1;
    // coefficients d_i of log^i t, built from d_j = 1/(k+1) downwards
    double acc = 0.0;
    double d = 1.0 / kp1;
    for (int i = j; i >= 0; --i) {
        acc += d * std::pow(L, i);
        d = -d * i / kp1;
    }
    return std::pow(t, kp1) * acc;
}

// Limit of the antiderivative as t -> 0+. Zero for k >= 0; divergent otherwise.
bool vanishes_at_zero(int k) { return k >= 0; }

}  // namespace

double LogPolyPiece::eval(double t) const {
    double L = std::log(t);
    double logs[kMaxLog + 1];
    logs[0] = 1.0;
    for (int j = 1; j <= kMaxLog; ++j) logs[j] = logs[j - 1] * L;
    double s = 0.0;
    for (int k = kMinPow; k <= kMaxPow; ++k) {
        double row = 0.0;
        bool any = false;
        for (int j = 0; j <= kMaxLog; ++j) {
            double c = get(k, j);
            if (c != 0.0) {
                row += c * logs[j];
                any = true;
            }
        }
        if (any) s += row * std::pow(t, k);
    }
    return s;
}

LogPoly::LogPoly(std::vector<LogPolyPiece> pieces) : pieces_(std::move(pieces)) {
    double expect = 0.0;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const LogPolyPiece& p = pieces_[i];
        if (p.lo != expect || !(p.hi > p.lo))
            throw std::invalid_argument("log poly: pieces must tile (0, t_m) contiguously");
        if (std::isinf(p.hi) && i + 1 != pieces_.size())
            throw std::invalid_argument("log poly: infinite piece must be last");
        expect = p.hi;
    }
}

LogPoly LogPoly::from_step(const StepFunction& f) {
    std::vector<LogPolyPiece> ps;
    double lo = 0.0;
    for (std::size_t i = 0; i < f.pieces().size(); ++i) {
        LogPolyPiece p;
        p.lo = lo;
        p.hi = f.bounds()[i];
        p.at(0, 0) = f.pieces()[i].value;
        ps.push_back(p);
        lo = p.hi;
    }
    return LogPoly(std::move(ps));
}

LogPoly LogPoly::constant(double c) {
    LogPolyPiece p;
    p.lo = 0.0;
    p.hi = kInf;
    p.at(0, 0) = c;
    return LogPoly({p});
}

std::vector<double> LogPoly::breakpoints() const {
    std::vector<double> b;
    for (const LogPolyPiece& p : pieces_)
        if (!std::isinf(p.hi)) b.push_back(p.hi);
    return b;
}

const LogPolyPiece* LogPoly::piece_containing(double t, bool left) const {
    // pieces tile (0, t_m); find the first with hi > t (or hi >= t for left limits)
    auto it = std::partition_point(pieces_.begin(), pieces_.end(), [&](const LogPolyPiece& p) {
        return left ? p.hi < t : p.hi <= t;
    });
    if (it == pieces_.end()) return nullptr;
    if (left ? (t > it->lo && t <= it->hi) : (t >= it->lo && t < it->hi)) return &*it;
    return nullptr;
}

double LogPoly::value_at(double t) const {
    if (!(t > 0.0)) throw std::invalid_argument("log poly: t must be > 0");
    const LogPolyPiece* p = piece_containing(t, /*left=*/false);
    return p ? p->eval(t) : 0.0;
}

double LogPoly::value_left(double t) const {
    if (!(t > 0.0)) throw std::invalid_argument("log poly: t must be > 0");
    const LogPolyPiece* p = piece_containing(t, /*left=*/true);
    return p ? p->eval(t) : 0.0;
}

double LogPoly::prefix_integral(double t) const {
    if (t < 0.0) throw std::invalid_argument("prefix_integral: t must be >= 0");
    if (t == 0.0) return 0.0;
    double s = 0.0;
    for (const LogPolyPiece& p : pieces_) {
        if (t <= p.lo) break;
        double hi = std::min(t, p.hi);
        for (int k = kMinPow; k <= kMaxPow; ++k) {
            for (int j = 0; j <= kMaxLog; ++j) {
                double c = p.get(k, j);
                if (c == 0.0) continue;
                double upper = antiderivative(k, j, hi);
                double lower;
                if (p.lo == 0.0) {
                    if (!vanishes_at_zero(k))
                        throw std::domain_error("prefix_integral: non-integrable term near 0");
                    lower = 0.0;
                } else {
                    lower = antiderivative(k, j, p.lo);
                }
                s += c * (upper - lower);
            }
        }
    }
    return s;
}

namespace {

// Common refinement of two contiguous piece lists.
std::vector<std::pair<double, double>> merged_intervals(const LogPoly& a, const LogPoly& b) {
    std::vector<double> cuts;
    auto push = [&cuts](const LogPoly& f) {
        for (const LogPolyPiece& p : f.pieces()) {
            cuts.push_back(p.lo);
            cuts.push_back(p.hi);
        }
    };
    push(a);
    push(b);
    cuts.push_back(0.0);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) out.emplace_back(cuts[i], cuts[i + 1]);
    return out;
}

const LogPolyPiece* find_piece(const LogPoly& f, double lo) {
    for (const LogPolyPiece& p : f.pieces())
        if (p.lo <= lo && lo < p.hi) return &p;
    return nullptr;
}

}  // namespace

LogPoly LogPoly::operator+(const LogPoly& other) const {
    if (is_zero()) return other;
    if (other.is_zero()) return *this;
    std::vector<LogPolyPiece> out;
    for (auto [lo, hi] : merged_intervals(*this, other)) {
        LogPolyPiece q;
        q.lo = lo;
        q.hi = hi;
        for (const LogPoly* src : {this, &other}) {
            const LogPolyPiece* p = find_piece(*src, lo);
            if (!p) continue;
            for (int k = kMinPow; k <= kMaxPow; ++k)
                for (int j = 0; j <= kMaxLog; ++j) q.at(k, j) += p->get(k, j);
        }
        out.push_back(q);
    }
    // drop an all-zero unbounded tail so that sums of compactly supported
    // functions stay compactly supported
    while (!out.empty()) {
        bool zero = true;
        for (int k = kMinPow; k <= kMaxPow && zero; ++k)
            for (int j = 0; j <= kMaxLog && zero; ++j)
                if (out.back().get(k, j) != 0.0) zero = false;
        if (zero)
            out.pop_back();
        else
            break;
    }
    return LogPoly(std::move(out));
}

LogPoly LogPoly::scale(double c) const {
    std::vector<LogPolyPiece> out = pieces_;
    for (LogPolyPiece& p : out)
        for (int k = kMinPow; k <= kMaxPow; ++k)
            for (int j = 0; j <= kMaxLog; ++j) p.at(k, j) *= c;
    return LogPoly(std::move(out));
}

LogPoly LogPoly::square() const {
    std::vector<LogPolyPiece> out;
    for (const LogPolyPiece& p : pieces_) {
        for (int k = kMinPow; k <= kMaxPow; ++k)
            for (int j = 0; j <= kMaxLog; ++j)
                if (p.get(k, j) != 0.0 && (k < -1 || k > 0 || j > 1))
                    throw internal_error("log poly square: piece outside the squarable box");
        LogPolyPiece q;
        q.lo = p.lo;
        q.hi = p.hi;
        for (int k1 = -1; k1 <= 0; ++k1)
            for (int j1 = 0; j1 <= 1; ++j1) {
                double c1 = p.get(k1, j1);
                if (c1 == 0.0) continue;
                for (int k2 = -1; k2 <= 0; ++k2)
                    for (int j2 = 0; j2 <= 1; ++j2) {
                        double c2 = p.get(k2, j2);
                        if (c2 == 0.0) continue;
                        q.at(k1 + k2, j1 + j2) += c1 * c2;
                    }
            }
        out.push_back(q);
    }
    return LogPoly(std::move(out));
}

}  // namespace ncdist
