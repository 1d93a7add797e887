#include "ncdist/hardy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ncdist {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

LogPoly cesaro_pieces(const std::vector<Piece>& pieces) {
    std::vector<LogPolyPiece> out;
    double lo = 0.0, mass = 0.0;
    for (const Piece& p : pieces) {
        double hi = std::isinf(p.length) ? kInf : lo + p.length;
        LogPolyPiece q;
        q.lo = lo;
        q.hi = hi;
        // F(t)/t with F(t) = mass + v (t - lo)
        q.at(0, 0) = p.value;
        q.at(-1, 0) = mass - p.value * lo;
        out.push_back(q);
        if (!std::isinf(hi)) mass += p.length * p.value;
        lo = hi;
    }
    if (!out.empty() && !std::isinf(out.back().hi) && mass > 0.0) {
        LogPolyPiece tail;
        tail.lo = lo;
        tail.hi = kInf;
        tail.at(-1, 0) = mass;
        out.push_back(tail);
    }
    return LogPoly(std::move(out));
}

LogPoly dual_cesaro_pieces(const std::vector<Piece>& pieces) {
    if (!pieces.empty() && std::isinf(pieces.back().length) && pieces.back().value > 0.0)
        throw std::domain_error("dual Cesaro operator: input has a constant nonzero tail");
    std::vector<double> bounds(pieces.size());
    double lo = 0.0;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        lo += pieces[i].length;
        bounds[i] = lo;
    }
    // tail[i] = integral of f/s over (bounds[i], inf)
    std::vector<double> tail(pieces.size() + 1, 0.0);
    for (std::size_t i = pieces.size(); i-- > 0;) {
        double a = i == 0 ? 0.0 : bounds[i - 1];
        double seg = i == 0 ? 0.0 : pieces[i].value * (std::log(bounds[i]) - std::log(a));
        // the piece adjoining zero contributes via its own formula below; the
        // integral over (0, b_0) of v/s diverges unless cut at t > 0
        tail[i] = tail[i + 1] + seg;
    }
    std::vector<LogPolyPiece> out;
    lo = 0.0;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        LogPolyPiece q;
        q.lo = lo;
        q.hi = bounds[i];
        // v_i (log b_i - log t) + tail beyond b_i
        q.at(0, 0) = pieces[i].value * std::log(bounds[i]) + tail[i + 1];
        q.at(0, 1) = -pieces[i].value;
        out.push_back(q);
        lo = bounds[i];
    }
    return LogPoly(std::move(out));
}

}  // namespace

LogPoly hardy_transform_pieces(const std::vector<Piece>& pieces, HardyKind kind) {
    switch (kind) {
        case HardyKind::C:
            return cesaro_pieces(pieces);
        case HardyKind::Cstar:
            return dual_cesaro_pieces(pieces);
        case HardyKind::S:
            return cesaro_pieces(pieces) + dual_cesaro_pieces(pieces);
    }
    throw std::invalid_argument("hardy_transform: bad kind");
}

LogPoly hardy_transform(const StepFunction& f, HardyKind kind) {
    return hardy_transform_pieces(f.pieces(), kind);
}

LogPoly square(const LogPoly& g) { return g.square(); }

LogPoly cesaro(const LogPoly& g) {
    // per piece: C g(t) = [F(lo) - A(lo)] / t + A(t) / t with A the
    // coefficient-level antiderivative; terms t^k log^j keep their power k
    // (a t^{-1} boundary term appears, and k = -1 sources raise j by one)
    std::vector<LogPolyPiece> out;
    for (const LogPolyPiece& p : g.pieces()) {
        LogPolyPiece q;
        q.lo = p.lo;
        q.hi = p.hi;
        // A(t)/t coefficients
        for (int k = kMinPow; k <= kMaxPow; ++k) {
            for (int j = 0; j <= kMaxLog; ++j) {
                double c = p.get(k, j);
                if (c == 0.0) continue;
                if (k == -1) {
                    if (j + 1 > kMaxLog)
                        throw internal_error("cesaro of log poly: log degree overflow");
                    q.at(-1, j + 1) += c / (j + 1);
                } else {
                    double d = c / (k + 1);
                    for (int i = j; i >= 0; --i) {
                        q.at(k, i) += d;
                        d = -d * i / (k + 1);
                    }
                }
            }
        }
        // boundary constant: F(lo) - A(lo), with A evaluated from q * t
        double boundary;
        if (p.lo == 0.0) {
            for (int j = 0; j <= kMaxLog; ++j)
                if (p.get(-1, j) != 0.0 || p.get(-2, j) != 0.0)
                    throw std::domain_error("cesaro of log poly: non-integrable near 0");
            boundary = 0.0;
        } else {
            double a_lo = q.eval(p.lo) * p.lo;
            boundary = g.prefix_integral(p.lo) - a_lo;
        }
        q.at(-1, 0) += boundary;
        out.push_back(q);
    }
    if (!out.empty() && !std::isinf(out.back().hi)) {
        double mass = g.prefix_integral(out.back().hi);
        if (mass != 0.0) {
            LogPolyPiece tail;
            tail.lo = out.back().hi;
            tail.hi = std::numeric_limits<double>::infinity();
            tail.at(-1, 0) = mass;
            out.push_back(tail);
        }
    }
    return LogPoly(std::move(out));
}

std::vector<double> hardy_transform_seq(const std::vector<double>& a, HardyKindSeq kind) {
    const std::size_t n = a.size();
    std::vector<double> out(n, 0.0);
    if (n == 0) return out;
    if (kind == HardyKindSeq::Cd || kind == HardyKindSeq::Sd) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            acc += a[i];
            out[i] = acc / static_cast<double>(i + 1);
        }
    }
    if (kind == HardyKindSeq::CdStar || kind == HardyKindSeq::Sd) {
        double tail = 0.0;
        for (std::size_t i = n; i-- > 0;) {
            tail += a[i] / static_cast<double>(i + 1);
            out[i] += tail;
        }
    }
    return out;
}

double pairing_cesaro(const StepFunction& f, const StepFunction& g) {
    if (f.has_infinite_tail() || g.has_infinite_tail())
        throw std::domain_error("pairing: compact support required");
    LogPoly cf = hardy_transform(f, HardyKind::C);
    double s = 0.0, lo = 0.0;
    for (std::size_t i = 0; i < g.pieces().size(); ++i) {
        double hi = g.bounds()[i];
        s += g.pieces()[i].value * (cf.prefix_integral(hi) - cf.prefix_integral(lo));
        lo = hi;
    }
    return s;
}

double pairing_dual(const StepFunction& f, const StepFunction& g) {
    if (f.has_infinite_tail() || g.has_infinite_tail())
        throw std::domain_error("pairing: compact support required");
    LogPoly cg = hardy_transform(g, HardyKind::Cstar);
    double s = 0.0, lo = 0.0;
    for (std::size_t i = 0; i < f.pieces().size(); ++i) {
        double hi = f.bounds()[i];
        s += f.pieces()[i].value * (cg.prefix_integral(hi) - cg.prefix_integral(lo));
        lo = hi;
    }
    return s;
}

double log_kernel_integral(const StepFunction& f, double t) {
    if (t <= 0.0) return 0.0;
    // integral of f(s) (log t - log s) over (0, t); per piece the s log s
    // antiderivative is s log s - s, with limit 0 at s = 0.
    double logt = std::log(t);
    double s = 0.0, lo = 0.0;
    for (std::size_t i = 0; i < f.pieces().size() && lo < t; ++i) {
        double hi = std::min(f.bounds()[i], t);
        double v = f.pieces()[i].value;
        double upper = hi * std::log(hi) - hi;
        double lower = lo == 0.0 ? 0.0 : lo * std::log(lo) - lo;
        s += v * (logt * (hi - lo) - (upper - lower));
        lo = f.bounds()[i];
    }
    return s;
}

}  // namespace ncdist
