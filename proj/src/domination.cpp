#include "ncdist/domination.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ncdist {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double ratio_of(double a, double b) {
    a = std::max(a, 0.0);
    b = std::max(b, 0.0);
    if (b > 0.0) return a / b;
    return a == 0.0 ? 1.0 : kInf;
}
}  // namespace

double FnView::value_at(double t) const {
    return step_ ? step_->value_at(t) : poly_->value_at(t);
}

double FnView::value_left(double t) const {
    return step_ ? step_->value_left(t) : poly_->value_left(t);
}

double FnView::prefix_integral(double t) const {
    return step_ ? step_->prefix_integral(t) : poly_->prefix_integral(t);
}

std::vector<double> FnView::breakpoints() const {
    std::vector<double> b;
    if (step_) {
        for (double x : step_->bounds())
            if (!std::isinf(x)) b.push_back(x);
    } else {
        b = poly_->breakpoints();
    }
    return b;
}

bool FnView::nonzero_beyond(double t) const {
    if (step_) return step_->has_infinite_tail();
    if (poly_->is_zero()) return false;
    const LogPolyPiece& last = poly_->pieces().back();
    if (!std::isinf(last.hi)) return false;
    for (int k = kMinPow; k <= kMaxPow; ++k)
        for (int j = 0; j <= kMaxLog; ++j)
            if (last.get(k, j) != 0.0) return true;
    (void)t;
    return false;
}

bool FnView::is_zero() const { return step_ ? step_->is_zero() : poly_->is_zero(); }

RatioResult domination_ratio(FnView f, FnView g, DominationMode mode, double tol, double t_max) {
    if (!(tol > 0.0)) throw std::invalid_argument("domination_ratio: tol must be > 0");
    if (f.is_zero() && g.is_zero()) return {1.0, 0.0, false, 0};

    std::vector<double> pts;
    for (FnView* v : {&f, &g})
        for (double b : v->breakpoints())
            if (b <= t_max) pts.push_back(b);
    if (std::isfinite(t_max)) pts.push_back(t_max);
    if (pts.empty()) pts.push_back(1.0);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    const bool extend = !std::isfinite(t_max) &&
                        (f.nonzero_beyond(pts.back()) || g.nonzero_beyond(pts.back()));

    auto eval_pair = [&](double t, bool left) {
        if (mode == DominationMode::pointwise)
            return left ? ratio_of(f.value_left(t), g.value_left(t))
                        : ratio_of(f.value_at(t), g.value_at(t));
        return ratio_of(f.prefix_integral(t), g.prefix_integral(t));
    };

    RatioResult best{-1.0, 0.0, false, 0};
    auto consider = [&best](double r, double t, bool left) {
        if (r > best.ratio) {
            best.ratio = r;
            best.witness_t = t;
            best.witness_left = left;
        }
    };

    auto scan = [&](int m) {
        best = {-1.0, 0.0, false, m};
        for (double b : pts) {
            consider(eval_pair(b, false), b, false);
            consider(eval_pair(b, true), b, true);
        }
        // interval adjoining zero: log-spaced down to 1e-8 * first breakpoint
        {
            double b = pts.front();
            for (int i = 1; i <= m; ++i) {
                double t = b * std::pow(1e-8, static_cast<double>(i) / m);
                consider(eval_pair(t, false), t, false);
            }
        }
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            double a = pts[i], b = pts[i + 1];
            for (int s = 1; s <= m; ++s) {
                double t = a * std::pow(b / a, static_cast<double>(s) / (m + 1));
                consider(eval_pair(t, false), t, false);
            }
        }
        if (extend) {
            double a = pts.back();
            for (int s = 1; s <= m; ++s) {
                double t = a * std::pow(16.0, static_cast<double>(s) / m);
                consider(eval_pair(t, false), t, false);
            }
        }
        return best.ratio;
    };

    double prev = scan(8);
    for (int m : {16, 32, 64}) {
        double cur = scan(m);
        if (std::isinf(cur) || std::abs(cur - prev) < tol * std::max(1.0, std::abs(prev))) break;
        prev = cur;
    }
    return best;
}

}  // namespace ncdist
