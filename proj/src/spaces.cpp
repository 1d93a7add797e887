#include "ncdist/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ncdist {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double phi_paper_eval(double t) {
    if (t <= 0.0) return 0.0;
    if (t <= 1.0) return t * (2.0 - std::log(t));
    return 2.0 + std::log(t);
}

void validate_concave(const std::function<double(double)>& f) {
    double prev = f(1e-9);
    if (!(prev >= 0.0) || prev > 1e-3)
        throw std::invalid_argument("concave fn: phi(0+) must vanish");
    double prev_slope = kInf;
    double lo = 1e-9;
    for (int i = 1; i <= 60; ++i) {
        double hi = lo * 2.0;
        double v = f(hi);
        if (!(v >= prev)) throw std::invalid_argument("concave fn: must be increasing");
        double slope = (v - prev) / (hi - lo);
        if (slope > prev_slope * (1.0 + 1e-9))
            throw std::invalid_argument("concave fn: chord slopes must decrease");
        prev_slope = slope;
        prev = v;
        lo = hi;
    }
    if (!(prev > 1.0)) throw std::invalid_argument("concave fn: phi(inf) must diverge");
}

// Adaptive Simpson with Richardson correction.
double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double err = (left + right - whole) / 15.0;
    if (depth <= 0 || std::abs(err) <= tol) return left + right + err;
    return simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

// rel_tol is taken relative to a coarse estimate of the integral magnitude,
// so pieces with large values do not force unattainable absolute accuracy
double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
    if (!(b > a)) return 0.0;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    double scale = std::max({std::abs(whole), (b - a) * std::abs(fm), 1e-300});
    return simpson(f, a, b, fa, fm, fb, whole, rel_tol * scale, 40);
}

// Coarse log-spaced scan of [a, b] followed by golden refinement around the
// best sample; robust to non-unimodal integrands.
double scan_max(const std::function<double(double)>& f, double a, double b);

// Golden-section maximizer on [lo, hi]; relative interval tolerance.
double golden_max(const std::function<double(double)>& f, double lo, double hi, double tol,
                  double* arg = nullptr) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol * std::max(1.0, std::abs(a))) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    double t = 0.5 * (a + b);
    if (arg) *arg = t;
    return f(t);
}

double scan_max(const std::function<double(double)>& f, double a, double b) {
    const int m = 16;
    double bt = a, bv = -kInf;
    for (int s = 0; s <= m; ++s) {
        double t = a * std::pow(b / a, static_cast<double>(s) / m);
        double v = f(t);
        if (v > bv) {
            bv = v;
            bt = t;
        }
    }
    double step = std::pow(b / a, 1.0 / m);
    double lo = std::max(a, bt / step), hi = std::min(b, bt * step);
    return std::max(bv, golden_max(f, lo, hi, 1e-10));
}

}  // namespace

double ConcaveFn::operator()(double t) const {
    if (t < 0.0) throw std::invalid_argument("concave fn: t must be >= 0");
    switch (kind) {
        case Kind::Log1p:
            return std::log1p(t);
        case Kind::PhiPaper:
            return phi_paper_eval(t);
        case Kind::Custom:
            return custom(t);
    }
    return 0.0;
}

std::string ConcaveFn::name() const {
    switch (kind) {
        case Kind::Log1p:
            return "log1p";
        case Kind::PhiPaper:
            return "phipaper";
        case Kind::Custom:
            return "custom";
    }
    return "";
}

ConcaveFn ConcaveFn::log1p() { return {Kind::Log1p, {}}; }
ConcaveFn ConcaveFn::phi_paper() { return {Kind::PhiPaper, {}}; }
ConcaveFn ConcaveFn::custom_fn(std::function<double(double)> fn) {
    validate_concave(fn);
    return {Kind::Custom, std::move(fn)};
}

double OrliczFn::operator()(double t) const {
    if (t < 0.0) throw std::invalid_argument("orlicz fn: t must be >= 0");
    switch (kind) {
        case Kind::ExpM1:
            return std::expm1(t);
        case Kind::TLog1p:
            return t * std::log1p(t);
        case Kind::Power:
            return std::pow(t, power);
    }
    return 0.0;
}

double OrliczFn::inverse(double y) const {
    if (y < 0.0) throw std::invalid_argument("orlicz inverse: y must be >= 0");
    if (y == 0.0) return 0.0;
    switch (kind) {
        case Kind::ExpM1:
            return std::log1p(y);
        case Kind::Power:
            return std::pow(y, 1.0 / power);
        case Kind::TLog1p: {
            double t = std::max(1.0, y);  // Newton on t log(1+t) = y
            for (int i = 0; i < 100; ++i) {
                double v = t * std::log1p(t) - y;
                double dv = std::log1p(t) + t / (1.0 + t);
                double step = v / dv;
                t -= step;
                if (t <= 0.0) t = 1e-16;
                if (std::abs(step) <= 1e-14 * std::max(1.0, t)) break;
            }
            return t;
        }
    }
    return 0.0;
}

std::string OrliczFn::name() const {
    switch (kind) {
        case Kind::ExpM1:
            return "expm1";
        case Kind::TLog1p:
            return "tlog1p";
        case Kind::Power:
            return "power:" + std::to_string(power);
    }
    return "";
}

OrliczFn OrliczFn::expm1() { return {Kind::ExpM1, 0.0}; }
OrliczFn OrliczFn::t_log1p() { return {Kind::TLog1p, 0.0}; }
OrliczFn OrliczFn::power_fn(double p) {
    if (p < 1.0) throw std::invalid_argument("orlicz power: p must be >= 1");
    return {Kind::Power, p};
}

SpaceSpec SpaceSpec::lp(double p) {
    if (!(p > 0.0)) throw std::invalid_argument("lp: p must be > 0");
    SpaceSpec s;
    s.tag = SpaceTag::Lp;
    s.p = p;
    return s;
}
SpaceSpec SpaceSpec::weak_l1() { return {SpaceTag::WeakL1, 0, {}, {}, false}; }
SpaceSpec SpaceSpec::l1_plus_linf() { return {SpaceTag::L1PlusLinf, 0, {}, {}, false}; }
SpaceSpec SpaceSpec::l1_cap_linf() { return {SpaceTag::L1CapLinf, 0, {}, {}, false}; }
SpaceSpec SpaceSpec::l2_plus_linf() { return {SpaceTag::L2PlusLinf, 0, {}, {}, false}; }
SpaceSpec SpaceSpec::lorentz(ConcaveFn phi) { return {SpaceTag::Lorentz, 0, std::move(phi), {}, false}; }
SpaceSpec SpaceSpec::marcinkiewicz(ConcaveFn phi) {
    return {SpaceTag::Marcinkiewicz, 0, std::move(phi), {}, false};
}
SpaceSpec SpaceSpec::lambda_log() { return lorentz(ConcaveFn::log1p()); }
SpaceSpec SpaceSpec::m_log() { return marcinkiewicz(ConcaveFn::log1p()); }
SpaceSpec SpaceSpec::orlicz(OrliczFn Phi, bool domain01) {
    return {SpaceTag::Orlicz, 0, {}, Phi, domain01};
}
SpaceSpec SpaceSpec::weak_orlicz(OrliczFn Phi) { return {SpaceTag::WeakOrlicz, 0, {}, Phi, false}; }

std::string SpaceSpec::name() const {
    switch (tag) {
        case SpaceTag::Lp:
            return std::isinf(p) ? "lp:inf" : "lp:" + std::to_string(p);
        case SpaceTag::WeakL1:
            return "weakl1";
        case SpaceTag::L1PlusLinf:
            return "l1+linf";
        case SpaceTag::L1CapLinf:
            return "l1caplinf";
        case SpaceTag::L2PlusLinf:
            return "l2+linf";
        case SpaceTag::Lorentz:
            return "lorentz:" + phi.name();
        case SpaceTag::Marcinkiewicz:
            return "marcinkiewicz:" + phi.name();
        case SpaceTag::Orlicz:
            return "orlicz:" + Phi.name() + (domain01 ? ":01" : "");
        case SpaceTag::WeakOrlicz:
            return "weakorlicz:" + Phi.name();
    }
    return "";
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        std::size_t next = s.find(sep, pos);
        out.push_back(s.substr(pos, next - pos));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return out;
}

OrliczFn parse_orlicz_fn(const std::vector<std::string>& parts, std::size_t at, bool* dom01) {
    *dom01 = !parts.empty() && parts.back() == "01";
    if (at >= parts.size()) throw std::invalid_argument("space spec: missing orlicz function");
    const std::string& fn = parts[at];
    if (fn == "expm1") return OrliczFn::expm1();
    if (fn == "tlog1p") return OrliczFn::t_log1p();
    if (fn == "power") {
        if (at + 1 >= parts.size()) throw std::invalid_argument("space spec: power needs p");
        return OrliczFn::power_fn(std::stod(parts[at + 1]));
    }
    throw std::invalid_argument("space spec: unknown orlicz function '" + fn + "'");
}

ConcaveFn parse_phi(const std::string& s) {
    if (s == "log1p") return ConcaveFn::log1p();
    if (s == "phipaper") return ConcaveFn::phi_paper();
    throw std::invalid_argument("space spec: unknown phi '" + s + "'");
}

}  // namespace

SpaceSpec SpaceSpec::parse(const std::string& text) {
    auto parts = split(text, ':');
    const std::string& head = parts[0];
    if (head == "lp") {
        if (parts.size() < 2) throw std::invalid_argument("space spec: lp needs p");
        return lp(parts[1] == "inf" ? kInf : std::stod(parts[1]));
    }
    if (head == "weakl1") return weak_l1();
    if (head == "l1+linf") return l1_plus_linf();
    if (head == "l1caplinf") return l1_cap_linf();
    if (head == "l2+linf") return l2_plus_linf();
    if (head == "lambdalog") return lambda_log();
    if (head == "mlog") return m_log();
    if (head == "llogl") return orlicz(OrliczFn::t_log1p(), parts.size() > 1 && parts[1] == "01");
    if (head == "lorentz") {
        if (parts.size() < 2) throw std::invalid_argument("space spec: lorentz needs phi");
        return lorentz(parse_phi(parts[1]));
    }
    if (head == "marcinkiewicz") {
        if (parts.size() < 2) throw std::invalid_argument("space spec: marcinkiewicz needs phi");
        return marcinkiewicz(parse_phi(parts[1]));
    }
    if (head == "orlicz" || head == "weakorlicz") {
        bool dom01 = false;
        OrliczFn fn = parse_orlicz_fn(parts, 1, &dom01);
        if (head == "orlicz") return orlicz(fn, dom01);
        if (dom01) throw std::invalid_argument("space spec: weak orlicz is on (0,inf)");
        return weak_orlicz(fn);
    }
    throw std::invalid_argument("space spec: unknown space '" + text + "'");
}

namespace {

double lp_norm_step(const StepFunction& f, double p) {
    if (std::isinf(p)) return f.sup_value();
    if (f.has_infinite_tail() && f.pieces().back().value > 0.0) return kInf;
    double s = f.integral_pow(p);
    return std::pow(s, 1.0 / p);
}

double weak_l1_norm(const StepFunction& f) {
    double best = 0.0;
    for (std::size_t i = 0; i < f.pieces().size(); ++i) {
        double b = f.bounds()[i];
        if (std::isinf(b)) return kInf;
        best = std::max(best, b * f.pieces()[i].value);
    }
    return best;
}

double lorentz_norm(const StepFunction& f, const ConcaveFn& phi) {
    // integral of mu d(phi) = sum of v_i (phi(b_i) - phi(b_{i-1}))
    double s = 0.0, lo = 0.0;
    for (std::size_t i = 0; i < f.pieces().size(); ++i) {
        double hi = f.bounds()[i];
        if (std::isinf(hi)) return f.pieces()[i].value > 0.0 ? kInf : s;
        s += f.pieces()[i].value * (phi(hi) - phi(lo));
        lo = hi;
    }
    return s;
}

double marcinkiewicz_norm(const StepFunction& f, const ConcaveFn& phi) {
    if (f.is_zero()) return 0.0;
    if (f.has_infinite_tail() && f.pieces().back().value > 0.0) {
        double T = 1e18;
        if (phi(T) / T < f.pieces().back().value) return kInf;
    }
    auto g = [&](double t) { return f.prefix_integral(t) / phi(t); };
    double best = 0.0;
    double lo = 0.0;
    for (std::size_t i = 0; i < f.pieces().size(); ++i) {
        double hi = f.bounds()[i];
        if (std::isinf(hi)) hi = std::max(1.0, lo) * 1e6;
        double a = lo == 0.0 ? hi * 1e-9 : lo;
        best = std::max(best, scan_max(g, a, hi));
        lo = f.bounds()[i];
    }
    return best;
}

double orlicz_modular(const StepFunction& f, const OrliczFn& Phi, bool domain01, double lambda) {
    double s = 0.0, lo = 0.0;
    for (std::size_t i = 0; i < f.pieces().size(); ++i) {
        double hi = f.bounds()[i];
        double len = domain01 ? std::max(0.0, std::min(hi, 1.0) - std::min(lo, 1.0))
                              : f.pieces()[i].length;
        if (len > 0.0) {
            if (std::isinf(len)) return kInf;
            s += len * Phi(f.pieces()[i].value / lambda);
        }
        lo = hi;
        if (std::isinf(s)) return kInf;
    }
    return s;
}

double orlicz_norm(const StepFunction& f, const OrliczFn& Phi, bool domain01) {
    if (f.is_zero()) return 0.0;
    if (domain01 && f.support_length() == 0.0) return 0.0;
    auto G = [&](double lam) { return orlicz_modular(f, Phi, domain01, lam); };
    double hi = std::max(f.sup_value(), 1e-300);
    int guard = 0;
    while (G(hi) > 1.0) {
        hi *= 2.0;
        if (++guard > 2000) return kInf;  // modular never brackets
    }
    double lo = hi;
    guard = 0;
    while (G(lo) <= 1.0) {
        lo *= 0.5;
        if (++guard > 2000) return 0.0;
    }
    for (int i = 0; i < 200 && (hi - lo) > 1e-12 * hi; ++i) {
        double mid = 0.5 * (lo + hi);
        (G(mid) <= 1.0 ? hi : lo) = mid;
    }
    return hi;
}

double weak_orlicz_norm_step(const StepFunction& f, const OrliczFn& Phi) {
    // sup over lambda of Phi(lambda) n(c lambda) is attained at the jumps of
    // the distribution, so the norm is max_i v_i / Phi^{-1}(1 / L_i) with L_i
    // the cumulative length through piece i.
    double best = 0.0;
    for (std::size_t i = 0; i < f.pieces().size(); ++i) {
        double L = f.bounds()[i];
        if (std::isinf(L)) return kInf;
        best = std::max(best, f.pieces()[i].value / Phi.inverse(1.0 / L));
    }
    return best;
}

}  // namespace

double norm(const StepFunction& f, const SpaceSpec& spec) {
    switch (spec.tag) {
        case SpaceTag::Lp:
            return lp_norm_step(f, spec.p);
        case SpaceTag::WeakL1:
            return weak_l1_norm(f);
        case SpaceTag::L1PlusLinf:
            return f.prefix_integral(1.0);
        case SpaceTag::L1CapLinf:
            return std::max(lp_norm_step(f, 1.0), f.sup_value());
        case SpaceTag::L2PlusLinf: {
            return std::sqrt(f.power(2.0).prefix_integral(1.0));
        }
        case SpaceTag::Lorentz:
            return lorentz_norm(f, spec.phi);
        case SpaceTag::Marcinkiewicz:
            return marcinkiewicz_norm(f, spec.phi);
        case SpaceTag::Orlicz:
            return orlicz_norm(f, spec.Phi, spec.domain01);
        case SpaceTag::WeakOrlicz:
            return weak_orlicz_norm_step(f, spec.Phi);
    }
    throw std::invalid_argument("norm: bad space spec");
}

double seq_norm(const std::vector<double>& a, const SeqSpaceSpec& spec) {
    std::vector<double> mu(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) mu[i] = std::abs(a[i]);
    std::sort(mu.begin(), mu.end(), std::greater<double>());
    switch (spec.tag) {
        case SeqSpaceTag::lp: {
            if (std::isinf(spec.p)) return mu.empty() ? 0.0 : mu.front();
            double s = 0.0;
            for (double v : mu) s += std::pow(v, spec.p);
            return std::pow(s, 1.0 / spec.p);
        }
        case SeqSpaceTag::mLog: {
            double best = 0.0, acc = 0.0;
            for (std::size_t k = 0; k < mu.size(); ++k) {
                acc += mu[k];
                best = std::max(best, acc / std::log1p(static_cast<double>(k + 1)));
            }
            return best;
        }
        case SeqSpaceTag::LambdaLog: {
            double s = 0.0;
            for (std::size_t n = 0; n < mu.size(); ++n)
                s += mu[n] * (std::log1p(static_cast<double>(n + 1)) -
                              std::log1p(static_cast<double>(n)));
            return s;
        }
    }
    throw std::invalid_argument("seq_norm: bad spec");
}

std::vector<double> moment_p_grid(MomentRegime regime) {
    std::vector<double> ps;
    if (regime != MomentRegime::upper) {
        // p - 1 geometric in [0.01, 1]
        for (int i = 0; i < 25; ++i)
            ps.push_back(1.0 + 0.01 * std::pow(100.0, static_cast<double>(i) / 24.0));
    }
    if (regime != MomentRegime::lower) {
        // p geometric in [2, 100]
        for (int i = 0; i < 25; ++i)
            ps.push_back(2.0 * std::pow(50.0, static_cast<double>(i) / 24.0));
    }
    return ps;
}

MomentSup moment_sup(const StepFunction& f, MomentRegime regime) {
    auto weight = [regime](double p) {
        switch (regime) {
            case MomentRegime::full:
                return std::min(1.0 / p, (p - 1.0) / p);
            case MomentRegime::lower:
                return p - 1.0;
            case MomentRegime::upper:
                return 1.0 / p;
        }
        return 0.0;
    };
    auto val = [&](double p) { return weight(p) * std::pow(f.integral_pow(p), 1.0 / p); };
    std::vector<double> grid = moment_p_grid(regime);
    MomentSup out;
    std::size_t bi = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double v = val(grid[i]);
        if (std::isinf(v)) return {kInf, grid[i]};
        if (v > out.value) {
            out.value = v;
            out.argmax_p = grid[i];
            bi = i;
        }
    }
    if (f.is_zero()) return {0.0, 2.0};
    double lo = bi == 0 ? grid.front() : grid[bi - 1];
    double hi = bi + 1 == grid.size() ? grid.back() : grid[bi + 1];
    if (hi > lo) {
        double arg = out.argmax_p;
        auto in_log = [&](double u) { return val(std::exp(u)); };
        double v = golden_max(in_log, std::log(lo), std::log(hi), 1e-8, &arg);
        if (v > out.value) {
            out.value = v;
            out.argmax_p = std::exp(arg);
        }
    }
    return out;
}

double lp_norm_quadrature(const LogPoly& g, double p, double tol) {
    if (!(p > 0.0)) throw std::invalid_argument("lp_norm_quadrature: p must be > 0");
    double s = 0.0;
    for (const LogPolyPiece& piece : g.pieces()) {
        auto integrand = [&](double t) { return std::pow(std::max(piece.eval(t), 0.0), p); };
        if (std::isinf(piece.hi)) {
            // tail must be a pure power alpha * t^k, k in {-1, -2}
            double alpha = 0.0;
            int kk = 0;
            for (int k = kMinPow; k <= kMaxPow; ++k)
                for (int j = 0; j <= kMaxLog; ++j) {
                    double c = piece.get(k, j);
                    if (c == 0.0) continue;
                    if (k >= 0 || j > 0)
                        throw std::domain_error("lp_norm_quadrature: non-power tail");
                    if (alpha != 0.0) throw std::domain_error("lp_norm_quadrature: mixed tail");
                    alpha = c;
                    kk = k;
                }
            if (alpha == 0.0) continue;
            double decay = -static_cast<double>(kk) * p;  // integrand ~ t^{-decay}
            if (decay <= 1.0) return kInf;
            s += std::pow(alpha, p) * std::pow(piece.lo, 1.0 - decay) / (decay - 1.0);
            continue;
        }
        double lo = piece.lo == 0.0 ? 0.0 : piece.lo;
        if (piece.lo == 0.0) {
            // integrable log singularities allowed; keep a hair away from 0
            lo = piece.hi * 1e-14;
        }
        s += integrate(integrand, lo, piece.hi, tol);
    }
    return std::pow(s, 1.0 / p);
}

double weak_orlicz_norm_decreasing(FnView g, const OrliczFn& Phi) {
    // H(c) = sup_t t * Phi(g(t)/c); the norm is the least c with H(c) <= 1.
    std::vector<double> pts = g.breakpoints();
    if (pts.empty()) pts.push_back(1.0);
    bool tail = g.nonzero_beyond(pts.back());
    auto H = [&](double c) {
        double best = 0.0;
        auto h = [&](double t) { return t * Phi(std::max(g.value_at(t), 0.0) / c); };
        double lo = pts.front() * 1e-9;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            double hi = pts[i];
            best = std::max(best, hi * Phi(std::max(g.value_left(hi), 0.0) / c));
            best = std::max(best, scan_max(h, lo, hi));
            lo = hi;
        }
        // on a pure power tail t * Phi(g(t)/c) decreases, so the left edge wins
        if (tail) best = std::max(best, h(pts.back() * (1.0 + 1e-12)));
        return best;
    };
    double sup0 = g.value_at(pts.front() * 0.5);
    if (sup0 <= 0.0 && !tail) return 0.0;
    double hi = std::max(sup0, 1e-300);
    int guard = 0;
    while (H(hi) > 1.0) {
        hi *= 2.0;
        if (++guard > 500) return kInf;
    }
    double lo = hi;
    guard = 0;
    while (H(lo) <= 1.0 && lo > 1e-300) {
        lo *= 0.5;
        if (++guard > 500) break;
    }
    for (int i = 0; i < 100 && (hi - lo) > 1e-10 * hi; ++i) {
        double mid = 0.5 * (lo + hi);
        (H(mid) <= 1.0 ? hi : lo) = mid;
    }
    return hi;
}

}  // namespace ncdist
