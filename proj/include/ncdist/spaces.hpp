#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ncdist/domination.hpp"
#include "ncdist/log_poly.hpp"
#include "ncdist/step_function.hpp"

namespace ncdist {

/// Increasing concave phi with phi(0+) = 0 and phi(inf) = inf.
struct ConcaveFn {
    enum class Kind { Log1p, PhiPaper, Custom };
    Kind kind = Kind::Log1p;
    std::function<double(double)> custom;

    double operator()(double t) const;
    std::string name() const;

    static ConcaveFn log1p();
    static ConcaveFn phi_paper();
    static ConcaveFn custom_fn(std::function<double(double)> fn);  // validated on a grid
};

/// Convex increasing Orlicz function with Phi(0) = 0.
struct OrliczFn {
    enum class Kind { ExpM1, TLog1p, Power };
    Kind kind = Kind::ExpM1;
    double power = 2.0;

    double operator()(double t) const;
    double inverse(double y) const;
    std::string name() const;

    static OrliczFn expm1();
    static OrliczFn t_log1p();
    static OrliczFn power_fn(double p);
};

enum class SpaceTag {
    Lp,
    WeakL1,
    L1PlusLinf,
    L1CapLinf,
    L2PlusLinf,
    Lorentz,
    Marcinkiewicz,
    Orlicz,
    WeakOrlicz,
};

struct SpaceSpec {
    SpaceTag tag = SpaceTag::Lp;
    double p = 2.0;        // Lp only
    ConcaveFn phi;         // Lorentz / Marcinkiewicz
    OrliczFn Phi;          // Orlicz / WeakOrlicz
    bool domain01 = false; // Orlicz over (0,1) instead of (0,inf)

    std::string name() const;
    // Grammar: "lp:<p|inf>", "weakl1", "l1+linf", "l1caplinf", "l2+linf",
    // "lorentz:<log1p|phipaper>", "marcinkiewicz:<log1p|phipaper>",
    // "orlicz:<expm1|tlog1p|power:<p>>[:01]", "weakorlicz:<...>",
    // aliases "lambdalog", "mlog", "llogl[:01]".
    static SpaceSpec parse(const std::string& text);

    static SpaceSpec lp(double p);
    static SpaceSpec weak_l1();
    static SpaceSpec l1_plus_linf();
    static SpaceSpec l1_cap_linf();
    static SpaceSpec l2_plus_linf();
    static SpaceSpec lorentz(ConcaveFn phi);
    static SpaceSpec marcinkiewicz(ConcaveFn phi);
    static SpaceSpec lambda_log();
    static SpaceSpec m_log();
    static SpaceSpec orlicz(OrliczFn Phi, bool domain01 = false);
    static SpaceSpec weak_orlicz(OrliczFn Phi);
};

double norm(const StepFunction& f, const SpaceSpec& spec);

enum class SeqSpaceTag { lp, mLog, LambdaLog };
struct SeqSpaceSpec {
    SeqSpaceTag tag = SeqSpaceTag::lp;
    double p = 2.0;
    static SeqSpaceSpec lp(double p) { return {SeqSpaceTag::lp, p}; }
    static SeqSpaceSpec m_log() { return {SeqSpaceTag::mLog, 0.0}; }
    static SeqSpaceSpec lambda_log() { return {SeqSpaceTag::LambdaLog, 0.0}; }
};

double seq_norm(const std::vector<double>& a, const SeqSpaceSpec& spec);

enum class MomentRegime { full, lower, upper };

struct MomentSup {
    double value = 0.0;
    double argmax_p = 0.0;
};

/// Supremum over p of the weighted Lp norms: weights min{1/p, 1/p'} (full),
/// p - 1 on (1, 2] (lower), 1/p on [2, inf) (upper). Geometric p-grid of 50
/// points refined by golden section to 1e-8.
MomentSup moment_sup(const StepFunction& f, MomentRegime regime);

/// The shared p-grid used by moment_sup and the harness sweeps.
std::vector<double> moment_p_grid(MomentRegime regime);

/// Lp norm of a nonnegative piecewise log-polynomial by per-piece adaptive
/// quadrature; an unbounded tail must be a pure power alpha * t^k (k < 0).
double lp_norm_quadrature(const LogPoly& g, double p, double tol = 1e-11);

/// Weak Orlicz norm of a nonnegative decreasing function (step or log-poly).
double weak_orlicz_norm_decreasing(FnView g, const OrliczFn& Phi);

}  // namespace ncdist
