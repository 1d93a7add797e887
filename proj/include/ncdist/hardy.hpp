#pragma once

#include <vector>

#include "ncdist/log_poly.hpp"
#include "ncdist/step_function.hpp"

namespace ncdist {

enum class HardyKind { C, Cstar, S };          // continuous operators
enum class HardyKindSeq { Cd, CdStar, Sd };    // discrete operators

/// Exact action on a decreasing step function: (C f)(t) = t^{-1} * integral of
/// f over (0,t); (C* f)(t) = integral of f(s)/s over (t, inf); S = C + C*.
/// C* (and S) require finite support.
LogPoly hardy_transform(const StepFunction& f, HardyKind kind);

/// Same formulas on an arbitrary nonnegative piecewise-constant function given
/// as consecutive pieces starting at 0 (values need not decrease).
LogPoly hardy_transform_pieces(const std::vector<Piece>& pieces, HardyKind kind);

/// Cesaro average of a log-poly (the degree box is closed under it).
LogPoly cesaro(const LogPoly& g);

LogPoly square(const LogPoly& g);

std::vector<double> hardy_transform_seq(const std::vector<double>& a, HardyKindSeq kind);

/// <Cf, g> = <f, C*g> pairing; both sides closed form for compactly supported
/// step functions.
double pairing_cesaro(const StepFunction& f, const StepFunction& g);
double pairing_dual(const StepFunction& f, const StepFunction& g);

/// Closed form of the log-kernel integral of f over (0,t) with kernel
/// log(t/s); equals the prefix integral of C f.
double log_kernel_integral(const StepFunction& f, double t);

}  // namespace ncdist
