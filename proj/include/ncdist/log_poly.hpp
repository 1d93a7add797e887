#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "ncdist/step_function.hpp"

namespace ncdist {

constexpr int kMinPow = -2;  // monomial powers t^k with k in [kMinPow, kMaxPow]
constexpr int kMaxPow = 2;
constexpr int kMaxLog = 3;  // log exponents j in [0, kMaxLog]

/// One piece of a LogPoly on (lo, hi): sum of c[k+2][j] * t^k * log(t)^j.
struct LogPolyPiece {
    double lo = 0.0;
    double hi = 0.0;  // may be +inf on the last piece
    std::array<std::array<double, kMaxLog + 1>, kMaxPow - kMinPow + 1> coef{};

    double& at(int k, int j) { return coef[static_cast<std::size_t>(k - kMinPow)][static_cast<std::size_t>(j)]; }
    double get(int k, int j) const { return coef[static_cast<std::size_t>(k - kMinPow)][static_cast<std::size_t>(j)]; }
    double eval(double t) const;
};

/// Piecewise function on (0, inf) whose pieces are polynomials in t^k and
/// log(t)^j within the fixed degree box. Closed under addition, scalar
/// multiples and (degree permitting) multiplication; definite integrals come
/// from the closed-form antiderivative table. Immutable in normal use.
class LogPoly {
public:
    LogPoly() = default;  // identically zero
    explicit LogPoly(std::vector<LogPolyPiece> pieces);

    static LogPoly from_step(const StepFunction& f);
    static LogPoly constant(double c);  // c on all of (0, inf)

    const std::vector<LogPolyPiece>& pieces() const { return pieces_; }
    bool is_zero() const { return pieces_.empty(); }
    std::vector<double> breakpoints() const;  // finite interior breakpoints

    double value_at(double t) const;    // evaluation, t > 0 (right-continuous at breaks)
    double value_left(double t) const;  // limit from below at t > 0

    double prefix_integral(double t) const;  // exact integral over (0, t)

    LogPoly operator+(const LogPoly& other) const;
    LogPoly scale(double c) const;
    LogPoly square() const;  // exact; throws internal_error on degree overflow

private:
    std::vector<LogPolyPiece> pieces_;  // contiguous, pieces_.front().lo == 0
    const LogPolyPiece* piece_containing(double t, bool left) const;
};

/// Bug sentinel: raised when an operation would leave the degree box or an
/// algebraic identity that must hold fails. Not a user input error.
struct internal_error : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace ncdist
