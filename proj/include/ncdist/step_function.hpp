#pragma once

#include <string>
#include <vector>

namespace ncdist {

struct Piece {
    double length = 0.0;  // positive; may be +inf on the last piece only
    double value = 0.0;   // nonnegative
};

/// Decreasing right-continuous nonnegative step function on (0, inf).
/// Implicitly zero after the last piece; the last piece may have infinite
/// length (a constant tail). Immutable after construction.
class StepFunction {
public:
    StepFunction() = default;  // identically zero
    explicit StepFunction(std::vector<Piece> pieces);

    static StepFunction indicator(double length, double value = 1.0);

    const std::vector<Piece>& pieces() const { return pieces_; }
    // Cumulative right endpoints of the pieces (last may be inf).
    const std::vector<double>& bounds() const { return bounds_; }

    bool is_zero() const { return pieces_.empty(); }
    bool has_infinite_tail() const;
    double support_length() const;
    double total_integral() const;

    double value_at(double t) const;    // right-continuous evaluation, t > 0
    double value_left(double t) const;  // limit from below at t > 0
    double sup_value() const;           // value on the first piece (0 if zero)

    // n_f(s) = measure of {f > s}; right-continuous in s, may be +inf.
    double distribution_at(double s) const;
    // mu(t) = inf{s >= 0 : n_f(s) <= t}; recovers value_at for t inside the support.
    double mu_inverse(double t) const;

    double prefix_integral(double t) const;  // exact value of the integral over (0, t)
    double integral_pow(double p) const;     // integral of f^p over (0, inf), p > 0

    StepFunction dilate(double s) const;  // lengths multiplied by s > 0
    StepFunction power(double p) const;   // pointwise f^p, p > 0
    StepFunction scale(double c) const;   // pointwise c*f, c >= 0
    StepFunction restrict_to(double t) const;  // f restricted to (0, t)

    std::string to_json() const;
    static StepFunction from_json(const std::string& text);

private:
    std::vector<Piece> pieces_;
    std::vector<double> bounds_;
};

/// Compares f and g as functions (not piece lists): sup-norm within tol
/// relative to the larger sup, checked at all breakpoints from both sides.
bool approx_equal(const StepFunction& f, const StepFunction& g, double tol);

}  // namespace ncdist
