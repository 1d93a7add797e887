#pragma once

#include <limits>
#include <vector>

#include "ncdist/log_poly.hpp"
#include "ncdist/step_function.hpp"

namespace ncdist {

enum class DominationMode { pointwise, submajorization };

struct RatioResult {
    double ratio = 0.0;        // sup of f/g (or of the prefix-integral ratio); may be +inf
    double witness_t = 0.0;    // point realizing the sup
    bool witness_left = false; // true when attained as a limit from below
    int samples_per_piece = 0;
};

/// Non-owning view over either function representation.
class FnView {
public:
    FnView(const StepFunction& f) : step_(&f) {}
    FnView(const LogPoly& g) : poly_(&g) {}

    double value_at(double t) const;
    double value_left(double t) const;
    double prefix_integral(double t) const;
    std::vector<double> breakpoints() const;  // finite positive breakpoints
    bool nonzero_beyond(double t) const;
    bool is_zero() const;

private:
    const StepFunction* step_ = nullptr;
    const LogPoly* poly_ = nullptr;
};

/// Sup of f/g over an adaptive grid: all breakpoints of both operands
/// (evaluated from both sides) plus log-spaced interior samples, refined from
/// 8 up to 64 samples per piece or until the sup moves by less than tol.
/// Convention: 0/0 contributes 1, positive/0 contributes +inf.
RatioResult domination_ratio(FnView f, FnView g, DominationMode mode, double tol,
                             double t_max = std::numeric_limits<double>::infinity());

}  // namespace ncdist
