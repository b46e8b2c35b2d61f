#pragma once

#include <cmath>
#include <cstddef>
#include <functional>

namespace scalenet {

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// A positive, eventually decreasing and convex summand together with the
/// closed-form tail integral of_tail(x0) = integral of term over [x0, inf).
struct ConvexSeries {
    std::function<double(double)> term;
    std::function<double(double)> tail_integral;
    double convex_from = 1.0;  // term is convex on [convex_from, inf)
};

struct SeriesEstimate {
    double value = 0.0;     // partial sum plus midpoint tail, an upper estimate
    double lower = 0.0;     // partial sum plus trapezoid tail, a lower estimate
    std::size_t terms = 0;  // explicitly summed terms
};

/// Sum over k >= 1. Terms are added explicitly until the bracket between the
/// midpoint tail integral (an upper bound for convex terms) and the trapezoid
/// tail (a lower bound) is within rel_tol of the total; the returned value
/// carries the upper tail. Capped at max_terms, where the bracket is reported
/// as is.
SeriesEstimate sum_convex_series(const ConvexSeries& series, double rel_tol,
                                 std::size_t max_terms = std::size_t{1} << 26);

/// Riemann zeta for s > 1 as an upper estimate within rel_tol.
double zeta(double s, double rel_tol = 1e-12);

}  // namespace scalenet
