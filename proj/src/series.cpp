#include "scalenet/series.hpp"

#include <stdexcept>

namespace scalenet {

SeriesEstimate sum_convex_series(const ConvexSeries& series, double rel_tol,
                                 std::size_t max_terms) {
    CompensatedSum partial;
    std::size_t k = 0;
    SeriesEstimate out;
    // Convexity on [K + 1/2, inf) is needed for the midpoint tail to bound.
    const double first_check = std::max(1.0, std::ceil(series.convex_from - 0.5));
    while (true) {
        ++k;
        partial.add(series.term(static_cast<double>(k)));
        if (static_cast<double>(k) < first_check) continue;
        if (k >= 64 && k % 32 != 0) continue;
        const double kd = static_cast<double>(k);
        const double upper_tail = series.tail_integral(kd + 0.5);
        const double lower_tail = series.tail_integral(kd + 1.0) + 0.5 * series.term(kd + 1.0);
        const double total = partial.value() + upper_tail;
        out.value = total;
        out.lower = partial.value() + lower_tail;
        out.terms = k;
        if (upper_tail - lower_tail <= rel_tol * total || k >= max_terms) return out;
    }
}

double zeta(double s, double rel_tol) {
    if (!(s > 1.0)) throw std::domain_error("zeta needs s > 1");
    ConvexSeries series{
        [s](double x) { return std::pow(x, -s); },
        [s](double x0) { return std::pow(x0, 1.0 - s) / (s - 1.0); },
        1.0,
    };
    return sum_convex_series(series, rel_tol).value;
}

}  // namespace scalenet
