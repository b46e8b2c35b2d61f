#include "scalenet/propagation.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "scalenet/series.hpp"

namespace scalenet {

namespace {

constexpr double kEnsureTol = 1e-12;
constexpr double kTauTol = 1e-10;
constexpr double kPowerSafety = 1e-9;
constexpr std::size_t kDirectLimit = std::size_t{1} << 24;

void check_dc(const DcParams& dc) {
    if (!(dc.C > 0.0) || !(dc.D > 0.0)) throw std::invalid_argument("DC parameters must be positive");
}

ConvexSeries ring_series(const DcParams& dc, double alpha) {
    const double c = dc.ring_width();
    const double y_convex = (6.0 - 3.0 * c) * (alpha + 1.0) / (6.0 * (alpha - 1.0));
    return ConvexSeries{
        [c, alpha](double x) { return (6.0 * x + 3.0) / std::pow(1.0 + c * x, alpha); },
        [c, alpha](double x0) {
            const double y0 = 1.0 + c * x0;
            return 6.0 / (c * c) * std::pow(y0, 2.0 - alpha) / (alpha - 2.0) +
                   (3.0 / c - 6.0 / (c * c)) * std::pow(y0, 1.0 - alpha) / (alpha - 1.0);
        },
        std::max(1.0, (y_convex - 1.0) / c),
    };
}

// Midpoint bound over the ring range (a, b] for a convex term:
// sum_{k=a+1}^{b} f(k) <= integral_{a+1/2}^{b+1/2} f.
double finite_tail(const ConvexSeries& s, double a, double b) {
    return s.tail_integral(a + 0.5) - s.tail_integral(b + 0.5);
}

}  // namespace

double attenuation(const PropagationModel& model, double d) {
    if (!(model.alpha > 0.0)) throw std::invalid_argument("path-loss exponent must be positive");
    if (!(d >= 0.0)) throw std::invalid_argument("distance must be non-negative");
    if (model.kind == ModelKind::A) {
        if (d == 0.0) throw std::domain_error("Model A undefined at zero distance");
        return std::pow(d, -model.alpha);
    }
    return std::pow(1.0 + d, -model.alpha);
}

double sinr(const TxConfig& cfg, const RadioParams& radio, const PropagationModel& model) {
    const double signal = radio.power * attenuation(model, distance(cfg.transmitter, cfg.receiver));
    CompensatedSum interference;
    for (const Point& t : cfg.interferers)
        interference.add(radio.power * attenuation(model, distance(t, cfg.receiver)));
    return signal / (radio.noise + interference.value());
}

bool sinr_success(const TxConfig& cfg, const RadioParams& radio, const PropagationModel& model) {
    return sinr(cfg, radio, model) >= radio.beta;
}

bool dc_satisfied(const TxConfig& cfg, const DcParams& dc) {
    if (distance(cfg.transmitter, cfg.receiver) > dc.C) return false;
    const double spacing = dc.spacing();
    const auto& others = cfg.interferers;
    for (std::size_t i = 0; i < others.size(); ++i) {
        if (distance(others[i], cfg.transmitter) < spacing) return false;
        for (std::size_t j = i + 1; j < others.size(); ++j)
            if (distance(others[i], others[j]) < spacing) return false;
    }
    return true;
}

double interference_series(const DcParams& dc, double alpha, RingLimit rings) {
    check_dc(dc);
    if (!(alpha > 0.0)) throw std::invalid_argument("path-loss exponent must be positive");
    if (!rings) {
        if (!(alpha > 2.0)) throw std::domain_error("divergent series: unbounded ring sum needs alpha > 2");
        return sum_convex_series(ring_series(dc, alpha), kEnsureTol).value;
    }
    const double c = dc.ring_width();
    const ConvexSeries series = ring_series(dc, alpha);
    // Past kDirectLimit rings the remainder is bounded by a midpoint integral,
    // which needs a closed-form tail (alpha > 2) and convexity there.
    const bool bounded_tail = alpha > 2.0 && series.convex_from <= static_cast<double>(kDirectLimit);
    const std::size_t direct = bounded_tail ? std::min(*rings, kDirectLimit) : *rings;
    CompensatedSum sum;
    for (std::size_t k = 1; k <= direct; ++k) {
        const double kd = static_cast<double>(k);
        sum.add((6.0 * kd + 3.0) / std::pow(1.0 + c * kd, alpha));
    }
    double value = sum.value();
    if (*rings > direct)
        value += finite_tail(series, static_cast<double>(direct), static_cast<double>(*rings));
    return value;
}

double ensure_sum(const DcParams& dc, double alpha, RingLimit rings) {
    return std::pow(1.0 + dc.C, alpha) * interference_series(dc, alpha, rings);
}

double ensure_sum_model_a(double D, double alpha) {
    if (!(D > 0.0)) throw std::invalid_argument("D must be positive");
    if (!(alpha > 2.0)) throw std::domain_error("divergent series: Model-A ring sum needs alpha > 2");
    const double inner = 6.0 * zeta(alpha - 1.0, kEnsureTol) + 3.0 * zeta(alpha, kEnsureTol);
    return std::pow(1.0 + D / 2.0, -alpha) * inner;
}

RingLimit rings_for_diameter(const DcParams& dc, std::optional<double> diameter) {
    if (!diameter) return std::nullopt;
    if (!(*diameter >= 0.0)) throw std::invalid_argument("region diameter must be non-negative");
    return static_cast<std::size_t>(std::floor(*diameter / dc.ring_width()));
}

double sinr_lower_bound(const DcParams& dc, const RadioParams& radio, double alpha,
                        double max_interferer_distance) {
    const RingLimit rings = rings_for_diameter(dc, max_interferer_distance);
    const double s = interference_series(dc, alpha, rings);
    return 1.0 / (std::pow(1.0 + dc.C, alpha) * (radio.noise / radio.power + s));
}

bool ensures_sinr(const DcParams& dc, double alpha, double beta, std::optional<double> diameter) {
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
    return ensure_sum(dc, alpha, rings_for_diameter(dc, diameter)) < 1.0 / beta;
}

double tau(double alpha) {
    if (!(alpha > 2.0)) throw std::domain_error("tau needs alpha > 2");
    const double inner = 6.0 * zeta(alpha - 1.0, kTauTol) + 3.0 * zeta(alpha, kTauTol);
    return 2.0 * std::pow(inner, 1.0 / alpha);
}

bool sufficient_pair(const DcParams& dc, double alpha, double beta) {
    check_dc(dc);
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
    const double lhs = (1.0 + dc.C) / dc.spacing();
    return lhs < 1.0 / (tau(alpha) * std::pow(beta, 1.0 / alpha));
}

double find_D_for_C(double C, double alpha, double beta) {
    if (!(C > 0.0)) throw std::invalid_argument("C must be positive");
    if (!(alpha > 2.0)) throw std::domain_error("find_D_for_C needs alpha > 2");
    auto passes = [&](double D) { return ensures_sinr({C, D}, alpha, beta, std::nullopt); };

    double failing = 0.0;
    double passing = std::numeric_limits<double>::quiet_NaN();
    for (int k = 0; k <= 200; ++k) {
        const double D = std::ldexp(1e-3, k);
        if (passes(D)) {
            passing = D;
            break;
        }
        failing = D;
    }
    if (std::isnan(passing)) throw std::runtime_error("no ensuring D found on the search grid");
    for (int i = 0; i < 40; ++i) {
        const double mid = 0.5 * (failing + passing);
        if (passes(mid))
            passing = mid;
        else
            failing = mid;
    }
    return passing;
}

double min_power(const DcParams& dc, double alpha, double beta, double noise,
                 std::optional<double> diameter) {
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
    if (!(noise >= 0.0)) throw std::invalid_argument("noise power must be non-negative");
    const double s = interference_series(dc, alpha, rings_for_diameter(dc, diameter));
    const double margin = 1.0 / (beta * std::pow(1.0 + dc.C, alpha)) - s;
    if (!(margin > 0.0)) throw std::runtime_error("pair does not ensure criterion");
    return noise / margin * (1.0 + kPowerSafety);
}

TxConfig adversarial_config(const DcParams& dc, std::size_t m) {
    check_dc(dc);
    if (m < 1) throw std::invalid_argument("adversarial_config needs m >= 1");
    const double delta = dc.spacing();
    TxConfig cfg;
    cfg.receiver = {0.0, 0.0};
    cfg.transmitter = {dc.C, 0.0};
    cfg.interferers.reserve(m);
    for (std::size_t k = 1; cfg.interferers.size() < m; ++k) {
        const double radius = 2.0 * static_cast<double>(k) * delta;
        const double step = 2.0 * std::asin(delta / (2.0 * radius)) * (1.0 + 1e-12);
        // Consecutive chords equal delta; the gap closing the circle lands in [delta, 2 delta).
        const auto count = static_cast<std::size_t>(std::floor(2.0 * std::numbers::pi / step));
        for (std::size_t j = 0; j < count && cfg.interferers.size() < m; ++j) {
            const double a = static_cast<double>(j) * step;
            cfg.interferers.push_back({radius * std::cos(a), radius * std::sin(a)});
        }
    }
    return cfg;
}

double adversarial_sinr_bound(const DcParams& dc, double alpha, std::size_t m) {
    check_dc(dc);
    // floor(sqrt(m/7) - 2) = s - 2 with s the largest integer with 7 s^2 <= m.
    std::size_t s = static_cast<std::size_t>(std::sqrt(static_cast<double>(m) / 7.0));
    while (7 * (s + 1) * (s + 1) <= m) ++s;
    while (s > 0 && 7 * s * s > m) --s;
    if (s < 3) return std::numeric_limits<double>::infinity();
    const std::size_t upper = s - 2;
    CompensatedSum sum;
    for (std::size_t k = 1; k <= upper; ++k) sum.add(std::pow(static_cast<double>(k), 1.0 - alpha));
    const double ratio = (1.0 + 2.0 * dc.spacing()) / (1.0 + dc.C);
    return std::pow(ratio, alpha) / (7.0 * sum.value());
}

double converse_threshold(const DcParams& dc, double alpha) {
    check_dc(dc);
    if (!(alpha > 2.0)) throw std::domain_error("converse threshold needs alpha > 2");
    const double ratio = (1.0 + 2.0 * dc.spacing()) / (1.0 + dc.C);
    return std::pow(ratio, alpha) / (7.0 * zeta(alpha - 1.0));
}

double converse_small_threshold(double alpha) {
    if (!(alpha > 2.0)) throw std::domain_error("converse threshold needs alpha > 2");
    return 1.0 / (7.0 * zeta(alpha - 1.0));
}

}  // namespace scalenet
