#pragma once

#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>

namespace scalenet::analysis {

// a = ln(e/2) / (2^13 pi)
inline constexpr double kA = (1.0 - std::numbers::ln2) / (8192.0 * std::numbers::pi);
// Route-load constant 3 * 2^13 * pi.
inline constexpr double kRouteLoad = 3.0 * 8192.0 * std::numbers::pi;
// Throughput constant 27 * 2^14.
inline constexpr double kThroughput = 27.0 * 16384.0;
// Cell-area constant of the partition, area >= mu z^2.
inline constexpr double kMu = 1.0 / 512.0;

/// Chernoff bound on Pr(Y > nu n q) for Y ~ Binomial(n, q). Needs 0 < q < 1
/// and 1 <= nu < 1/q.
double chernoff_upper(std::size_t n, double q, double nu);

/// Chernoff bound on Pr(Y < nu n q). Needs 0 < q < 1 and 0 < nu <= 1.
double chernoff_lower(std::size_t n, double q, double nu);

/// min(1, 6 z / n^gamma), the per-cell line intersection bound. Needs z <= n^gamma.
double intersect_prob_bound(double z, std::size_t n, double gamma);

/// c_route n^gamma / C + 1.
double load_bound(std::size_t n, double gamma, double C);

/// (18/pi) n (C(2+D)/n^gamma)^2.
double txset_bound(std::size_t n, double gamma, double C, double D);

/// W / (c_thru n^(1-gamma) C (2+D)^2).
double throughput_floor(std::size_t n, double gamma, double C, double D, double W);

/// a n (C/n^gamma)^2 + ln(C/n^gamma); must diverge for the construction to connect.
double growth_condition(std::size_t n, double gamma, double C);

/// n (C/n^gamma)^2 - ln n, the classical connectivity expression.
double gk_connectivity(std::size_t n, double gamma, double C);

/// Thrown when C / n^gamma >= 1/2 at the requested n.
class RegimeError : public std::runtime_error {
public:
    explicit RegimeError(const std::string& what) : std::runtime_error(what) {}
};

struct TheoremParams {
    double C = 0.0;
    double D = 0.0;
    double P = 0.0;
};

/// The (C, D) choice of theorem_params without the regime check or power.
TheoremParams theorem_choice(std::size_t n, double gamma, double alpha, double beta);

/// gamma < 1/2: C = 1/4 with D from find_D_for_C, n-independent power.
/// gamma >= 1/2: C = n^(gamma-1/2) sqrt((2/a) ln n), D found at reference C = 1
/// (the ensure sum decreases in C, so it holds for every C >= 1) and re-checked
/// at the actual C; power from min_power at the actual C.
/// Throws RegimeError when C / n^gamma >= 1/2.
TheoremParams theorem_params(std::size_t n, double gamma, double alpha, double beta, double noise);

/// n^(gamma-1/2) sqrt((2/a) ln n), the connectivity-limited hop length.
double gk_reference_params(std::size_t n, double gamma);

/// Smallest n with gk_reference_params(n, gamma) / n^gamma < 1/2 (independent of gamma).
std::size_t regime_threshold_n();

}  // namespace scalenet::analysis
