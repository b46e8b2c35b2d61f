#include "scalenet/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "scalenet/propagation.hpp"

namespace scalenet::analysis {

namespace {

double chernoff_exponent(std::size_t n, double q, double nu) {
    return -static_cast<double>(n) * q * (nu * std::log(nu / std::numbers::e) + 1.0);
}

// C / n^gamma for the connectivity-limited choice; gamma cancels.
double reference_ratio(double n) { return std::sqrt(2.0 / kA * std::log(n) / n); }

}  // namespace

double chernoff_upper(std::size_t n, double q, double nu) {
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("chernoff_upper needs 0 < q < 1");
    if (!(nu >= 1.0 && nu < 1.0 / q)) throw std::invalid_argument("chernoff_upper needs 1 <= nu < 1/q");
    return std::min(1.0, std::exp(chernoff_exponent(n, q, nu)));
}

double chernoff_lower(std::size_t n, double q, double nu) {
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("chernoff_lower needs 0 < q < 1");
    if (!(nu > 0.0 && nu <= 1.0)) throw std::invalid_argument("chernoff_lower needs 0 < nu <= 1");
    return std::min(1.0, std::exp(chernoff_exponent(n, q, nu)));
}

double intersect_prob_bound(double z, std::size_t n, double gamma) {
    const double radius = std::pow(static_cast<double>(n), gamma);
    if (!(z >= 0.0) || z > radius) throw std::invalid_argument("intersect_prob_bound needs 0 <= z <= n^gamma");
    return std::min(1.0, 6.0 * z / radius);
}

double load_bound(std::size_t n, double gamma, double C) {
    if (!(C > 0.0)) throw std::invalid_argument("C must be positive");
    return kRouteLoad * std::pow(static_cast<double>(n), gamma) / C + 1.0;
}

double txset_bound(std::size_t n, double gamma, double C, double D) {
    const double v = C * (2.0 + D) / std::pow(static_cast<double>(n), gamma);
    return 18.0 / std::numbers::pi * static_cast<double>(n) * v * v;
}

double throughput_floor(std::size_t n, double gamma, double C, double D, double W) {
    const double nd = static_cast<double>(n);
    return W / (kThroughput * std::pow(nd, 1.0 - gamma) * C * (2.0 + D) * (2.0 + D));
}

double growth_condition(std::size_t n, double gamma, double C) {
    const double rho = C / std::pow(static_cast<double>(n), gamma);
    return kA * static_cast<double>(n) * rho * rho + std::log(rho);
}

double gk_connectivity(std::size_t n, double gamma, double C) {
    const double nd = static_cast<double>(n);
    const double rho = C / std::pow(nd, gamma);
    return nd * rho * rho - std::log(nd);
}

double gk_reference_params(std::size_t n, double gamma) {
    if (n < 2) throw std::invalid_argument("gk_reference_params needs n >= 2");
    const double nd = static_cast<double>(n);
    return std::pow(nd, gamma - 0.5) * std::sqrt(2.0 / kA * std::log(nd));
}

std::size_t regime_threshold_n() {
    // The ratio is decreasing for n >= 3; bracket then bisect on integers.
    std::size_t lo = 3;
    std::size_t hi = 4;
    while (reference_ratio(static_cast<double>(hi)) >= 0.5) {
        lo = hi;
        hi *= 2;
    }
    while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (reference_ratio(static_cast<double>(mid)) < 0.5)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

TheoremParams theorem_choice(std::size_t n, double gamma, double alpha, double beta) {
    if (n < 2) throw std::invalid_argument("theorem_params needs n >= 2");
    if (!(gamma >= 0.0)) throw std::invalid_argument("gamma must be non-negative");
    if (!(alpha > 2.0)) throw std::invalid_argument("theorem_params needs alpha > 2");
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
    TheoremParams out;
    if (gamma < 0.5) {
        out.C = 0.25;
        out.D = find_D_for_C(out.C, alpha, beta);
    } else {
        out.C = gk_reference_params(n, gamma);
        out.D = find_D_for_C(1.0, alpha, beta);
        if (!ensures_sinr({out.C, out.D}, alpha, beta, std::nullopt))
            throw std::runtime_error("reference D does not ensure SINR at the actual C");
    }
    return out;
}

TheoremParams theorem_params(std::size_t n, double gamma, double alpha, double beta, double noise) {
    if (!(noise > 0.0)) throw std::invalid_argument("noise power must be positive");
    TheoremParams out = theorem_choice(n, gamma, alpha, beta);
    const double ratio = out.C / std::pow(static_cast<double>(n), gamma);
    if (!(ratio < 0.5))
        throw RegimeError("asymptotic regime not yet reached: C / n^gamma = " + std::to_string(ratio) +
                          " >= 1/2 (needs n >= " + std::to_string(regime_threshold_n()) + ")");
    out.P = min_power({out.C, out.D}, alpha, beta, noise, std::nullopt);
    return out;
}

}  // namespace scalenet::analysis
