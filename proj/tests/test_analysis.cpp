#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <stdexcept>

#include "oracles.hpp"
#include "scalenet/analysis.hpp"
#include "scalenet/propagation.hpp"

using namespace scalenet;
using namespace scalenet::analysis;

TEST_CASE("constants") {
    CHECK(kA == doctest::Approx(std::log(std::numbers::e / 2.0) / (8192.0 * std::numbers::pi)).epsilon(1e-15));
    CHECK(kRouteLoad == doctest::Approx(3.0 * 8192.0 * std::numbers::pi).epsilon(1e-15));
    CHECK(kThroughput == 442368.0);
    CHECK(kMu == 1.0 / 512.0);
    // 3 * 2^13 * pi * 18/pi = 54 * 2^13 = 27 * 2^14
    CHECK(kRouteLoad * 18.0 / std::numbers::pi == doctest::Approx(kThroughput).epsilon(1e-15));
}

TEST_CASE("chernoff bounds") {
    CHECK(chernoff_upper(20, 0.3, 1.0) == 1.0);
    CHECK(chernoff_lower(20, 0.3, 1.0) == 1.0);
    double prev = 2.0;
    for (double nu = 1.0; nu < 1.0 / 0.1; nu += 0.25) {
        const double b = chernoff_upper(30, 0.1, nu);
        CHECK(b <= prev);
        prev = b;
    }
    prev = 2.0;
    for (double nu = 1.0; nu > 0.01; nu -= 0.05) {
        const double b = chernoff_lower(30, 0.1, nu);
        CHECK(b <= prev);
        prev = b;
    }
    for (std::size_t n = 1; n <= 30; n += 7)
        for (double q : {0.1, 0.3, 0.5}) {
            for (double nu = 1.0; nu < 1.0 / q; nu += 0.1)
                CHECK(chernoff_upper(n, q, nu) >= oracle::binom_upper(n, q, nu * n * q));
            for (double nu = 0.05; nu <= 1.0; nu += 0.05)
                CHECK(chernoff_lower(n, q, nu) >= oracle::binom_lower(n, q, nu * n * q));
        }
    CHECK_THROWS_AS(chernoff_upper(10, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(chernoff_upper(10, 0.5, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(chernoff_upper(10, 0.5, 0.9), std::invalid_argument);
    CHECK_THROWS_AS(chernoff_lower(10, 0.5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(chernoff_lower(10, 0.5, 1.1), std::invalid_argument);
}

TEST_CASE("intersection probability bound") {
    CHECK(intersect_prob_bound(std::pow(100.0, 0.5), 100, 0.5) == 1.0);
    CHECK(intersect_prob_bound(0.2, 100, 0.5) == doctest::Approx(2.0 * intersect_prob_bound(0.1, 100, 0.5)));
    CHECK_THROWS_AS(intersect_prob_bound(11.0, 100, 0.5), std::invalid_argument);

    // Cell of diameter z at the center: the disk of radius z/2.
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const std::size_t n = 400;
    const double R = std::pow(static_cast<double>(n), 0.5);
    auto point = [&] {
        const double r = R * std::sqrt(U(rng)), a = 2.0 * std::numbers::pi * U(rng);
        return Point{r * std::cos(a), r * std::sin(a)};
    };
    const double z = 0.05 * R;
    const int lines = 20000;
    int hits = 0;
    for (int i = 0; i < lines; ++i) {
        const Point a = point(), b = point();
        const Point ab = b - a;
        const double t = std::clamp(-dot(a, ab) / dot(ab, ab), 0.0, 1.0);
        if (norm(a + t * ab) <= z / 2.0) ++hits;
    }
    const double p = static_cast<double>(hits) / lines;
    CHECK(p - 3.0 * std::sqrt(p * (1 - p) / lines) <= intersect_prob_bound(z, n, 0.5));
}

TEST_CASE("load, transmitter-set and throughput bounds") {
    CHECK(load_bound(123, 0.0, 0.25) == doctest::Approx(12.0 * 8192.0 * std::numbers::pi + 1.0).epsilon(1e-15));
    CHECK(load_bound(900, 0.5, 2.0) - 1.0 == doctest::Approx((load_bound(900, 0.5, 1.0) - 1.0) / 2.0));
    CHECK(txset_bound(900, 0.5, 1.0, 3.0) == doctest::Approx(txset_bound(900, 0.5, 1.0, 1.0) * 25.0 / 9.0));
    // gamma = 1/2 with C(2+D) fixed: constant in n.
    CHECK(txset_bound(1000, 0.5, 2.0, 1.0) == doctest::Approx(txset_bound(64000, 0.5, 2.0, 1.0)).epsilon(1e-13));
    CHECK(throughput_floor(500, 0.2, 0.25, 4.0, 3.0) == doctest::Approx(3.0 * throughput_floor(500, 0.2, 0.25, 4.0, 1.0)));
    // The floor is W over the product of the two bounds' leading terms.
    for (std::size_t n : {100, 5000})
        for (double g : {0.0, 0.3, 0.5}) {
            const double lead = (load_bound(n, g, 0.7) - 1.0) * txset_bound(n, g, 0.7, 2.5);
            CHECK(1.0 / lead == doctest::Approx(throughput_floor(n, g, 0.7, 2.5, 1.0)).epsilon(1e-13));
        }
    double prev = 0.0;
    for (double g = 0.0; g < 0.5; g += 0.05) {
        const double f = throughput_floor(2000, g, 0.25, 4.0, 1.0);
        CHECK(f > prev);
        prev = f;
    }
}

TEST_CASE("growth and connectivity expressions") {
    const double b = 1.0 / std::sqrt(2.0 * kA);
    for (double nd : {1e3, 1e6, 1e9}) {
        const auto n = static_cast<std::size_t>(nd);
        for (double g : {0.0, 0.5, 0.8}) {
            const double C = std::pow(nd, g) * b * std::sqrt(std::log(nd) / nd);
            CHECK(growth_condition(n, g, C) ==
                  doctest::Approx(0.5 * std::log(std::log(nd)) + std::log(b)).epsilon(1e-12));
            CHECK(gk_connectivity(n, g, C) == doctest::Approx((b * b - 1.0) * std::log(nd)).epsilon(1e-12));
            const double C1 = std::pow(nd, g) * std::sqrt(std::log(nd) / nd);
            CHECK(std::abs(gk_connectivity(n, g, C1)) < 1e-9 * std::log(nd));
        }
    }
    double prev = -INFINITY;
    for (double C = 0.01; C < 10.0; C *= 1.5) {
        const double v = growth_condition(1000, 0.5, C);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("regime threshold") {
    const std::size_t n0 = regime_threshold_n();
    for (double g : {0.5, 0.7}) {
        auto ratio = [g](std::size_t n) { return gk_reference_params(n, g) / std::pow(static_cast<double>(n), g); };
        CHECK(ratio(n0) < 0.5);
        CHECK(ratio(n0 - 1) >= 0.5 * (1.0 - 1e-12));
        CHECK(ratio(10 * n0) < ratio(n0));
    }
}

TEST_CASE("theorem parameters") {
    SUBCASE("gamma below one half: n-independent") {
        const auto a = theorem_params(100, 0.3, 3.0, 1.0, 1.0);
        const auto b = theorem_params(100000, 0.3, 3.0, 1.0, 1.0);
        CHECK(a.C == 0.25);
        CHECK(a.D == b.D);
        CHECK(a.P == b.P);
        CHECK(ensures_sinr({a.C, a.D}, 3.0, 1.0, std::nullopt));
    }
    SUBCASE("gamma at least one half: refused before the regime") {
        CHECK_THROWS_AS(theorem_params(2000, 0.5, 3.0, 1.0, 1.0), RegimeError);
        try {
            theorem_params(2000, 0.5, 3.0, 1.0, 1.0);
        } catch (const RegimeError& e) {
            CHECK(std::string(e.what()).find("asymptotic regime not yet reached") == 0);
        }
    }
    SUBCASE("gamma at least one half: past the regime threshold") {
        const std::size_t n = 2 * regime_threshold_n();
        const auto tp = theorem_params(n, 0.5, 3.0, 1.0, 1.0);
        CHECK(tp.C == gk_reference_params(n, 0.5));
        CHECK(tp.C / std::sqrt(static_cast<double>(n)) < 0.5);
        CHECK(ensures_sinr({tp.C, tp.D}, 3.0, 1.0, std::nullopt));
        CHECK(std::isfinite(tp.P));
        CHECK(tp.P > 0.0);
    }
    SUBCASE("C grows as sqrt(ln n) at gamma = 1/2") {
        for (double nd : {1e3, 1e5, 1e7, 1e9}) {
            const auto n = static_cast<std::size_t>(nd);
            CHECK(theorem_choice(n, 0.5, 3.0, 1.0).C / std::sqrt(std::log(nd)) ==
                  doctest::Approx(std::sqrt(2.0 / kA)).epsilon(1e-13));
        }
    }
    CHECK_THROWS_AS(theorem_params(100, 0.3, 2.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(theorem_params(100, 0.3, 3.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("Model A reference parameters") {
    for (double nd : {1e8, 1e9}) {
        const auto n = static_cast<std::size_t>(nd);
        const double C = gk_reference_params(n, 0.5);
        CHECK(C / std::sqrt(nd) < 0.5);
        CHECK(growth_condition(n, 0.5, C) > 0.0);
    }
    // The Model-A ensure sum is C-free and falls below 1/beta for large D.
    const double alpha = 3.0, beta = 1.0;
    const double S = (6.0 * oracle::kZeta2 + 3.0 * oracle::kZeta3);
    CHECK(ensure_sum_model_a(1.0, alpha) == doctest::Approx(S / std::pow(1.5, alpha)).epsilon(1e-11));
    double D = 1.0;
    while (ensure_sum_model_a(D, alpha) >= 1.0 / beta) D *= 2.0;
    CHECK(D < 1e3);
}
