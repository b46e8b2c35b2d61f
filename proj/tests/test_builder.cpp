#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <stdexcept>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "scalenet/builder.hpp"
#include "scalenet/random.hpp"

using namespace scalenet;

namespace {

std::size_t nearest_node(const Instance& inst, Point q) { return oracle::nearest_scan(inst.nodes, q); }

void check_routes(const Instance& inst, const RouteTable& t, double C) {
    REQUIRE(t.feasible);
    REQUIRE(t.routes.size() == inst.n);
    for (std::size_t r = 0; r < inst.n; ++r) {
        const Route& route = t.routes[r];
        CHECK(route.pair == r);
        REQUIRE(!route.hops.empty());
        CHECK(route.hops.front().transmitter == inst.pairs[r].source);
        CHECK(route.hops.back().receiver == inst.pairs[r].destination);
        std::set<std::size_t> tx;
        for (std::size_t j = 0; j < route.hops.size(); ++j) {
            if (j + 1 < route.hops.size()) CHECK(route.hops[j].receiver == route.hops[j + 1].transmitter);
            CHECK(tx.insert(route.hops[j].transmitter).second);
            CHECK(distance(inst.nodes[route.hops[j].transmitter], inst.nodes[route.hops[j].receiver]) <= C);
        }
    }
    CHECK(t.max_hop_length <= C);
}

}  // namespace

TEST_CASE("sample_instance") {
    const Instance a = sample_instance(300, 0.5, 42), b = sample_instance(300, 0.5, 42);
    CHECK(a.nodes == b.nodes);
    CHECK(a.pairs == b.pairs);
    CHECK(sample_instance(300, 0.5, 43).nodes != a.nodes);
    CHECK_NOTHROW(validate_instance(a));
    CHECK(a.disk.radius == doctest::Approx(std::sqrt(300.0)).epsilon(1e-15));

    for (std::uint64_t s = 0; s < 1000; ++s)
        for (const SdPair& p : sample_instance(20, 0.3, s).pairs) REQUIRE(p.source != p.destination);

    // E[r^2] = R^2 / 2, Var[r^2] = R^4 / 12.
    const Instance big = sample_instance(100000, 0.25, 9);
    const double R2 = big.disk.radius * big.disk.radius;
    double m = 0.0;
    for (const Point& p : big.nodes) m += dot(p, p);
    m /= static_cast<double>(big.n);
    CHECK(std::abs(m - R2 / 2.0) <= 3.0 * R2 / std::sqrt(12.0 * static_cast<double>(big.n)));

    CHECK_THROWS_AS(sample_instance(1, 0.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(sample_instance(10, -0.1, 0), std::invalid_argument);

    Instance bad = a;
    bad.pairs[3].destination = bad.pairs[3].source;
    CHECK_THROWS_AS(validate_instance(bad), std::invalid_argument);
    bad = a;
    bad.nodes[0] = {a.disk.radius * 1.01, 0.0};
    CHECK_THROWS_AS(validate_instance(bad), std::invalid_argument);
    bad = a;
    bad.pairs.pop_back();
    CHECK_THROWS_AS(validate_instance(bad), std::invalid_argument);
}

TEST_CASE("routes on an occupied partition") {
    for (double C : {0.45, 0.3}) {
        const Instance inst = fixture::site_instance(C, 500, 5);
        const RouteTable t = build_routes(inst, C);
        check_routes(inst, t, C);
        CHECK(t.z == C / 2.0);
        CHECK(t.cell_count == build_disk_partition(1.0, C / 16.0).size());
        CHECK(t.node_load.size() == inst.n);
        CHECK(t.L == *std::max_element(t.node_load.begin(), t.node_load.end()));
        // Apportioning caps relay traffic at the cell load; the source adds its own route.
        CHECK(t.L <= t.cell_load + 1);
    }
    CHECK_THROWS_WITH_AS(build_routes(fixture::site_instance(0.45, 0, 1), 0.5),
                         "C too large for region", std::invalid_argument);
}

TEST_CASE("relay is the round-robin member of each intermediate cell") {
    const double C = 0.45;
    const Instance inst = fixture::site_instance(C, 2000, 8);
    const Partition part = build_disk_partition(1.0, C / 16.0);
    const RouteTable t = build_routes(inst, C);
    REQUIRE(t.feasible);
    std::vector<std::vector<std::size_t>> members(part.size());
    for (std::size_t v = 0; v < inst.n; ++v) members[part.cell_of(inst.nodes[v])].push_back(v);
    std::vector<std::size_t> seen(part.size(), 0);
    for (std::size_t r = 0; r < inst.n; ++r) {
        const auto cells =
            cells_intersected(part, {inst.nodes[inst.pairs[r].source], inst.nodes[inst.pairs[r].destination]});
        const Route& route = t.routes[r];
        REQUIRE(route.hops.size() == std::max<std::size_t>(1, cells.size() - 1));
        for (std::size_t j = 0; j < cells.size(); ++j) {
            const std::size_t rank = seen[cells[j]]++;
            if (j == 0 || j + 1 == cells.size()) continue;
            const auto& m = members[cells[j]];
            CHECK(route.hops[j].transmitter == m[rank % m.size()]);
        }
    }
    for (std::size_t i = 0; i < part.size(); ++i) CHECK(seen[i] == t.crossings[i]);
}

TEST_CASE("five routes through a two-node cell") {
    const double C = 0.45;
    Instance inst = fixture::site_instance(C, 0, 2);
    const Partition part = build_disk_partition(1.0, C / 16.0);
    const double u = part.u();
    inst.nodes.push_back({0.1 * u, 0.05 * u});
    inst.n = inst.nodes.size();
    const std::size_t extra = inst.n - 1;
    // Filler pairs between two adjacent rim sites, far from the center.
    const std::size_t a = nearest_node(inst, {0.0, 0.95}), b = nearest_node(inst, {u, 0.95});
    REQUIRE(a != b);
    inst.pairs.assign(inst.n, SdPair{a, b});
    const std::size_t dst = nearest_node(inst, {0.6, 0.0});
    for (std::size_t k = 0; k < 5; ++k) inst.pairs[k] = {nearest_node(inst, {-0.2 - 0.1 * k, 0.0}), dst};
    REQUIRE_NOTHROW(validate_instance(inst));

    const RouteTable t = build_routes(inst, C);
    REQUIRE(t.feasible);
    CHECK(t.occupancy[0] == 2);
    CHECK(t.crossings[0] == 5);
    CHECK((t.crossings[0] + t.occupancy[0] - 1) / t.occupancy[0] == 3);
    CHECK(t.node_load[0] == 3);
    CHECK(t.node_load[extra] == 2);
}

TEST_CASE("same-cell pair is a single hop") {
    const double C = 0.45;
    Instance inst = fixture::site_instance(C, 0, 3);
    const double u = build_disk_partition(1.0, C / 16.0).u();
    inst.nodes.push_back({0.1 * u, 0.0});
    inst.n = inst.nodes.size();
    inst.pairs.push_back({inst.n - 1, 0});
    inst.pairs[0] = {0, inst.n - 1};
    const RouteTable t = build_routes(inst, C);
    REQUIRE(t.feasible);
    CHECK(t.routes[0].hops == std::vector<Hop>{{0, inst.n - 1}});
    CHECK(t.routes.back().hops == std::vector<Hop>{{inst.n - 1, 0}});
}

TEST_CASE("random instances with empty crossed cells are reported infeasible") {
    const Instance inst = sample_instance(500, 0.0, 1);
    const BuildResult res = build_system(inst, {0.25, 2.0}, 1.0);
    CHECK(!res.report.feasible);
    CHECK(res.report.empty_cell_hit);
    CHECK(res.report.L == std::numeric_limits<double>::infinity());
    CHECK(res.report.p == std::numeric_limits<double>::infinity());
    CHECK(res.report.lambda == 0.0);
    CHECK(std::isnan(res.report.max_hop_length));
    CHECK(!res.system);
}

TEST_CASE("coloring") {
    SUBCASE("random instances: greedy bound and exact spacing") {
        for (std::uint64_t s = 0; s < 1000; ++s) {
            const Instance inst = sample_instance(60, 0.5, s);
            const double C = 0.2 + 0.001 * static_cast<double>(s), D = 0.5 + 0.002 * static_cast<double>(s);
            const TransmitterSets tx = color_transmitters(inst, C, D);
            REQUIRE(tx.S <= tx.max_degree + 1);
            const double reach = C * (2.0 + D);
            std::size_t deg_max = 0;
            for (std::size_t i = 0; i < inst.n; ++i) {
                REQUIRE(tx.color_of[i] < tx.S);
                std::size_t deg = 0;
                for (std::size_t j = 0; j < inst.n; ++j) {
                    if (i == j) continue;
                    const double d = distance(inst.nodes[i], inst.nodes[j]);
                    if (d <= reach) ++deg;
                    if (tx.color_of[i] == tx.color_of[j]) REQUIRE(d > reach);
                }
                deg_max = std::max(deg_max, deg);
            }
            REQUIRE(tx.max_degree == deg_max);
        }
    }
    SUBCASE("empty graph and clique") {
        Instance inst;
        inst.n = 5;
        inst.disk = Disk{100.0};
        for (int i = 0; i < 5; ++i) inst.nodes.push_back({10.0 * i, 0.0});
        auto tx = color_transmitters(inst, 1.0, 2.0);
        CHECK(tx.S == 1);
        CHECK(tx.max_degree == 0);
        for (auto& p : inst.nodes) p = 0.01 * p;
        tx = color_transmitters(inst, 1.0, 2.0);
        CHECK(tx.S == 5);
        CHECK(tx.max_degree == 4);
        CHECK(tx.color_of == std::vector<std::size_t>{0, 1, 2, 3, 4});
    }
    CHECK_THROWS_AS(color_transmitters(sample_instance(5, 0.0, 0), 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("schedule of a two-node instance") {
    Instance inst;
    inst.n = 2;
    inst.disk = Disk{10.0};
    inst.nodes = {{-5.0, 0.0}, {5.0, 0.0}};
    const std::vector<Route> routes{{0, {{0, 1}}}, {1, {{1, 0}}}};
    TransmitterSets tx = color_transmitters(inst, 1.0, 2.0);
    System sys = schedule(routes, tx, 1);
    CHECK(sys.S == 1);
    CHECK(sys.period == 1);
    CHECK(sys.routes[0].slots == std::vector<std::size_t>{1});
    CHECK(sys.routes[1].slots == std::vector<std::size_t>{1});
    CHECK(throughput(sys, 1.0) == 1.0);

    tx = color_transmitters(inst, 3.0, 2.0);
    sys = schedule(routes, tx, 1);
    CHECK(sys.period == 2);
    CHECK(sys.routes[1].slots == std::vector<std::size_t>{2});
    CHECK(throughput(sys, 1.0) == 0.5);
    CHECK(verify_compatibility(sys));

    CHECK_THROWS_AS(schedule(std::vector<Route>{{0, {{0, 1}}}, {1, {{0, 1}}}}, tx, 1), std::invalid_argument);
}

TEST_CASE("compatibility audit") {
    CHECK(verify_compatibility(System{}));
    System sys{{{0, {{0, 1}, {1, 2}}, {1, 2}}, {1, {{3, 4}}, {1}}}, 2, 1, 2};
    CHECK(verify_compatibility(sys));
    sys.routes[1].hops[0].transmitter = 0;
    CHECK(!verify_compatibility(sys));
    sys.routes[1].slots[0] = 3;
    CHECK(!verify_compatibility(sys));
}

TEST_CASE("schedules of random loop-free routes") {
    for (std::uint64_t s = 0; s < 1000; ++s) {
        const Instance inst = sample_instance(80, 0.5, s);
        Rng rng(s);
        std::vector<Route> routes;
        std::vector<std::size_t> load(inst.n, 0);
        for (std::size_t r = 0; r < inst.n; ++r) {
            std::vector<std::size_t> chain{inst.pairs[r].source};
            const std::size_t len = 1 + rng.below(6);
            while (chain.size() <= len) {
                const std::size_t v = rng.below(inst.n);
                if (std::find(chain.begin(), chain.end(), v) == chain.end()) chain.push_back(v);
            }
            Route route{r, {}};
            for (std::size_t j = 0; j + 1 < chain.size(); ++j) {
                route.hops.push_back({chain[j], chain[j + 1]});
                ++load[chain[j]];
            }
            routes.push_back(std::move(route));
        }
        const std::size_t L = *std::max_element(load.begin(), load.end());
        const TransmitterSets tx = color_transmitters(inst, 0.5, 1.0 + 0.01 * static_cast<double>(s % 100));
        const System sys = schedule(routes, tx, L);
        REQUIRE(verify_compatibility(sys));
        REQUIRE(sys.period == L * tx.S);
        std::size_t hops = 0, in_sets = 0;
        for (const auto& r : sys.routes) hops += r.hops.size();
        for (const auto& h : hop_sets(sys)) in_sets += h.size();
        REQUIRE(hops == in_sets);
    }
}

TEST_CASE("built systems over many seeds") {
    const double C = 0.45, D = 0.6;
    for (std::uint64_t s = 0; s < 20; ++s) {
        const Instance inst = fixture::site_instance(C, 50 + 10 * s, s);
        const BuildResult res = build_system(inst, {C, D}, 2.0);
        REQUIRE(res.report.feasible);
        const System& sys = *res.system;
        REQUIRE(verify_compatibility(sys));
        REQUIRE(sys.period == sys.L * sys.S);
        REQUIRE(res.report.lambda == 2.0 / static_cast<double>(sys.L * sys.S));
        REQUIRE(res.report.max_hop_length <= C);
        check_routes(inst, res.routes, C);
        REQUIRE(verify_dc_success(sys, inst.nodes, {C, D}).ok);
    }
}

TEST_CASE("DC verdict") {
    const double C = 0.25, D = 0.5;
    const Instance inst = fixture::site_instance(C, 3000, 4);
    const BuildResult res = build_system(inst, {C, D}, 1.0);
    REQUIRE(res.system);
    const System& sys = *res.system;
    const DcVerdict ok = verify_dc_success(sys, inst.nodes, {C, D});
    CHECK(ok.ok);
    CHECK(ok.per_slot.size() == sys.period);
    CHECK(!verify_dc_success(sys, inst.nodes, {res.report.max_hop_length * (1.0 - 1e-9), D}).ok);
    CHECK(!verify_dc_success(sys, inst.nodes, {C, 4 * D}).ok);

    // One hop of length exactly C.
    const std::vector<Point> nodes{{0.0, 0.0}, {C, 0.0}};
    const System one{{{0, {{0, 1}}, {1}}}, 1, 1, 1};
    CHECK(verify_dc_success(one, nodes, {C, D}).ok);
    CHECK(!verify_dc_success(one, nodes, {C * (1.0 - 1e-12), D}).ok);

    const RadioParams radio{1e6, 1.0, 1.0};
    const SinrVerdict v = verify_sinr_success(one, nodes, radio, {ModelKind::B, 3.0});
    CHECK(v.ok);
    CHECK(v.min_sinr == doctest::Approx(1e6 / std::pow(1.0 + C, 3.0)));
}

TEST_CASE("SINR on a packed lattice slot") {
    const double C = 1.0, alpha = 4.0, beta = 1.0, N0 = 1.0;
    const double D = find_D_for_C(C, alpha, beta);
    const DcParams dc{C, D};
    const double s = dc.spacing() * (1.0 + 1e-12);
    System sys;
    std::vector<Point> nodes;
    const int span = 10;
    for (int i = -span; i <= span; ++i)
        for (int j = -span; j <= span; ++j) {
            const Point t{s * (i + 0.5 * j), s * std::sqrt(3.0) / 2.0 * j};
            if (norm(t) > span * s) continue;
            nodes.push_back(t);
            nodes.push_back(t + Point{0.0, C * (1.0 - 1e-12)});
            sys.routes.push_back({sys.routes.size(), {{nodes.size() - 2, nodes.size() - 1}}, {1}});
        }
    sys.period = 1;
    sys.L = 1;
    sys.S = 1;
    REQUIRE(sys.routes.size() > 300);
    REQUIRE(verify_dc_success(sys, nodes, dc).ok);

    const double P = min_power(dc, alpha, beta, N0, std::nullopt);
    const SinrVerdict v = verify_sinr_success(sys, nodes, {P, N0, beta}, {ModelKind::B, alpha});
    CHECK(v.ok);
    CHECK(v.per_slot[0].failing.empty());
    for (double p : {P, P / 100.0, 1.0}) {
        const RadioParams radio{p, N0, beta};
        const double lb = sinr_lower_bound(dc, radio, alpha, 2.0 * span * s + C);
        CHECK(verify_sinr_success(sys, nodes, radio, {ModelKind::B, alpha}).min_sinr >= lb * (1.0 - 1e-12));
    }
    const SinrVerdict weak = verify_sinr_success(sys, nodes, {1e-3, N0, beta}, {ModelKind::B, alpha});
    CHECK(!weak.ok);
    CHECK(!weak.per_slot[0].failing.empty());
}

TEST_CASE("SINR success at min_power on built systems") {
    const double C = 0.25, alpha = 3.0, beta = 1.0;
    const double D = find_D_for_C(C, alpha, beta);
    const Instance inst = fixture::site_instance(C, 1000, 6);
    const BuildResult res = build_system(inst, {C, D}, 1.0);
    REQUIRE(res.system);
    REQUIRE(verify_dc_success(*res.system, inst.nodes, {C, D}).ok);
    const double P = min_power({C, D}, alpha, beta, 1.0, 2.0);
    CHECK(verify_sinr_success(*res.system, inst.nodes, {P, 1.0, beta}, {ModelKind::B, alpha}).ok);
}

TEST_CASE("pipelined delivery") {
    const double C = 0.45, D = 0.6;
    const Instance inst = fixture::site_instance(C, 300, 12);
    const BuildResult res = build_system(inst, {C, D}, 1.0);
    REQUIRE(res.system);
    const System& sys = *res.system;
    // The first packet waits one epoch at each slot decrease along the route.
    std::vector<std::size_t> first(sys.routes.size(), 0);
    std::size_t warm = 0;
    for (std::size_t r = 0; r < sys.routes.size(); ++r) {
        const auto& sl = sys.routes[r].slots;
        for (std::size_t j = 1; j < sl.size(); ++j)
            if (sl[j] < sl[j - 1]) ++first[r];
        warm = std::max(warm, first[r]);
    }
    const std::size_t epochs = std::max<std::size_t>(3, warm + 2);
    const auto got = simulate_delivery(sys, epochs);
    REQUIRE(got.size() == epochs);
    for (std::size_t e = 0; e < epochs; ++e)
        for (std::size_t r = 0; r < sys.routes.size(); ++r) REQUIRE(got[e][r] == (e >= first[r] ? 1u : 0u));
}
