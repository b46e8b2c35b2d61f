#include "scalenet/builder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "scalenet/random.hpp"
#include "scalenet/series.hpp"

namespace scalenet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Sites grow as (radius / w)^2 at roughly 100 bytes each; the cap keeps a
// trial near 400 MB so parallel sweep workers fit in memory.
constexpr double kMaxPartitionSites = 4e6;

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

}  // namespace

Instance sample_instance(std::size_t n, double gamma, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("an instance needs n >= 2");
    if (!(gamma >= 0.0)) throw std::invalid_argument("gamma must be non-negative");
    Instance inst;
    inst.n = n;
    inst.gamma = gamma;
    inst.seed = seed;
    inst.disk = Disk{std::pow(static_cast<double>(n), gamma)};

    Rng rng(seed);
    inst.nodes.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = inst.disk.radius * std::sqrt(rng.uniform());
        const double a = 2.0 * std::numbers::pi * rng.uniform();
        inst.nodes.push_back({r * std::cos(a), r * std::sin(a)});
    }
    inst.pairs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t d = rng.below(n - 1);
        if (d >= i) ++d;
        inst.pairs.push_back({i, d});
    }
    return inst;
}

void validate_instance(const Instance& inst) {
    if (inst.n < 2) throw std::invalid_argument("instance needs n >= 2");
    if (inst.nodes.size() != inst.n || inst.pairs.size() != inst.n)
        throw std::invalid_argument("instance needs n nodes and n pairs");
    if (!(inst.disk.radius > 0.0)) throw std::invalid_argument("disk radius must be positive");
    for (const Point& p : inst.nodes) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw std::invalid_argument("node coordinate not finite");
        if (!inst.disk.contains(p, 1e-9)) throw std::invalid_argument("node outside the disk");
    }
    for (const SdPair& pr : inst.pairs) {
        if (pr.source >= inst.n || pr.destination >= inst.n)
            throw std::invalid_argument("pair index out of range");
        if (pr.source == pr.destination) throw std::invalid_argument("destination equals source");
    }
}

RouteTable build_routes(const Instance& inst, double C) {
    const double radius = inst.disk.radius;
    if (!(C > 0.0)) throw std::invalid_argument("C must be positive");
    if (!(C / radius < 0.5)) throw std::invalid_argument("C too large for region");

    RouteTable table;
    table.z = C / 2.0;
    const double w = table.z / 8.0;
    const double rings = radius / w;
    if (2.0 * std::numbers::pi * rings * rings > kMaxPartitionSites)
        throw std::runtime_error("partition too fine: radius / (C/16) = " + std::to_string(rings));
    const Partition partition = build_disk_partition(radius, w);
    const std::size_t M = partition.size();
    table.cell_count = M;

    std::vector<std::size_t> node_cell(inst.n);
    std::vector<std::vector<std::size_t>> members(M);
    for (std::size_t v = 0; v < inst.n; ++v) {
        node_cell[v] = partition.cell_of(inst.nodes[v]);
        members[node_cell[v]].push_back(v);
    }
    table.occupancy.resize(M);
    for (std::size_t i = 0; i < M; ++i) table.occupancy[i] = members[i].size();

    // Cell sequence of each route plus its rank among the routes crossing each cell.
    std::vector<std::vector<std::size_t>> path(inst.n);
    std::vector<std::vector<std::size_t>> rank(inst.n);
    table.crossings.assign(M, 0);
    for (std::size_t r = 0; r < inst.n; ++r) {
        const SdPair& pr = inst.pairs[r];
        path[r] = cells_intersected(partition, {inst.nodes[pr.source], inst.nodes[pr.destination]});
        rank[r].reserve(path[r].size());
        for (std::size_t cell : path[r]) {
            rank[r].push_back(table.crossings[cell]++);
            if (members[cell].empty()) table.empty_cell_hit = true;
        }
    }
    if (table.empty_cell_hit) return table;

    for (std::size_t i = 0; i < M; ++i)
        if (table.crossings[i] > 0)
            table.cell_load = std::max(table.cell_load, ceil_div(table.crossings[i], members[i].size()));

    table.node_load.assign(inst.n, 0);
    table.routes.reserve(inst.n);
    for (std::size_t r = 0; r < inst.n; ++r) {
        const SdPair& pr = inst.pairs[r];
        const auto& cells = path[r];
        std::vector<std::size_t> relay(cells.size());
        for (std::size_t j = 0; j < cells.size(); ++j) {
            const auto& m = members[cells[j]];
            relay[j] = m[rank[r][j] % m.size()];
        }
        relay.front() = pr.source;
        if (cells.size() == 1)
            relay.push_back(pr.destination);
        else
            relay.back() = pr.destination;

        Route route{r, {}};
        route.hops.reserve(relay.size() - 1);
        for (std::size_t j = 0; j + 1 < relay.size(); ++j) {
            const Hop h{relay[j], relay[j + 1]};
            route.hops.push_back(h);
            ++table.node_load[h.transmitter];
            table.max_hop_length =
                std::max(table.max_hop_length, distance(inst.nodes[h.transmitter], inst.nodes[h.receiver]));
        }
        table.routes.push_back(std::move(route));
    }
    table.L = *std::max_element(table.node_load.begin(), table.node_load.end());
    table.feasible = true;
    return table;
}

TransmitterSets color_transmitters(const Instance& inst, double C, double D) {
    if (!(C > 0.0) || !(D > 0.0)) throw std::invalid_argument("C and D must be positive");
    const double reach = C * (2.0 + D);
    const std::size_t n = inst.nodes.size();

    // Sweep in x: neighbours of v lie within the x-window of width 2 * reach.
    std::vector<std::size_t> by_x(n);
    std::iota(by_x.begin(), by_x.end(), std::size_t{0});
    std::sort(by_x.begin(), by_x.end(), [&](std::size_t a, std::size_t b) {
        return inst.nodes[a].x < inst.nodes[b].x || (inst.nodes[a].x == inst.nodes[b].x && a < b);
    });
    std::vector<std::size_t> pos(n);
    for (std::size_t k = 0; k < n; ++k) pos[by_x[k]] = k;

    TransmitterSets tx;
    tx.color_of.assign(n, std::numeric_limits<std::size_t>::max());
    std::vector<std::size_t> stamp(n + 1, std::numeric_limits<std::size_t>::max());
    std::vector<std::size_t> degree(n, 0);
    const double reach2 = reach * reach;

    for (std::size_t v = 0; v < n; ++v) {
        const Point pv = inst.nodes[v];
        auto visit = [&](std::size_t k) {
            const std::size_t u = by_x[k];
            if (u == v) return true;
            if (std::abs(inst.nodes[u].x - pv.x) > reach) return false;
            if (squared_distance(inst.nodes[u], pv) <= reach2) {
                ++degree[v];
                if (u < v) stamp[tx.color_of[u]] = v;
            }
            return true;
        };
        for (std::size_t k = pos[v] + 1; k < n; ++k)
            if (!visit(k)) break;
        for (std::size_t k = pos[v]; k-- > 0;)
            if (!visit(k)) break;
        std::size_t c = 0;
        while (stamp[c] == v) ++c;
        tx.color_of[v] = c;
        tx.S = std::max(tx.S, c + 1);
        tx.max_degree = std::max(tx.max_degree, degree[v]);
    }
    return tx;
}

System schedule(std::span<const Route> routes, const TransmitterSets& tx, std::size_t L) {
    const std::size_t n = tx.color_of.size();
    std::vector<std::size_t> served(n, 0);
    System sys;
    sys.L = L;
    sys.S = tx.S;
    sys.period = L * tx.S;
    sys.routes.reserve(routes.size());
    // Routes are visited in index order, so a node's k-th hop here is its k-th
    // pending hop in route-index order, served in round k.
    for (const Route& route : routes) {
        ScheduledRoute sr{route.pair, route.hops, {}};
        sr.slots.reserve(route.hops.size());
        for (const Hop& h : route.hops) {
            if (h.transmitter >= n) throw std::invalid_argument("hop transmitter out of range");
            const std::size_t round = served[h.transmitter]++;
            if (round >= L) throw std::invalid_argument("node load exceeds L");
            sr.slots.push_back(round * tx.S + tx.color_of[h.transmitter] + 1);
        }
        sys.routes.push_back(std::move(sr));
    }
    return sys;
}

std::vector<std::vector<Hop>> hop_sets(const System& sys) {
    std::vector<std::vector<Hop>> sets(sys.period);
    for (const ScheduledRoute& r : sys.routes)
        for (std::size_t j = 0; j < r.hops.size(); ++j)
            if (r.slots[j] >= 1 && r.slots[j] <= sys.period) sets[r.slots[j] - 1].push_back(r.hops[j]);
    return sets;
}

bool verify_compatibility(const System& sys) {
    std::vector<std::vector<std::size_t>> senders(sys.period);
    for (const ScheduledRoute& r : sys.routes) {
        if (r.slots.size() != r.hops.size()) return false;
        for (std::size_t j = 0; j < r.hops.size(); ++j) {
            const std::size_t slot = r.slots[j];
            if (slot < 1 || slot > sys.period) return false;
            senders[slot - 1].push_back(r.hops[j].transmitter);
        }
    }
    for (auto& s : senders) {
        std::sort(s.begin(), s.end());
        if (std::adjacent_find(s.begin(), s.end()) != s.end()) return false;
    }
    return true;
}

DcVerdict verify_dc_success(const System& sys, std::span<const Point> nodes, const DcParams& dc) {
    DcVerdict out;
    const auto sets = hop_sets(sys);
    out.per_slot.reserve(sets.size());
    const double spacing = dc.spacing();
    for (const auto& set : sets) {
        bool ok = true;
        for (std::size_t i = 0; i < set.size() && ok; ++i) {
            const Point t = nodes[set[i].transmitter];
            if (distance(t, nodes[set[i].receiver]) > dc.C) ok = false;
            for (std::size_t j = i + 1; j < set.size() && ok; ++j)
                if (distance(t, nodes[set[j].transmitter]) < spacing) ok = false;
        }
        out.per_slot.push_back(ok);
        out.ok = out.ok && ok;
    }
    return out;
}

SinrVerdict verify_sinr_success(const System& sys, std::span<const Point> nodes,
                                const RadioParams& radio, const PropagationModel& model) {
    SinrVerdict out;
    out.min_sinr = kInf;
    const auto sets = hop_sets(sys);
    out.per_slot.reserve(sets.size());
    TxConfig cfg;
    for (const auto& set : sets) {
        SlotSinr slot{kInf, {}};
        for (std::size_t i = 0; i < set.size(); ++i) {
            cfg.transmitter = nodes[set[i].transmitter];
            cfg.receiver = nodes[set[i].receiver];
            cfg.interferers.clear();
            for (std::size_t j = 0; j < set.size(); ++j)
                if (j != i) cfg.interferers.push_back(nodes[set[j].transmitter]);
            const double s = sinr(cfg, radio, model);
            slot.min_sinr = std::min(slot.min_sinr, s);
            if (!(s >= radio.beta)) slot.failing.push_back(set[i]);
        }
        out.min_sinr = std::min(out.min_sinr, slot.min_sinr);
        out.ok = out.ok && slot.failing.empty();
        out.per_slot.push_back(std::move(slot));
    }
    return out;
}

double throughput(const System& sys, double W) {
    if (sys.period == 0) return kInf;
    return W / static_cast<double>(sys.period);
}

std::vector<std::vector<std::size_t>> simulate_delivery(const System& sys, std::size_t epochs) {
    struct Transmission {
        std::size_t route;
        std::size_t hop;
    };
    std::vector<std::vector<Transmission>> by_slot(sys.period);
    for (std::size_t r = 0; r < sys.routes.size(); ++r)
        for (std::size_t j = 0; j < sys.routes[r].hops.size(); ++j)
            by_slot[sys.routes[r].slots[j] - 1].push_back({r, j});

    // held[r][j]: packets of route r waiting at the transmitter of hop j.
    std::vector<std::vector<std::size_t>> held(sys.routes.size());
    for (std::size_t r = 0; r < sys.routes.size(); ++r) held[r].assign(sys.routes[r].hops.size(), 0);

    std::vector<std::vector<std::size_t>> delivered(epochs, std::vector<std::size_t>(sys.routes.size(), 0));
    std::vector<Transmission> firing;
    for (std::size_t e = 0; e < epochs; ++e) {
        for (auto& h : held)
            if (!h.empty()) ++h[0];
        for (const auto& slot : by_slot) {
            // A packet received in this slot is forwarded no earlier than the next one.
            firing.clear();
            for (const Transmission& t : slot)
                if (held[t.route][t.hop] > 0) firing.push_back(t);
            for (const Transmission& t : firing) {
                --held[t.route][t.hop];
                if (t.hop + 1 < held[t.route].size())
                    ++held[t.route][t.hop + 1];
                else
                    ++delivered[e][t.route];
            }
        }
    }
    return delivered;
}

BuildResult build_system(const Instance& inst, const DcParams& dc, double W) {
    BuildResult out;
    out.routes = build_routes(inst, dc.C);
    out.transmitters = color_transmitters(inst, dc.C, dc.D);
    BuildReport& rep = out.report;
    rep.feasible = out.routes.feasible;
    rep.empty_cell_hit = out.routes.empty_cell_hit;
    rep.S = out.transmitters.S;
    rep.max_degree = out.transmitters.max_degree;
    rep.M = out.routes.cell_count;
    if (!rep.feasible) {
        rep.L = kInf;
        rep.p = kInf;
        rep.lambda = 0.0;
        rep.max_hop_length = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    out.system = schedule(out.routes.routes, out.transmitters, out.routes.L);
    rep.L = static_cast<double>(out.routes.L);
    rep.cell_load = out.routes.cell_load;
    rep.p = static_cast<double>(out.system->period);
    rep.lambda = throughput(*out.system, W);
    rep.max_hop_length = out.routes.max_hop_length;
    return out;
}

}  // namespace scalenet
