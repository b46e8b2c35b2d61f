#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "scalenet/geometry.hpp"
#include "scalenet/propagation.hpp"

namespace scalenet {

struct SdPair {
    std::size_t source = 0;
    std::size_t destination = 0;
    friend bool operator==(const SdPair&, const SdPair&) = default;
};

/// n nodes uniform on the disk of radius n^gamma, each the source of one pair.
struct Instance {
    std::size_t n = 0;
    double gamma = 0.0;
    Disk disk;
    std::vector<Point> nodes;
    std::vector<SdPair> pairs;
    std::uint64_t seed = 0;
};

Instance sample_instance(std::size_t n, double gamma, std::uint64_t seed);

/// Throws std::invalid_argument describing the first broken invariant.
void validate_instance(const Instance& instance);

struct Hop {
    std::size_t transmitter = 0;
    std::size_t receiver = 0;
    friend bool operator==(const Hop&, const Hop&) = default;
};

struct Route {
    std::size_t pair = 0;
    std::vector<Hop> hops;
};

struct RouteTable {
    bool feasible = false;
    bool empty_cell_hit = false;
    std::vector<Route> routes;              // empty unless feasible
    std::vector<std::size_t> crossings;     // X_i: routes whose segment meets cell i
    std::vector<std::size_t> occupancy;     // Y_i: nodes in cell i
    std::size_t cell_count = 0;             // M
    std::size_t cell_load = 0;              // max over crossed cells of ceil(X_i / Y_i)
    std::vector<std::size_t> node_load;     // hops each node transmits
    std::size_t L = 0;                      // max node_load, the scheduling load
    double max_hop_length = 0.0;
    double z = 0.0;                         // cell diameter target C/2
};

/// Routes along the straight source-destination line through a nearest-site
/// partition with cell diameter <= C/2. Crossed cells share their routes
/// round-robin among their nodes; the source and destination stand in for
/// their own cells. Requires C / n^gamma < 1/2.
RouteTable build_routes(const Instance& instance, double C);

/// color_of[v] in [0, S). Same-color nodes are more than C(2+D) apart.
struct TransmitterSets {
    std::vector<std::size_t> color_of;
    std::size_t S = 0;
    std::size_t max_degree = 0;
};

/// Greedy lowest-color in node-index order on the graph joining nodes within C(2+D).
TransmitterSets color_transmitters(const Instance& instance, double C, double D);

struct ScheduledRoute {
    std::size_t pair = 0;
    std::vector<Hop> hops;
    std::vector<std::size_t> slots;  // 1-based slot per hop
};

struct System {
    std::vector<ScheduledRoute> routes;
    std::size_t period = 0;
    std::size_t L = 0;
    std::size_t S = 0;
};

/// Round-based schedule: a node of color j serves its k-th hop (route-index
/// order) in slot (k-1) S + j. period = L S. Throws std::invalid_argument if a
/// node carries more than L hops.
System schedule(std::span<const Route> routes, const TransmitterSets& tx, std::size_t L);

/// Hops transmitted in each slot, index 0 = slot 1.
std::vector<std::vector<Hop>> hop_sets(const System& system);

/// Independent audit: slots in range, one slot per hop, no node twice per slot.
bool verify_compatibility(const System& system);

struct DcVerdict {
    std::vector<bool> per_slot;
    bool ok = true;
};

DcVerdict verify_dc_success(const System& system, std::span<const Point> nodes, const DcParams& dc);

struct SlotSinr {
    double min_sinr = 0.0;  // +inf for an empty slot
    std::vector<Hop> failing;
};

struct SinrVerdict {
    std::vector<SlotSinr> per_slot;
    double min_sinr = 0.0;
    bool ok = true;
};

SinrVerdict verify_sinr_success(const System& system, std::span<const Point> nodes,
                                const RadioParams& radio, const PropagationModel& model);

double throughput(const System& system, double W);

/// Packet-level run of the periodic schedule. A new packet enters at every
/// source each epoch; each hop forwards one held packet in its slot.
/// Returns delivered[epoch][route].
std::vector<std::vector<std::size_t>> simulate_delivery(const System& system, std::size_t epochs);

struct BuildReport {
    bool feasible = false;
    bool empty_cell_hit = false;
    double L = 0.0;  // +inf when infeasible
    std::size_t cell_load = 0;
    std::size_t S = 0;
    std::size_t max_degree = 0;
    std::size_t M = 0;
    double p = 0.0;  // +inf when infeasible
    double lambda = 0.0;
    double max_hop_length = 0.0;
};

struct BuildResult {
    RouteTable routes;
    TransmitterSets transmitters;
    std::optional<System> system;
    BuildReport report;
};

/// build_routes, color_transmitters, then schedule when feasible.
BuildResult build_system(const Instance& instance, const DcParams& dc, double W);

}  // namespace scalenet
