#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "scalenet/builder.hpp"
#include "scalenet/geometry.hpp"
#include "scalenet/random.hpp"

namespace fixture {

/// Instance on the unit disk (gamma = 0) with a node on every site of the
/// partition build_routes(C) will use, plus `extra` uniform nodes, so every
/// cell is occupied and the build is feasible.
inline scalenet::Instance site_instance(double C, std::size_t extra, std::uint64_t seed) {
    const scalenet::Partition part = scalenet::build_disk_partition(1.0, C / 16.0);
    scalenet::Instance inst;
    inst.gamma = 0.0;
    inst.seed = seed;
    inst.disk = scalenet::Disk{1.0};
    inst.nodes.assign(part.sites().begin(), part.sites().end());
    scalenet::Rng rng(seed);
    for (std::size_t i = 0; i < extra; ++i) {
        const double r = std::sqrt(rng.uniform());
        const double a = 2.0 * std::numbers::pi * rng.uniform();
        inst.nodes.push_back({r * std::cos(a), r * std::sin(a)});
    }
    inst.n = inst.nodes.size();
    for (std::size_t i = 0; i < inst.n; ++i) {
        std::size_t d = rng.below(inst.n - 1);
        if (d >= i) ++d;
        inst.pairs.push_back({i, d});
    }
    return inst;
}

}  // namespace fixture
