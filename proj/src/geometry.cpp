#include "scalenet/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "scalenet/random.hpp"

namespace scalenet {

namespace {

constexpr std::size_t kNoSite = std::numeric_limits<std::size_t>::max();

// Central angle for a chord of length `chord` on a circle of radius `radius`,
// padded by 1e-12 so the realized chord never rounds below the target.
double chord_step(double chord, double radius) {
    return 2.0 * std::asin(chord / (2.0 * radius)) * (1.0 + 1e-12);
}

double cross(Point o, Point a, Point b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double hull_diameter(std::vector<Point> pts) {
    if (pts.size() < 2) return 0.0;
    std::sort(pts.begin(), pts.end(),
              [](Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    std::vector<Point> hull(2 * pts.size());
    std::size_t k = 0;
    for (const Point& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k > 1 ? k - 1 : k);
    double best = 0.0;
    for (std::size_t i = 0; i < hull.size(); ++i)
        for (std::size_t j = i + 1; j < hull.size(); ++j)
            best = std::max(best, squared_distance(hull[i], hull[j]));
    return std::sqrt(best);
}

}  // namespace

double Disk::area() const { return std::numbers::pi * radius * radius; }

Partition::Partition(std::vector<Point> sites, double u, double w, double radius)
    : sites_(std::move(sites)), u_(u), w_(w), radius_(radius) {
    if (sites_.empty()) throw std::invalid_argument("partition needs at least one site");
    bucket_size_ = u_;
    buckets_per_side_ = static_cast<int>(std::ceil(2.0 * radius_ / bucket_size_)) + 1;
    const std::size_t nb = static_cast<std::size_t>(buckets_per_side_) * buckets_per_side_;

    std::vector<std::uint32_t> counts(nb + 1, 0);
    std::vector<std::size_t> bucket_of(sites_.size());
    for (std::size_t i = 0; i < sites_.size(); ++i) {
        const auto b = static_cast<std::size_t>(bucket_coord(sites_[i].y)) * buckets_per_side_ +
                       static_cast<std::size_t>(bucket_coord(sites_[i].x));
        bucket_of[i] = b;
        ++counts[b + 1];
    }
    for (std::size_t b = 0; b < nb; ++b) counts[b + 1] += counts[b];
    bucket_start_ = counts;
    bucket_items_.resize(sites_.size());
    std::vector<std::uint32_t> fill(counts.begin(), counts.end() - 1);
    for (std::size_t i = 0; i < sites_.size(); ++i)
        bucket_items_[fill[bucket_of[i]]++] = static_cast<std::uint32_t>(i);
}

int Partition::bucket_coord(double v) const {
    const double c = std::floor((v + radius_) / bucket_size_);
    if (!(c >= 0.0)) return 0;
    return std::min(static_cast<int>(c), buckets_per_side_ - 1);
}

std::size_t Partition::nearest(Point p) const {
    const int bx = bucket_coord(p.x);
    const int by = bucket_coord(p.y);
    std::size_t best = kNoSite;
    double best_d2 = std::numeric_limits<double>::infinity();

    auto scan = [&](int ix, int iy) {
        if (ix < 0 || iy < 0 || ix >= buckets_per_side_ || iy >= buckets_per_side_) return;
        const std::size_t b = static_cast<std::size_t>(iy) * buckets_per_side_ + ix;
        for (std::uint32_t k = bucket_start_[b]; k < bucket_start_[b + 1]; ++k) {
            const std::size_t idx = bucket_items_[k];
            const double d2 = squared_distance(p, sites_[idx]);
            if (d2 < best_d2 || (d2 == best_d2 && idx < best)) {
                best_d2 = d2;
                best = idx;
            }
        }
    };

    for (int r = 0; r <= buckets_per_side_; ++r) {
        if (r == 0) {
            scan(bx, by);
        } else {
            for (int i = -r; i <= r; ++i) {
                scan(bx + i, by - r);
                scan(bx + i, by + r);
            }
            for (int j = -r + 1; j <= r - 1; ++j) {
                scan(bx - r, by + j);
                scan(bx + r, by + j);
            }
        }
        // Buckets at ring r+1 or beyond are at least r bucket widths away.
        const double reach = r * bucket_size_;
        if (best != kNoSite && best_d2 < reach * reach) break;
    }
    return best;
}

std::size_t Partition::cell_of(Point p) const {
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !disk().contains(p, 1e-9))
        throw std::invalid_argument("point outside the partitioned disk");
    return nearest(p);
}

Partition build_disk_partition(double radius, double w) {
    if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument("partition scale w must be positive");
    if (!(radius >= 2.0 * w) || !std::isfinite(radius))
        throw std::invalid_argument("partition requires radius >= 2w");

    const auto m = static_cast<int>(std::floor(radius / w - 0.5));
    const double u = radius / (m + 0.5);

    std::vector<Point> sites;
    sites.push_back({0.0, 0.0});
    for (int k = 0; k < 6; ++k) {
        const double a = k * std::numbers::pi / 3.0;
        sites.push_back({u * std::cos(a), u * std::sin(a)});
    }
    for (int d = 2; d <= m; ++d) {
        const double ring = d * u;
        const double step = chord_step(u / 2.0, ring);
        // The point that would come within u/2 of the first one is discarded,
        // which leaves the closing chord in [u/2, u].
        const auto count = static_cast<int>(std::floor(2.0 * std::numbers::pi / step));
        for (int j = 0; j < count; ++j) {
            const double a = j * step;
            sites.push_back({ring * std::cos(a), ring * std::sin(a)});
        }
    }
    return Partition(std::move(sites), u, w, radius);
}

std::vector<std::size_t> Partition::within(Point p, double r) const {
    std::vector<std::size_t> out;
    for_each_within(p, r, [&](std::size_t i) { out.push_back(i); });
    return out;
}

std::vector<std::size_t> cells_intersected(const Partition& partition, const Segment& seg) {
    std::size_t current = partition.cell_of(seg.a);
    const std::size_t last = partition.cell_of(seg.b);
    std::vector<std::size_t> cells{current};
    if (seg.a == seg.b) return cells;

    const auto sites = partition.sites();
    const Point d = seg.b - seg.a;
    // Every point is within 2u of its site, so Voronoi neighbours are within 4u.
    const double full = 4.0 * partition.u() * (1.0 + 1e-9);
    double t0 = 0.0;
    std::size_t guard = 0;
    while (current != last && guard++ <= partition.size()) {
        // On the segment, staying closer to c than to s is the linear
        // constraint t <= t_s whenever the segment heads towards s.
        const Point c = sites[current];
        double exit = std::numeric_limits<double>::infinity();
        std::size_t next = kNoSite;
        double reach = full / 2.0;
        for (;;) {
            exit = std::numeric_limits<double>::infinity();
            next = kNoSite;
            partition.for_each_within(c, reach, [&](std::size_t s) {
                if (s == current) return;
                const Point e = sites[s] - c;
                const double den = 2.0 * dot(d, e);
                if (!(den > 0.0)) return;
                const double t = (dot(sites[s], sites[s]) - dot(c, c) - 2.0 * dot(seg.a, e)) / den;
                if (t < exit || (t == exit && s < next)) {
                    exit = t;
                    next = s;
                }
            });
            // A site farther than twice the farthest point of the piece cannot cut it.
            const double far = std::max(distance(seg.at(t0), c), distance(seg.at(std::min(exit, 1.0)), c));
            if (reach >= full || 2.0 * far * (1.0 + 1e-9) <= reach) break;
            reach = std::min(full, 2.0 * far * (1.0 + 1e-6));
        }
        if (next == kNoSite || exit >= 1.0) break;
        t0 = std::max(t0, exit);
        current = next;
        if (std::find(cells.begin(), cells.end(), current) == cells.end()) cells.push_back(current);
    }
    if (cells.back() != last && std::find(cells.begin(), cells.end(), last) == cells.end()) cells.push_back(last);
    return cells;
}

CellStats cell_stats(const Partition& partition, std::size_t cell, std::size_t samples,
                     std::uint64_t seed) {
    if (cell >= partition.size()) throw std::invalid_argument("cell index out of range");
    if (samples < 1000) throw std::invalid_argument("cell_stats needs at least 1000 samples");

    const Point site = partition.sites()[cell];
    const double half = 2.05 * partition.u();
    const double box_area = 4.0 * half * half;
    const Disk disk = partition.disk();

    Rng rng(seed);
    std::vector<Point> hits;
    for (std::size_t i = 0; i < samples; ++i) {
        const Point q{site.x + rng.uniform(-half, half), site.y + rng.uniform(-half, half)};
        if (!disk.contains(q)) continue;
        if (partition.nearest(q) != cell) continue;
        hits.push_back(q);
    }
    if (hits.empty()) throw std::runtime_error("cell sampling starved: raise samples");

    CellStats out;
    out.hits = hits.size();
    const double frac = static_cast<double>(hits.size()) / static_cast<double>(samples);
    out.area = box_area * frac;
    out.area_stderr = box_area * std::sqrt(frac * (1.0 - frac) / static_cast<double>(samples));
    out.diameter = hull_diameter(std::move(hits));
    return out;
}

}  // namespace scalenet
