#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace scalenet {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
    friend constexpr bool operator==(Point a, Point b) = default;
};

constexpr double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
constexpr double squared_distance(Point a, Point b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}
inline double distance(Point a, Point b) { return std::sqrt(squared_distance(a, b)); }
inline double norm(Point p) { return std::sqrt(dot(p, p)); }

struct Disk {
    double radius = 1.0;

    bool contains(Point p, double rel_tol = 0.0) const {
        return norm(p) <= radius * (1.0 + rel_tol);
    }
    double area() const;
};

struct Segment {
    Point a;
    Point b;

    Point at(double t) const { return a + t * (b - a); }
};

/// Nearest-site partition of a disk. Cells are implicit: the cell of a point is
/// the nearest site, ties going to the lowest site index, so every cell is convex.
class Partition {
public:
    Partition(std::vector<Point> sites, double u, double w, double radius);

    std::span<const Point> sites() const { return sites_; }
    std::size_t size() const { return sites_.size(); }
    double u() const { return u_; }
    double w() const { return w_; }
    double radius() const { return radius_; }
    Disk disk() const { return Disk{radius_}; }

    /// Cell index of a point inside the disk; throws std::invalid_argument when
    /// the point lies outside the disk beyond 1e-9 relative tolerance.
    std::size_t cell_of(Point p) const;

    /// Nearest site with lowest-index tie-break, no range check.
    std::size_t nearest(Point p) const;

    /// Sites within distance r of p.
    std::vector<std::size_t> within(Point p, double r) const;

    template <class F>
    void for_each_within(Point p, double r, F&& f) const {
        const int x0 = bucket_coord(p.x - r), x1 = bucket_coord(p.x + r);
        const int y0 = bucket_coord(p.y - r), y1 = bucket_coord(p.y + r);
        const double r2 = r * r;
        for (int iy = y0; iy <= y1; ++iy) {
            const std::size_t row = static_cast<std::size_t>(iy) * buckets_per_side_;
            for (std::uint32_t k = bucket_start_[row + x0]; k < bucket_start_[row + x1 + 1]; ++k) {
                const std::size_t i = bucket_items_[k];
                if (squared_distance(p, sites_[i]) <= r2) f(i);
            }
        }
    }

private:
    std::vector<Point> sites_;
    double u_;
    double w_;
    double radius_;

    // Uniform bucket grid over [-radius, radius]^2.
    double bucket_size_;
    int buckets_per_side_;
    std::vector<std::uint32_t> bucket_start_;
    std::vector<std::uint32_t> bucket_items_;

    int bucket_coord(double v) const;
};

/// Center site, a hexagon of side u, then rings of radius d*u (d = 2..m) walked
/// with chord u/2. u = radius / (m + 1/2) where m = floor(radius/w - 1/2).
/// Requires w > 0 and radius >= 2w.
Partition build_disk_partition(double radius, double w);

/// Distinct cells crossed by the segment, in order from a to b. Assumes every
/// point of the disk is within 2u of its site, as build_disk_partition gives.
std::vector<std::size_t> cells_intersected(const Partition& partition, const Segment& seg);

struct CellStats {
    double diameter = 0.0;  // max pairwise distance among sampled hits
    double area = 0.0;
    double area_stderr = 0.0;
    std::size_t hits = 0;
};

/// Monte Carlo area and diameter of one cell. Both are underestimates of the
/// true values. Proposals are drawn from the square of half-side 2u around the
/// site (which contains the whole cell) and rejected when outside the disk or
/// the cell. Requires samples >= 1000; throws std::runtime_error on zero hits.
CellStats cell_stats(const Partition& partition, std::size_t cell, std::size_t samples,
                     std::uint64_t seed);

}  // namespace scalenet
