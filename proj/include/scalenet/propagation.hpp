#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "scalenet/geometry.hpp"

namespace scalenet {

enum class ModelKind { A, B };

/// Model A: 1/d^alpha. Model B: 1/(1+d)^alpha.
struct PropagationModel {
    ModelKind kind = ModelKind::B;
    double alpha = 3.0;
};

struct RadioParams {
    double power = 1.0;
    double noise = 1.0;
    double beta = 1.0;
};

/// Transmitter t sending to receiver r while every point of `interferers`
/// transmits at the same power.
struct TxConfig {
    Point transmitter;
    Point receiver;
    std::vector<Point> interferers;
};

/// Distance criterion: hop length <= C and simultaneous transmitters pairwise
/// at least C(2+D) apart.
struct DcParams {
    double C = 1.0;
    double D = 1.0;

    double spacing() const { return C * (2.0 + D); }
    double ring_width() const { return C * (1.0 + D / 2.0); }
};

double attenuation(const PropagationModel& model, double d);

double sinr(const TxConfig& cfg, const RadioParams& radio, const PropagationModel& model);

/// sinr >= beta, compared exactly.
bool sinr_success(const TxConfig& cfg, const RadioParams& radio, const PropagationModel& model);

bool dc_satisfied(const TxConfig& cfg, const DcParams& dc);

/// Guaranteed Model-B SINR for any DC-satisfying configuration whose farthest
/// interferer is within max_interferer_distance of the receiver.
double sinr_lower_bound(const DcParams& dc, const RadioParams& radio, double alpha,
                        double max_interferer_distance);

/// Ring-count truncation of the interference series; std::nullopt = unbounded.
using RingLimit = std::optional<std::size_t>;

/// sum_{k=1}^{K} (6k+3) / (1 + k C (1+D/2))^alpha. The unbounded sum is an
/// upper estimate (explicit terms plus a midpoint tail integral). Throws
/// std::domain_error for alpha <= 2 when unbounded.
double interference_series(const DcParams& dc, double alpha, RingLimit rings);

/// (1+C)^alpha times interference_series.
double ensure_sum(const DcParams& dc, double alpha, RingLimit rings);

/// Model-A counterpart: C^alpha sum (6k+3)/(k C (1+D/2))^alpha, independent of C.
double ensure_sum_model_a(double D, double alpha);

/// floor(diameter / (C(1+D/2))), or unbounded.
RingLimit rings_for_diameter(const DcParams& dc, std::optional<double> diameter);

/// ensure_sum < 1/beta with the ring count implied by the region diameter.
bool ensures_sinr(const DcParams& dc, double alpha, double beta, std::optional<double> diameter);

/// 2 (sum 6/k^(alpha-1) + sum 3/k^alpha)^(1/alpha), alpha > 2.
double tau(double alpha);

/// (1+C)/(C(2+D)) < 1/(tau beta^(1/alpha)); implies ensures_sinr.
bool sufficient_pair(const DcParams& dc, double alpha, double beta);

/// Smallest D on the grid 2^k * 1e-3 passing ensures_sinr (unbounded), refined
/// by 40 bisection steps against the previous grid value. The result passes.
double find_D_for_C(double C, double alpha, double beta);

/// Power at which every DC-satisfying configuration inside the region meets beta:
/// N0 / (1/(beta (1+C)^alpha) - S) with a 1e-9 relative safety factor.
/// Throws std::runtime_error when the pair does not ensure the criterion.
double min_power(const DcParams& dc, double alpha, double beta, double noise,
                 std::optional<double> diameter);

/// Receiver at the origin, transmitter at (C, 0), m interferers packed on
/// circles of radius 2k C(2+D) with chord C(2+D).
TxConfig adversarial_config(const DcParams& dc, std::size_t m);

/// Upper bound on the zero-noise SINR of adversarial_config(dc, m). Returns
/// +infinity when the ring range is empty (m < 63).
double adversarial_sinr_bound(const DcParams& dc, double alpha, std::size_t m);

/// Left side of the non-ensuring test for a fixed pair: if below beta, the
/// pair does not ensure SINR_beta.
double converse_threshold(const DcParams& dc, double alpha);

/// Same with C, D -> 0: if below beta, all small enough pairs fail to ensure.
double converse_small_threshold(double alpha);

}  // namespace scalenet
