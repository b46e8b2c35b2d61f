#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scalenet/builder.hpp"
#include "scalenet/propagation.hpp"

namespace scalenet::harness {

using nlohmann::json;

/// Bad flags, unreadable files, malformed documents. CLI exit code 1.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

enum class ParamMode { Theorem, Explicit };

struct RunParams {
    double alpha = 3.0;
    double beta = 1.0;
    double noise = 1.0;
    double W = 1.0;
    ModelKind model = ModelKind::B;
    ParamMode mode = ParamMode::Theorem;
    std::optional<double> C;
    std::optional<double> D;
    std::optional<double> P;
};

struct Resolved {
    DcParams dc;
    double power = 0.0;
};

/// Theorem mode defers to analysis::theorem_params (Model B only). Explicit
/// mode needs C; D defaults to find_D_for_C and P to the unbounded min_power,
/// both only under Model B. Throws ConfigError for missing or inconsistent
/// values and analysis::RegimeError when theorem mode refuses.
Resolved resolve_params(std::size_t n, double gamma, const RunParams& params);

ParamMode parse_mode(const std::string& s);
ModelKind parse_model(const std::string& s);

json instance_to_json(const Instance& instance);
/// Checks the schema and the instance invariants. Throws ConfigError.
Instance instance_from_json(const json& j);

/// Required keys plus "n", "gamma" and "nodes", so the file verifies on its own.
json system_to_json(const System& system, const Instance& instance);

struct LoadedSystem {
    System system;
    std::optional<std::size_t> n;
    std::optional<double> gamma;
    std::vector<Point> nodes;
};
LoadedSystem system_from_json(const json& j);

json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& j);

json report_to_json(const BuildReport& report, const Resolved& params);

struct VerifyOutcome {
    bool compatible = false;
    DcVerdict dc;
    SinrVerdict sinr;
    bool ok() const { return compatible && dc.ok && sinr.ok; }
};

VerifyOutcome verify_system(const System& system, std::span<const Point> nodes, const Resolved& params,
                            const RunParams& run);

void print_verify(std::ostream& os, const VerifyOutcome& outcome);

struct AdversarialReport {
    std::size_t m = 0;
    bool dc_ok = false;
    double exact_sinr = 0.0;     // zero noise
    double bound = 0.0;          // +inf when m < 63
    bool bound_holds = false;    // exact_sinr <= bound
    bool violates_beta = false;  // exact_sinr < beta
    double converse_threshold = 0.0;
};

AdversarialReport run_adversarial(const DcParams& dc, double alpha, double beta, std::size_t m);

json adversarial_to_json(const AdversarialReport& report);

struct BoundsRow {
    std::size_t n = 0;
    double gamma = 0.0;
    double C = 0.0;
    double D = 0.0;
    double load_bound = 0.0;
    double txset_bound = 0.0;
    double throughput_floor = 0.0;
    double growth_condition = 0.0;
    double gk_connectivity = 0.0;
    bool regime_ok = false;  // C / n^gamma < 1/2
    double constant_identity = 0.0;  // c_route * 18/pi - c_thru
};

/// Theorem mode evaluates the theorem's (C, D) choice even before the regime is reached.
BoundsRow run_bounds(std::size_t n, double gamma, const RunParams& params);

json bounds_to_json(const BoundsRow& row);

struct SweepConfig {
    std::vector<double> gammas;
    std::vector<std::size_t> ns;
    std::size_t trials = 1;
    RunParams params;
    std::uint64_t seed = 0;
    std::size_t workers = 1;
    bool record_timing = false;  // off keeps the CSV byte-reproducible
};

/// Fields absent from j keep the values already in base.
SweepConfig sweep_config_from_json(const json& j, SweepConfig base = {});
void validate_sweep_config(const SweepConfig& config);

/// SCALENET_WORKERS if set and positive, else hardware concurrency.
std::size_t default_workers();

/// s = sm(trial); s = sm(s ^ n); s = sm(s ^ gamma_index); seed = sm(s ^ master), sm = splitmix64.
std::uint64_t trial_seed(std::uint64_t master, std::size_t gamma_index, std::size_t n, std::size_t trial);

inline constexpr const char* kSeedRule =
    "s = splitmix64(trial); s = splitmix64(s ^ n); s = splitmix64(s ^ gamma_index); "
    "seed = splitmix64(s ^ master_seed)";

struct ExperimentRecord {
    double gamma = 0.0;
    std::size_t n = 0;
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    bool feasible = false;
    double L = 0.0;
    std::size_t S = 0;
    std::size_t M = 0;
    double p = 0.0;
    double lambda = 0.0;
    bool dc_success = false;
    bool sinr_success = false;
    double min_slot_sinr = 0.0;
    double max_hop_length = 0.0;
    double load_bound = 0.0;
    double txset_bound = 0.0;
    double throughput_floor = 0.0;
    double wall_time = 0.0;
    std::string error;  // summary only, not a CSV column
};

/// One record per (gamma, n, trial), ordered by that key. Per-trial failures
/// are captured in ExperimentRecord::error.
std::vector<ExperimentRecord> run_sweep(const SweepConfig& config);

void write_csv(std::ostream& os, std::span<const ExperimentRecord> records);

/// Least-squares slope of ln y against ln x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

json summarize(const SweepConfig& config, std::span<const ExperimentRecord> records);

}  // namespace scalenet::harness
