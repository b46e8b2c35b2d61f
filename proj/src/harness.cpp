#include "scalenet/harness.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <thread>

#include "scalenet/analysis.hpp"
#include "scalenet/random.hpp"
#include "scalenet/series.hpp"

namespace scalenet::harness {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <class T>
T field(const json& j, const char* key) {
    if (!j.contains(key)) throw ConfigError(std::string("missing key \"") + key + "\"");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad value for \"") + key + "\": " + e.what());
    }
}

// JSON has no inf/nan; they are written as null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double median(std::vector<double> v) {
    if (v.empty()) return kNaN;
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

}  // namespace

ParamMode parse_mode(const std::string& s) {
    if (s == "theorem") return ParamMode::Theorem;
    if (s == "explicit") return ParamMode::Explicit;
    throw ConfigError("mode must be theorem or explicit, got " + s);
}

ModelKind parse_model(const std::string& s) {
    if (s == "A" || s == "a") return ModelKind::A;
    if (s == "B" || s == "b") return ModelKind::B;
    throw ConfigError("model must be A or B, got " + s);
}

Resolved resolve_params(std::size_t n, double gamma, const RunParams& rp) {
    if (!(rp.alpha > 0.0)) throw ConfigError("alpha must be positive");
    if (!(rp.beta > 0.0)) throw ConfigError("beta must be positive");
    if (!(rp.noise > 0.0)) throw ConfigError("noise power must be positive");
    if (!(rp.W > 0.0)) throw ConfigError("W must be positive");
    Resolved out;
    if (rp.mode == ParamMode::Theorem) {
        if (rp.model != ModelKind::B) throw ConfigError("theorem mode needs Model B");
        if (!(rp.alpha > 2.0)) throw ConfigError("theorem mode needs alpha > 2");
        const auto tp = analysis::theorem_params(n, gamma, rp.alpha, rp.beta, rp.noise);
        out.dc = {tp.C, tp.D};
        out.power = tp.P;
        return out;
    }
    if (!rp.C) throw ConfigError("explicit mode needs --C");
    if (!(*rp.C > 0.0)) throw ConfigError("C must be positive");
    out.dc.C = *rp.C;
    if (rp.D) {
        out.dc.D = *rp.D;
    } else {
        if (rp.model != ModelKind::B || !(rp.alpha > 2.0))
            throw ConfigError("without --D, explicit mode needs Model B and alpha > 2");
        out.dc.D = find_D_for_C(out.dc.C, rp.alpha, rp.beta);
    }
    if (!(out.dc.D > 0.0)) throw ConfigError("D must be positive");
    if (rp.P) {
        out.power = *rp.P;
    } else {
        if (rp.model != ModelKind::B || !(rp.alpha > 2.0))
            throw ConfigError("without --P, explicit mode needs Model B and alpha > 2");
        try {
            out.power = min_power(out.dc, rp.alpha, rp.beta, rp.noise, std::nullopt);
        } catch (const std::runtime_error& e) {
            throw ConfigError(std::string("cannot derive P: ") + e.what());
        }
    }
    if (!(out.power > 0.0)) throw ConfigError("P must be positive");
    return out;
}

json instance_to_json(const Instance& inst) {
    json nodes = json::array();
    for (const Point& p : inst.nodes) nodes.push_back({p.x, p.y});
    json pairs = json::array();
    for (const SdPair& pr : inst.pairs) pairs.push_back({pr.source, pr.destination});
    return {{"n", inst.n}, {"gamma", inst.gamma}, {"seed", inst.seed}, {"nodes", nodes}, {"pairs", pairs}};
}

Instance instance_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("instance must be a JSON object");
    Instance inst;
    inst.n = field<std::size_t>(j, "n");
    inst.gamma = field<double>(j, "gamma");
    inst.seed = field<std::uint64_t>(j, "seed");
    if (!(inst.gamma >= 0.0)) throw ConfigError("gamma must be non-negative");
    inst.disk = Disk{std::pow(static_cast<double>(inst.n), inst.gamma)};
    for (const auto& xy : field<std::vector<std::array<double, 2>>>(j, "nodes")) inst.nodes.push_back({xy[0], xy[1]});
    for (const auto& sd : field<std::vector<std::array<std::size_t, 2>>>(j, "pairs"))
        inst.pairs.push_back({sd[0], sd[1]});
    try {
        validate_instance(inst);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid instance: ") + e.what());
    }
    return inst;
}

json system_to_json(const System& sys, const Instance& inst) {
    json routes = json::array();
    for (const ScheduledRoute& r : sys.routes) {
        json hops = json::array();
        for (const Hop& h : r.hops) hops.push_back({h.transmitter, h.receiver});
        routes.push_back({{"pair", r.pair}, {"hops", hops}, {"slots", r.slots}});
    }
    json nodes = json::array();
    for (const Point& p : inst.nodes) nodes.push_back({p.x, p.y});
    return {{"period", sys.period}, {"routes", routes}, {"L", sys.L}, {"S", sys.S},
            {"n", inst.n},          {"gamma", inst.gamma}, {"nodes", nodes}};
}

LoadedSystem system_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("system must be a JSON object");
    LoadedSystem out;
    out.system.period = field<std::size_t>(j, "period");
    out.system.L = field<std::size_t>(j, "L");
    out.system.S = field<std::size_t>(j, "S");
    const json routes = field<json>(j, "routes");
    if (!routes.is_array()) throw ConfigError("\"routes\" must be an array");
    for (const json& r : routes) {
        ScheduledRoute sr;
        sr.pair = field<std::size_t>(r, "pair");
        for (const auto& tr : field<std::vector<std::array<std::size_t, 2>>>(r, "hops"))
            sr.hops.push_back({tr[0], tr[1]});
        sr.slots = field<std::vector<std::size_t>>(r, "slots");
        out.system.routes.push_back(std::move(sr));
    }
    if (j.contains("n")) out.n = field<std::size_t>(j, "n");
    if (j.contains("gamma")) out.gamma = field<double>(j, "gamma");
    if (j.contains("nodes"))
        for (const auto& xy : field<std::vector<std::array<double, 2>>>(j, "nodes")) out.nodes.push_back({xy[0], xy[1]});
    return out;
}

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("malformed JSON in " + path.string() + ": " + e.what());
    }
}

void write_json(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << j.dump(1) << '\n';
    if (!out) throw ConfigError("write failed for " + path.string());
}

json report_to_json(const BuildReport& rep, const Resolved& params) {
    return {{"feasible", rep.feasible},
            {"empty_cell_hit", rep.empty_cell_hit},
            {"L", number(rep.L)},
            {"cell_load", rep.cell_load},
            {"S", rep.S},
            {"max_degree", rep.max_degree},
            {"M", rep.M},
            {"p", number(rep.p)},
            {"lambda", rep.lambda},
            {"max_hop_length", number(rep.max_hop_length)},
            {"C", params.dc.C},
            {"D", params.dc.D},
            {"P", params.power}};
}

VerifyOutcome verify_system(const System& sys, std::span<const Point> nodes, const Resolved& params,
                            const RunParams& run) {
    for (const ScheduledRoute& r : sys.routes)
        for (const Hop& h : r.hops)
            if (h.transmitter >= nodes.size() || h.receiver >= nodes.size())
                throw ConfigError("hop refers to a node outside the node list");
    VerifyOutcome out;
    out.compatible = verify_compatibility(sys);
    out.dc = verify_dc_success(sys, nodes, params.dc);
    out.sinr = verify_sinr_success(sys, nodes, {params.power, run.noise, run.beta}, {run.model, run.alpha});
    return out;
}

void print_verify(std::ostream& os, const VerifyOutcome& v) {
    os << "compatible " << (v.compatible ? "yes" : "no") << '\n';
    os << "slot dc sinr min_sinr failing\n";
    for (std::size_t s = 0; s < v.dc.per_slot.size(); ++s) {
        const SlotSinr& ss = v.sinr.per_slot[s];
        os << s + 1 << ' ' << (v.dc.per_slot[s] ? "pass" : "FAIL") << ' '
           << (ss.failing.empty() ? "pass" : "FAIL") << ' ' << real(ss.min_sinr) << ' ' << ss.failing.size()
           << '\n';
    }
    os << "dc " << (v.dc.ok ? "pass" : "FAIL") << '\n';
    os << "sinr " << (v.sinr.ok ? "pass" : "FAIL") << '\n';
    os << "min_slot_sinr " << real(v.sinr.min_sinr) << '\n';
}

AdversarialReport run_adversarial(const DcParams& dc, double alpha, double beta, std::size_t m) {
    AdversarialReport out;
    out.m = m;
    const TxConfig cfg = adversarial_config(dc, m);
    out.dc_ok = dc_satisfied(cfg, dc);
    out.exact_sinr = sinr(cfg, {1.0, 0.0, beta}, {ModelKind::B, alpha});
    out.bound = adversarial_sinr_bound(dc, alpha, m);
    out.bound_holds = out.exact_sinr <= out.bound;
    out.violates_beta = out.exact_sinr < beta;
    out.converse_threshold = alpha > 2.0 ? converse_threshold(dc, alpha) : kNaN;
    return out;
}

json adversarial_to_json(const AdversarialReport& r) {
    return {{"m", r.m},
            {"dc_satisfied", r.dc_ok},
            {"exact_sinr", r.exact_sinr},
            {"bound", std::isinf(r.bound) ? json("no bound") : json(r.bound)},
            {"bound_holds", r.bound_holds},
            {"violates_beta", r.violates_beta},
            {"converse_threshold", number(r.converse_threshold)}};
}

BoundsRow run_bounds(std::size_t n, double gamma, const RunParams& params) {
    BoundsRow row;
    row.n = n;
    row.gamma = gamma;
    if (params.mode == ParamMode::Theorem) {
        if (!(params.alpha > 2.0)) throw ConfigError("theorem mode needs alpha > 2");
        const auto tc = analysis::theorem_choice(n, gamma, params.alpha, params.beta);
        row.C = tc.C;
        row.D = tc.D;
    } else {
        RunParams p = params;
        if (!p.P) p.P = 1.0;  // bounds do not depend on power
        const Resolved r = resolve_params(n, gamma, p);
        row.C = r.dc.C;
        row.D = r.dc.D;
    }
    row.load_bound = analysis::load_bound(n, gamma, row.C);
    row.txset_bound = analysis::txset_bound(n, gamma, row.C, row.D);
    row.throughput_floor = analysis::throughput_floor(n, gamma, row.C, row.D, params.W);
    row.growth_condition = analysis::growth_condition(n, gamma, row.C);
    row.gk_connectivity = analysis::gk_connectivity(n, gamma, row.C);
    row.regime_ok = row.C / std::pow(static_cast<double>(n), gamma) < 0.5;
    row.constant_identity = analysis::kRouteLoad * 18.0 / std::numbers::pi - analysis::kThroughput;
    return row;
}

json bounds_to_json(const BoundsRow& r) {
    return {{"n", r.n},
            {"gamma", r.gamma},
            {"C", r.C},
            {"D", r.D},
            {"load_bound", r.load_bound},
            {"txset_bound", r.txset_bound},
            {"throughput_floor", r.throughput_floor},
            {"growth_condition", r.growth_condition},
            {"gk_connectivity", r.gk_connectivity},
            {"regime_ok", r.regime_ok},
            {"c_route_18_over_pi_minus_c_thru", r.constant_identity}};
}

SweepConfig sweep_config_from_json(const json& j, SweepConfig cfg) {
    if (!j.is_object()) throw ConfigError("sweep config must be a JSON object");
    if (j.contains("gamma")) cfg.gammas = field<std::vector<double>>(j, "gamma");
    if (j.contains("n")) cfg.ns = field<std::vector<std::size_t>>(j, "n");
    if (j.contains("trials")) cfg.trials = field<std::size_t>(j, "trials");
    if (j.contains("seed")) cfg.seed = field<std::uint64_t>(j, "seed");
    if (j.contains("workers")) cfg.workers = field<std::size_t>(j, "workers");
    if (j.contains("record_timing")) cfg.record_timing = field<bool>(j, "record_timing");
    RunParams& p = cfg.params;
    if (j.contains("alpha")) p.alpha = field<double>(j, "alpha");
    if (j.contains("beta")) p.beta = field<double>(j, "beta");
    if (j.contains("n0")) p.noise = field<double>(j, "n0");
    if (j.contains("w_bits")) p.W = field<double>(j, "w_bits");
    if (j.contains("model")) p.model = parse_model(field<std::string>(j, "model"));
    if (j.contains("mode")) p.mode = parse_mode(field<std::string>(j, "mode"));
    if (j.contains("C")) p.C = field<double>(j, "C");
    if (j.contains("D")) p.D = field<double>(j, "D");
    if (j.contains("P")) p.P = field<double>(j, "P");
    return cfg;
}

void validate_sweep_config(const SweepConfig& cfg) {
    if (cfg.gammas.empty()) throw ConfigError("sweep needs at least one gamma");
    if (cfg.ns.empty()) throw ConfigError("sweep needs at least one n");
    if (cfg.trials < 1) throw ConfigError("sweep needs trials >= 1");
    if (cfg.workers < 1) throw ConfigError("sweep needs workers >= 1");
    for (double g : cfg.gammas)
        if (!(g >= 0.0)) throw ConfigError("gamma must be non-negative");
    for (std::size_t n : cfg.ns)
        if (n < 2) throw ConfigError("n must be at least 2");
    if (cfg.params.mode == ParamMode::Explicit && !cfg.params.C) throw ConfigError("explicit mode needs C");
    if (cfg.params.mode == ParamMode::Theorem && cfg.params.model != ModelKind::B)
        throw ConfigError("theorem mode needs Model B");
}

std::size_t default_workers() {
    if (const char* env = std::getenv("SCALENET_WORKERS")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t gamma_index, std::size_t n, std::size_t trial) {
    std::uint64_t s = splitmix64(trial);
    s = splitmix64(s ^ n);
    s = splitmix64(s ^ gamma_index);
    return splitmix64(s ^ master);
}

std::vector<ExperimentRecord> run_sweep(const SweepConfig& cfg) {
    validate_sweep_config(cfg);
    const RunParams& run = cfg.params;

    struct GridPoint {
        std::size_t gi;
        std::size_t n;
        std::optional<Resolved> params;
        std::string error;
        double load_bound = kNaN;
        double txset_bound = kNaN;
        double throughput_floor = kNaN;
    };
    // Parameters depend on (gamma, n) only; resolve them once per grid point.
    std::vector<GridPoint> grid;
    for (std::size_t gi = 0; gi < cfg.gammas.size(); ++gi)
        for (std::size_t n : cfg.ns) {
            GridPoint pt{gi, n, std::nullopt, {}};
            const double g = cfg.gammas[gi];
            try {
                pt.params = resolve_params(n, g, run);
                const DcParams& dc = pt.params->dc;
                pt.load_bound = analysis::load_bound(n, g, dc.C);
                pt.txset_bound = analysis::txset_bound(n, g, dc.C, dc.D);
                pt.throughput_floor = analysis::throughput_floor(n, g, dc.C, dc.D, run.W);
            } catch (const ConfigError&) {
                throw;
            } catch (const std::exception& e) {
                pt.error = e.what();
            }
            grid.push_back(std::move(pt));
        }

    std::vector<ExperimentRecord> records(grid.size() * cfg.trials);
    auto run_one = [&](std::size_t idx) {
        const GridPoint& pt = grid[idx / cfg.trials];
        ExperimentRecord& rec = records[idx];
        rec.gamma = cfg.gammas[pt.gi];
        rec.n = pt.n;
        rec.trial = idx % cfg.trials;
        rec.seed = trial_seed(cfg.seed, pt.gi, pt.n, rec.trial);
        rec.L = std::numeric_limits<double>::infinity();
        rec.p = std::numeric_limits<double>::infinity();
        rec.min_slot_sinr = kNaN;
        rec.max_hop_length = kNaN;
        rec.load_bound = pt.load_bound;
        rec.txset_bound = pt.txset_bound;
        rec.throughput_floor = pt.throughput_floor;
        const auto start = std::chrono::steady_clock::now();
        if (!pt.params) {
            rec.error = pt.error;
        } else {
            try {
                const Instance inst = sample_instance(pt.n, rec.gamma, rec.seed);
                const BuildResult b = build_system(inst, pt.params->dc, run.W);
                rec.feasible = b.report.feasible;
                rec.S = b.report.S;
                rec.M = b.report.M;
                if (b.system) {
                    rec.L = b.report.L;
                    rec.p = b.report.p;
                    rec.lambda = b.report.lambda;
                    rec.max_hop_length = b.report.max_hop_length;
                    const VerifyOutcome v = verify_system(*b.system, inst.nodes, *pt.params, run);
                    rec.dc_success = v.compatible && v.dc.ok;
                    rec.sinr_success = v.compatible && v.sinr.ok;
                    rec.min_slot_sinr = v.sinr.min_sinr;
                }
            } catch (const std::exception& e) {
                rec.feasible = false;
                rec.error = e.what();
            }
        }
        if (cfg.record_timing)
            rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };

    const std::size_t workers = std::min(cfg.workers, records.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < records.size(); i = next++) run_one(i);
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return records;
}

void write_csv(std::ostream& os, std::span<const ExperimentRecord> records) {
    os << "gamma,n,trial,seed,feasible,L,S,M,p,lambda,dc_success,sinr_success,min_slot_sinr,"
          "max_hop_length,load_bound,txset_bound,throughput_floor,wall_time\n";
    for (const ExperimentRecord& r : records) {
        os << real(r.gamma) << ',' << r.n << ',' << r.trial << ',' << r.seed << ',' << int(r.feasible) << ','
           << real(r.L) << ',' << r.S << ',' << r.M << ',' << real(r.p) << ',' << real(r.lambda) << ','
           << int(r.dc_success) << ',' << int(r.sinr_success) << ',' << real(r.min_slot_sinr) << ','
           << real(r.max_hop_length) << ',' << real(r.load_bound) << ',' << real(r.txset_bound) << ','
           << real(r.throughput_floor) << ',' << real(r.wall_time) << '\n';
    }
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("loglog_slope needs equal lengths");
    if (x.size() < 2) return kNaN;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxx > 0.0 ? sxy / sxx : kNaN;
}

json summarize(const SweepConfig& cfg, std::span<const ExperimentRecord> records) {
    json points = json::array();
    json slopes = json::array();
    json errors = json::array();
    std::map<std::pair<double, std::size_t>, std::vector<const ExperimentRecord*>> by_point;
    for (const ExperimentRecord& r : records) {
        by_point[{r.gamma, r.n}].push_back(&r);
        if (!r.error.empty())
            errors.push_back({{"gamma", r.gamma}, {"n", r.n}, {"trial", r.trial}, {"error", r.error}});
    }
    for (double g : cfg.gammas) {
        std::vector<double> xs, ys, ys_ln;
        double prev_feasible = -1.0;
        bool monotone = true;
        for (std::size_t n : cfg.ns) {
            const auto& recs = by_point[{g, n}];
            std::size_t feasible = 0, dc = 0, sinr_ok = 0, l_ok = 0, s_ok = 0;
            std::vector<double> lambdas;
            for (const ExperimentRecord* r : recs) {
                if (!r->feasible) continue;
                ++feasible;
                dc += r->dc_success;
                sinr_ok += r->sinr_success;
                l_ok += r->L <= r->load_bound;
                s_ok += static_cast<double>(r->S) <= r->txset_bound;
                lambdas.push_back(r->lambda);
            }
            const double total = static_cast<double>(recs.size());
            const double fd = static_cast<double>(feasible);
            const double med = median(lambdas);
            double mean = kNaN, mn = kNaN;
            if (!lambdas.empty()) {
                CompensatedSum s;
                for (double l : lambdas) s.add(l);
                mean = s.value() / fd;
                mn = *std::min_element(lambdas.begin(), lambdas.end());
                xs.push_back(static_cast<double>(n));
                ys.push_back(med);
                ys_ln.push_back(med * std::sqrt(std::log(static_cast<double>(n))));
            }
            const double frate = fd / total;
            // Flag only: Monte Carlo noise can break monotonicity.
            if (frate + 1e-12 < prev_feasible) monotone = false;
            prev_feasible = frate;
            auto rate = [&](std::size_t k) { return feasible ? json(static_cast<double>(k) / fd) : json(nullptr); };
            points.push_back({{"gamma", g},
                              {"n", n},
                              {"trials", recs.size()},
                              {"feasible_rate", frate},
                              {"dc_success_rate", rate(dc)},
                              {"sinr_success_rate", rate(sinr_ok)},
                              {"mean_lambda", number(mean)},
                              {"min_lambda", number(mn)},
                              {"median_lambda", number(med)},
                              {"frac_L_within_bound", rate(l_ok)},
                              {"frac_S_within_bound", rate(s_ok)}});
        }
        slopes.push_back({{"gamma", g},
                          {"points_used", xs.size()},
                          {"slope_median_lambda", number(loglog_slope(xs, ys))},
                          {"slope_median_lambda_times_sqrt_ln_n", number(loglog_slope(xs, ys_ln))},
                          {"feasible_rate_monotone", monotone}});
    }
    return {{"seed_rule", kSeedRule},
            {"master_seed", cfg.seed},
            {"trials", cfg.trials},
            {"mode", cfg.params.mode == ParamMode::Theorem ? "theorem" : "explicit"},
            {"model", cfg.params.model == ModelKind::B ? "B" : "A"},
            {"alpha", cfg.params.alpha},
            {"beta", cfg.params.beta},
            {"n0", cfg.params.noise},
            {"w_bits", cfg.params.W},
            {"points", points},
            {"slopes", slopes},
            {"errors", errors}};
}

}  // namespace scalenet::harness
