// scalenet command-line driver.
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scalenet/analysis.hpp"
#include "scalenet/builder.hpp"
#include "scalenet/harness.hpp"

namespace sh = scalenet::harness;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kFailed = 2;

struct ParamFlags {
    double alpha = 3.0;
    double beta = 1.0;
    double n0 = 1.0;
    double w_bits = 1.0;
    std::string mode = "theorem";
    std::string model = "B";
    std::optional<double> C, D, P;

    void add(CLI::App* app) {
        app->add_option("--alpha", alpha, "path-loss exponent")->capture_default_str();
        app->add_option("--beta", beta, "SINR threshold")->capture_default_str();
        app->add_option("--n0", n0, "noise power")->capture_default_str();
        app->add_option("--w-bits", w_bits, "bits per slot W")->capture_default_str();
        app->add_option("--mode", mode, "theorem | explicit")->capture_default_str();
        app->add_option("--model", model, "propagation model A | B")->capture_default_str();
        app->add_option("--C", C, "hop length C (explicit mode)");
        app->add_option("--D", D, "spacing factor D (explicit mode)");
        app->add_option("--P", P, "transmit power (explicit mode)");
    }

    sh::RunParams resolve() const {
        sh::RunParams p;
        p.alpha = alpha;
        p.beta = beta;
        p.noise = n0;
        p.W = w_bits;
        p.mode = sh::parse_mode(mode);
        p.model = sh::parse_model(model);
        p.C = C;
        p.D = D;
        p.P = P;
        return p;
    }
};

void emit(const std::string& out, const sh::json& j) {
    if (out.empty() || out == "-")
        std::cout << j.dump(1) << '\n';
    else
        sh::write_json(out, j);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multihop wireless capacity constructions and checks"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "sample an instance");
    std::size_t gen_n = 0;
    double gen_gamma = 0.0;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    gen->add_option("--n", gen_n, "node count")->required();
    gen->add_option("--gamma", gen_gamma, "disk radius exponent")->required();
    gen->add_option("--seed", gen_seed, "instance seed")->capture_default_str();
    gen->add_option("--out", gen_out, "instance JSON path (default stdout)");

    // build
    auto* build = app.add_subcommand("build", "route, color and schedule an instance");
    std::string build_in, build_out;
    ParamFlags build_p;
    build->add_option("instance", build_in, "instance JSON")->required();
    build->add_option("--out", build_out, "system JSON path");
    build_p.add(build);

    // verify
    auto* verify = app.add_subcommand("verify", "check compatibility, DC and SINR success");
    std::string verify_in, verify_inst;
    ParamFlags verify_p;
    verify->add_option("system", verify_in, "system JSON")->required();
    verify->add_option("--instance", verify_inst, "instance JSON supplying node positions");
    verify_p.add(verify);

    // adversarial
    auto* adv = app.add_subcommand("adversarial", "ring construction that defeats small (C, D)");
    double adv_C = 0.05, adv_D = 0.05, adv_alpha = 3.0, adv_beta = 1.0;
    std::size_t adv_m = 10000;
    adv->add_option("--C", adv_C)->capture_default_str();
    adv->add_option("--D", adv_D)->capture_default_str();
    adv->add_option("--alpha", adv_alpha)->capture_default_str();
    adv->add_option("--beta", adv_beta)->capture_default_str();
    adv->add_option("--m", adv_m, "interferer count")->capture_default_str();

    // bounds
    auto* bounds = app.add_subcommand("bounds", "closed-form bounds at one (n, gamma)");
    std::size_t bounds_n = 0;
    double bounds_gamma = 0.0;
    ParamFlags bounds_p;
    bounds->add_option("--n", bounds_n)->required();
    bounds->add_option("--gamma", bounds_gamma)->required();
    bounds_p.add(bounds);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Monte Carlo sweep over (gamma, n)");
    std::string sweep_cfg, sweep_out, sweep_summary;
    std::vector<double> sweep_gamma;
    std::vector<std::size_t> sweep_n;
    std::optional<std::size_t> sweep_trials, sweep_workers;
    std::optional<std::uint64_t> sweep_seed;
    bool sweep_timing = false;
    ParamFlags sweep_p;
    sweep->add_option("config", sweep_cfg, "sweep config JSON (flags override)");
    sweep->add_option("--gamma", sweep_gamma, "gamma list")->delimiter(',');
    sweep->add_option("--n", sweep_n, "n list")->delimiter(',');
    sweep->add_option("--trials", sweep_trials);
    sweep->add_option("--seed", sweep_seed, "master seed");
    sweep->add_option("--workers", sweep_workers, "worker threads (default SCALENET_WORKERS)");
    sweep->add_option("--out", sweep_out, "records CSV path (default stdout)");
    sweep->add_option("--summary", sweep_summary, "summary JSON path (default <out>.summary.json)");
    sweep->add_flag("--timing", sweep_timing, "record wall_time (CSV no longer reproducible)");
    sweep_p.add(sweep);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*gen) {
            emit(gen_out, sh::instance_to_json(scalenet::sample_instance(gen_n, gen_gamma, gen_seed)));
            return kOk;
        }
        if (*build) {
            const auto inst = sh::instance_from_json(sh::read_json(build_in));
            const auto run = build_p.resolve();
            sh::Resolved params;
            try {
                params = sh::resolve_params(inst.n, inst.gamma, run);
            } catch (const scalenet::analysis::RegimeError& e) {
                std::cerr << "refused: " << e.what() << '\n';
                return kFailed;
            }
            const auto result = scalenet::build_system(inst, params.dc, run.W);
            std::cout << sh::report_to_json(result.report, params).dump(1) << '\n';
            if (!result.system) return kFailed;
            if (!build_out.empty()) sh::write_json(build_out, sh::system_to_json(*result.system, inst));
            return kOk;
        }
        if (*verify) {
            auto loaded = sh::system_from_json(sh::read_json(verify_in));
            if (!verify_inst.empty()) {
                const auto inst = sh::instance_from_json(sh::read_json(verify_inst));
                loaded.nodes = inst.nodes;
                loaded.n = inst.n;
                loaded.gamma = inst.gamma;
            }
            if (loaded.nodes.empty() || !loaded.n || !loaded.gamma)
                throw sh::ConfigError("node positions missing: pass --instance");
            const auto run = verify_p.resolve();
            sh::Resolved params;
            try {
                params = sh::resolve_params(*loaded.n, *loaded.gamma, run);
            } catch (const scalenet::analysis::RegimeError& e) {
                std::cerr << "refused: " << e.what() << '\n';
                return kFailed;
            }
            const auto outcome = sh::verify_system(loaded.system, loaded.nodes, params, run);
            sh::print_verify(std::cout, outcome);
            return outcome.ok() ? kOk : kFailed;
        }
        if (*adv) {
            const auto rep = sh::run_adversarial({adv_C, adv_D}, adv_alpha, adv_beta, adv_m);
            std::cout << sh::adversarial_to_json(rep).dump(1) << '\n';
            return kOk;
        }
        if (*bounds) {
            std::cout << sh::bounds_to_json(sh::run_bounds(bounds_n, bounds_gamma, bounds_p.resolve())).dump(1)
                      << '\n';
            return kOk;
        }
        if (*sweep) {
            sh::SweepConfig cfg;
            cfg.workers = sh::default_workers();
            cfg.params = sweep_p.resolve();
            if (!sweep_cfg.empty()) cfg = sh::sweep_config_from_json(sh::read_json(sweep_cfg), cfg);
            // Explicit flags win over the file.
            if (!sweep_gamma.empty()) cfg.gammas = sweep_gamma;
            if (!sweep_n.empty()) cfg.ns = sweep_n;
            if (sweep_trials) cfg.trials = *sweep_trials;
            if (sweep_seed) cfg.seed = *sweep_seed;
            if (sweep_workers) cfg.workers = *sweep_workers;
            if (sweep_timing) cfg.record_timing = true;
            const auto flags = sweep_p.resolve();
            if (sweep->count("--alpha")) cfg.params.alpha = flags.alpha;
            if (sweep->count("--beta")) cfg.params.beta = flags.beta;
            if (sweep->count("--n0")) cfg.params.noise = flags.noise;
            if (sweep->count("--w-bits")) cfg.params.W = flags.W;
            if (sweep->count("--mode")) cfg.params.mode = flags.mode;
            if (sweep->count("--model")) cfg.params.model = flags.model;
            if (sweep_p.C) cfg.params.C = sweep_p.C;
            if (sweep_p.D) cfg.params.D = sweep_p.D;
            if (sweep_p.P) cfg.params.P = sweep_p.P;
            sh::validate_sweep_config(cfg);

            const auto records = sh::run_sweep(cfg);
            if (sweep_out.empty() || sweep_out == "-") {
                sh::write_csv(std::cout, records);
            } else {
                std::ofstream csv(sweep_out);
                if (!csv) throw sh::ConfigError("cannot write " + sweep_out);
                sh::write_csv(csv, records);
            }
            const std::string summary_path =
                !sweep_summary.empty() ? sweep_summary
                : (sweep_out.empty() || sweep_out == "-") ? std::string()
                                                           : sweep_out + ".summary.json";
            const auto summary = sh::summarize(cfg, records);
            if (summary_path.empty())
                std::cerr << summary.dump(1) << '\n';
            else
                sh::write_json(summary_path, summary);
            return kOk;
        }
    } catch (const sh::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "failed: " << e.what() << '\n';
        return kFailed;
    }
    return kUsage;
}
