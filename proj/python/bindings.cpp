// Python bindings. Documents cross the boundary as JSON text; the package
// wrapper turns them into dicts.
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "scalenet/analysis.hpp"
#include "scalenet/builder.hpp"
#include "scalenet/geometry.hpp"
#include "scalenet/harness.hpp"
#include "scalenet/propagation.hpp"

namespace py = pybind11;
namespace sh = scalenet::harness;
namespace sa = scalenet::analysis;
using scalenet::DcParams;
using scalenet::Point;

namespace {

using XY = std::pair<double, double>;

Point to_point(const XY& p) { return {p.first, p.second}; }

template <class T>
void take(const py::dict& d, const char* key, T& out) {
    if (d.contains(key)) out = d[key].cast<T>();
}

sh::RunParams run_params(const py::dict& d) {
    sh::RunParams p;
    take(d, "alpha", p.alpha);
    take(d, "beta", p.beta);
    take(d, "n0", p.noise);
    take(d, "w_bits", p.W);
    if (d.contains("mode")) p.mode = sh::parse_mode(d["mode"].cast<std::string>());
    if (d.contains("model")) p.model = sh::parse_model(d["model"].cast<std::string>());
    for (const char* key : {"C", "D", "P"})
        if (d.contains(key) && !d[key].is_none()) {
            const double v = d[key].cast<double>();
            (key[0] == 'C' ? p.C : key[0] == 'D' ? p.D : p.P) = v;
        }
    return p;
}

scalenet::PropagationModel model_of(const std::string& kind, double alpha) {
    return {sh::parse_model(kind), alpha};
}

py::dict theorem_dict(const sa::TheoremParams& tp) {
    py::dict d;
    d["C"] = tp.C;
    d["D"] = tp.D;
    d["P"] = tp.P;
    return d;
}

}  // namespace

PYBIND11_MODULE(_scalenet, m) {
    m.doc() = "scalenet core";

    py::register_exception<sh::ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<sa::RegimeError>(m, "RegimeError", PyExc_RuntimeError);

    // propagation
    m.def("attenuation", [](const std::string& model, double alpha, double d) {
        return scalenet::attenuation(model_of(model, alpha), d);
    }, py::arg("model"), py::arg("alpha"), py::arg("d"));
    m.def("sinr", [](XY tx, XY rx, const std::vector<XY>& interferers, double power, double noise,
                     const std::string& model, double alpha) {
        scalenet::TxConfig cfg{to_point(tx), to_point(rx), {}};
        for (const auto& p : interferers) cfg.interferers.push_back(to_point(p));
        return scalenet::sinr(cfg, {power, noise, 1.0}, model_of(model, alpha));
    }, py::arg("transmitter"), py::arg("receiver"), py::arg("interferers"), py::arg("power"),
       py::arg("noise"), py::arg("model") = "B", py::arg("alpha") = 3.0);
    m.def("ensure_sum", [](double C, double D, double alpha, std::optional<std::size_t> rings) {
        return scalenet::ensure_sum({C, D}, alpha, rings);
    }, py::arg("C"), py::arg("D"), py::arg("alpha"), py::arg("rings") = py::none());
    m.def("ensure_sum_model_a", &scalenet::ensure_sum_model_a, py::arg("D"), py::arg("alpha"));
    m.def("ensures_sinr", [](double C, double D, double alpha, double beta, std::optional<double> diameter) {
        return scalenet::ensures_sinr({C, D}, alpha, beta, diameter);
    }, py::arg("C"), py::arg("D"), py::arg("alpha"), py::arg("beta"), py::arg("diameter") = py::none());
    m.def("tau", &scalenet::tau, py::arg("alpha"));
    m.def("sufficient_pair", [](double C, double D, double alpha, double beta) {
        return scalenet::sufficient_pair({C, D}, alpha, beta);
    }, py::arg("C"), py::arg("D"), py::arg("alpha"), py::arg("beta"));
    m.def("find_D_for_C", &scalenet::find_D_for_C, py::arg("C"), py::arg("alpha"), py::arg("beta"));
    m.def("min_power", [](double C, double D, double alpha, double beta, double noise,
                          std::optional<double> diameter) {
        return scalenet::min_power({C, D}, alpha, beta, noise, diameter);
    }, py::arg("C"), py::arg("D"), py::arg("alpha"), py::arg("beta"), py::arg("noise"),
       py::arg("diameter") = py::none());
    m.def("sinr_lower_bound", [](double C, double D, double power, double noise, double alpha, double dmax) {
        return scalenet::sinr_lower_bound({C, D}, {power, noise, 1.0}, alpha, dmax);
    }, py::arg("C"), py::arg("D"), py::arg("power"), py::arg("noise"), py::arg("alpha"),
       py::arg("max_interferer_distance"));
    m.def("converse_threshold", [](double C, double D, double alpha) {
        return scalenet::converse_threshold({C, D}, alpha);
    }, py::arg("C"), py::arg("D"), py::arg("alpha"));
    m.def("converse_small_threshold", &scalenet::converse_small_threshold, py::arg("alpha"));
    m.def("_adversarial", [](double C, double D, double alpha, double beta, std::size_t count) {
        return sh::adversarial_to_json(sh::run_adversarial({C, D}, alpha, beta, count)).dump();
    });

    // partition
    py::class_<scalenet::Partition>(m, "Partition")
        .def_property_readonly("size", &scalenet::Partition::size)
        .def_property_readonly("u", &scalenet::Partition::u)
        .def_property_readonly("w", &scalenet::Partition::w)
        .def_property_readonly("radius", &scalenet::Partition::radius)
        .def("sites", [](const scalenet::Partition& p) {
            std::vector<XY> out;
            for (const Point& s : p.sites()) out.emplace_back(s.x, s.y);
            return out;
        })
        .def("cell_of", [](const scalenet::Partition& p, XY q) { return p.cell_of(to_point(q)); })
        .def("cells_intersected", [](const scalenet::Partition& p, XY a, XY b) {
            return scalenet::cells_intersected(p, {to_point(a), to_point(b)});
        });
    m.def("build_disk_partition", &scalenet::build_disk_partition, py::arg("radius"), py::arg("w"));

    // analysis
    m.def("chernoff_upper", &sa::chernoff_upper, py::arg("n"), py::arg("q"), py::arg("nu"));
    m.def("chernoff_lower", &sa::chernoff_lower, py::arg("n"), py::arg("q"), py::arg("nu"));
    m.def("intersect_prob_bound", &sa::intersect_prob_bound, py::arg("z"), py::arg("n"), py::arg("gamma"));
    m.def("load_bound", &sa::load_bound, py::arg("n"), py::arg("gamma"), py::arg("C"));
    m.def("txset_bound", &sa::txset_bound, py::arg("n"), py::arg("gamma"), py::arg("C"), py::arg("D"));
    m.def("throughput_floor", &sa::throughput_floor, py::arg("n"), py::arg("gamma"), py::arg("C"),
          py::arg("D"), py::arg("W"));
    m.def("growth_condition", &sa::growth_condition, py::arg("n"), py::arg("gamma"), py::arg("C"));
    m.def("gk_connectivity", &sa::gk_connectivity, py::arg("n"), py::arg("gamma"), py::arg("C"));
    m.def("gk_reference_params", &sa::gk_reference_params, py::arg("n"), py::arg("gamma"));
    m.def("regime_threshold_n", &sa::regime_threshold_n);
    m.def("theorem_params", [](std::size_t n, double gamma, double alpha, double beta, double noise) {
        return theorem_dict(sa::theorem_params(n, gamma, alpha, beta, noise));
    }, py::arg("n"), py::arg("gamma"), py::arg("alpha") = 3.0, py::arg("beta") = 1.0, py::arg("noise") = 1.0);
    m.def("_bounds", [](std::size_t n, double gamma, const py::dict& params) {
        return sh::bounds_to_json(sh::run_bounds(n, gamma, run_params(params))).dump();
    });

    // instances and systems
    m.def("_sample_instance", [](std::size_t n, double gamma, std::uint64_t seed) {
        return sh::instance_to_json(scalenet::sample_instance(n, gamma, seed)).dump();
    });
    m.def("_build", [](const std::string& instance_json, const py::dict& params) {
        const auto inst = sh::instance_from_json(sh::json::parse(instance_json));
        const auto run = run_params(params);
        const auto resolved = sh::resolve_params(inst.n, inst.gamma, run);
        const auto result = scalenet::build_system(inst, resolved.dc, run.W);
        sh::json out;
        out["report"] = sh::report_to_json(result.report, resolved);
        out["system"] = result.system ? sh::system_to_json(*result.system, inst) : sh::json(nullptr);
        return out.dump();
    });
    m.def("_verify", [](const std::string& system_json, const py::dict& params) {
        const auto loaded = sh::system_from_json(sh::json::parse(system_json));
        if (!loaded.n || !loaded.gamma || loaded.nodes.empty())
            throw sh::ConfigError("system document lacks n, gamma or nodes");
        const auto run = run_params(params);
        const auto resolved = sh::resolve_params(*loaded.n, *loaded.gamma, run);
        const auto outcome = sh::verify_system(loaded.system, loaded.nodes, resolved, run);
        std::ostringstream text;
        sh::print_verify(text, outcome);
        sh::json out;
        out["ok"] = outcome.ok();
        out["compatible"] = outcome.compatible;
        out["dc_ok"] = outcome.dc.ok;
        out["sinr_ok"] = outcome.sinr.ok;
        out["min_sinr"] = outcome.sinr.min_sinr;
        out["text"] = text.str();
        return out.dump();
    });
    m.def("_sweep", [](std::vector<double> gammas, std::vector<std::size_t> ns, std::size_t trials,
                       std::uint64_t seed, std::optional<std::size_t> workers, const py::dict& params) {
        sh::SweepConfig cfg;
        cfg.gammas = std::move(gammas);
        cfg.ns = std::move(ns);
        cfg.trials = trials;
        cfg.seed = seed;
        cfg.workers = workers ? *workers : sh::default_workers();
        cfg.params = run_params(params);
        sh::validate_sweep_config(cfg);
        std::vector<sh::ExperimentRecord> records;
        {
            py::gil_scoped_release release;
            records = sh::run_sweep(cfg);
        }
        std::ostringstream csv;
        sh::write_csv(csv, records);
        return std::make_pair(csv.str(), sh::summarize(cfg, records).dump());
    });
    m.attr("SEED_RULE") = sh::kSeedRule;
}
