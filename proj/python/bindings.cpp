#include "cfmimo/accounting.hpp"
#include "cfmimo/campaign.hpp"
#include "cfmimo/combining.hpp"
#include "cfmimo/config.hpp"
#include "cfmimo/lsfd.hpp"
#include "cfmimo/network.hpp"
#include "cfmimo/power_control.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace cfmimo;

namespace {

PowerControlProblem make_problem(const LsfdStatistics &stats, LsfdMode mode, double rho_u,
                                 const std::vector<std::vector<int>> *sets, const DccAssignment *dcc)
{
    if (mode == LsfdMode::Level3NOpt && sets == nullptr)
        throw std::invalid_argument("level3-nopt needs interference sets");
    if (mode == LsfdMode::Level2 && dcc == nullptr)
        throw std::invalid_argument("level2 needs the serving assignment");
    PowerControlProblem p;
    p.stats = &stats;
    p.mode = mode;
    p.sets = sets;
    p.dcc = dcc;
    p.rho_u = rho_u;
    return p;
}

py::dict count_dict(const Count &c)
{
    py::dict d;
    d["total"] = c.total.to_double();
    d["per_ue"] = c.per_ue.to_double();
    return d;
}

} // namespace

PYBIND11_MODULE(_cfmimo, m)
{
    m.doc() = "Cell-free massive MIMO uplink simulation with large-scale fading decoding";
    m.attr("__version__") = kVersion;

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<CampaignError>(m, "CampaignError", PyExc_RuntimeError);
    py::register_exception<DegenerateStatisticsError>(m, "DegenerateStatisticsError", PyExc_ArithmeticError);
    py::register_exception<InvalidWeightsError>(m, "InvalidWeightsError", PyExc_ValueError);
    py::register_exception<EstimationError>(m, "EstimationError", PyExc_ArithmeticError);

    py::enum_<CombinerKind>(m, "CombinerKind")
        .value("MR", CombinerKind::MR)
        .value("PartialMMSE", CombinerKind::PartialMMSE);
    py::enum_<LsfdMode>(m, "LsfdMode")
        .value("Level2", LsfdMode::Level2)
        .value("Level3Opt", LsfdMode::Level3Opt)
        .value("Level3NOpt", LsfdMode::Level3NOpt);
    py::enum_<PowerMode>(m, "PowerMode").value("Full", PowerMode::Full).value("MaxMin", PowerMode::MaxMin);

    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init<>())
        .def_readwrite("L", &SimConfig::L)
        .def_readwrite("N", &SimConfig::N)
        .def_readwrite("K", &SimConfig::K)
        .def_readwrite("area_side", &SimConfig::area_side)
        .def_readwrite("tau_c", &SimConfig::tau_c)
        .def_readwrite("tau_p", &SimConfig::tau_p)
        .def_readwrite("rho_p", &SimConfig::rho_p)
        .def_readwrite("rho_u", &SimConfig::rho_u)
        .def_readwrite("sigma2", &SimConfig::sigma2)
        .def_readwrite("asd_deg", &SimConfig::asd_deg)
        .def_readwrite("shadow_std_db", &SimConfig::shadow_std_db)
        .def_readwrite("mc_trials", &SimConfig::mc_trials)
        .def_readwrite("n_setups", &SimConfig::n_setups)
        .def_readwrite("seed", &SimConfig::seed)
        .def_readwrite("R_design", &SimConfig::R_design)
        .def_readwrite("combiner_kind", &SimConfig::combiner_kind)
        .def_readwrite("lsfd_mode", &SimConfig::lsfd_mode)
        .def_readwrite("power_mode", &SimConfig::power_mode)
        .def_readwrite("fp_tol", &SimConfig::fp_tol)
        .def_readwrite("max_iters", &SimConfig::max_iters)
        .def("validate", &SimConfig::validate)
        .def("set", &SimConfig::set, py::arg("key"), py::arg("value"))
        .def("to_text", &SimConfig::to_text);
    m.def("parse_config", &parse_config, py::arg("text"));
    m.def("load_config", &load_config, py::arg("path"));

    py::class_<NetworkSetup>(m, "NetworkSetup")
        .def_readonly("setup_index", &NetworkSetup::setup_index)
        .def_readonly("L", &NetworkSetup::L)
        .def_readonly("N", &NetworkSetup::N)
        .def_readonly("K", &NetworkSetup::K)
        .def_readonly("ap_positions", &NetworkSetup::ap_positions)
        .def_readonly("ue_positions", &NetworkSetup::ue_positions)
        .def("R", &NetworkSetup::R, py::arg("k"), py::arg("l"))
        .def("beta", &NetworkSetup::beta, py::arg("k"), py::arg("l"));

    py::class_<DccAssignment>(m, "DccAssignment")
        .def_readonly("L", &DccAssignment::L)
        .def_readonly("K", &DccAssignment::K)
        .def_readonly("tau_p", &DccAssignment::tau_p)
        .def_readonly("pilot_of", &DccAssignment::pilot_of)
        .def_readonly("master_of", &DccAssignment::master_of)
        .def_readonly("copilot_sets", &DccAssignment::copilot_sets)
        .def_readonly("serving_sets", &DccAssignment::serving_sets)
        .def_readonly("served_sets", &DccAssignment::served_sets)
        .def("serves", &DccAssignment::serves, py::arg("l"), py::arg("k"))
        .def("check_invariants", &DccAssignment::check_invariants, py::arg("check_pilot_capacity") = true);

    m.def("generate_setup", &generate_setup, py::arg("config"), py::arg("setup_index"));
    m.def("assign_pilots_and_clusters", &assign_pilots_and_clusters, py::arg("setup"), py::arg("config"));
    m.def("make_dcc", &make_dcc, py::arg("L"), py::arg("tau_p"), py::arg("pilot_of"), py::arg("serving_sets"));
    m.def("all_serving", &all_serving, py::arg("base"));
    m.def("positions_csv", &positions_csv, py::arg("setup"));

    py::class_<UeStatistics>(m, "UeStatistics")
        .def_readonly("ue", &UeStatistics::ue)
        .def_readonly("serving", &UeStatistics::serving)
        .def_readonly("cross_mean", &UeStatistics::cross_mean)
        .def_readonly("second", &UeStatistics::second)
        .def_readonly("noise", &UeStatistics::noise);
    py::class_<LsfdStatistics>(m, "LsfdStatistics")
        .def_readonly("K", &LsfdStatistics::K)
        .def_readonly("trials_used", &LsfdStatistics::trials_used)
        .def_readonly("ue", &LsfdStatistics::ue)
        .def("to_json", [](const LsfdStatistics &s) { return statistics_to_json(s).dump(); })
        .def_static("from_json",
                    [](const std::string &text) { return statistics_from_json(nlohmann::json::parse(text)); });

    m.def(
        "estimate_lsfd_statistics",
        [](const NetworkSetup &setup, const DccAssignment &dcc, const SimConfig &config, std::vector<double> eta,
           int threads) {
            py::gil_scoped_release release;
            return estimate_lsfd_statistics(setup, dcc, config, eta, threads);
        },
        py::arg("setup"), py::arg("dcc"), py::arg("config"), py::arg("eta"), py::arg("threads") = 1);

    m.def("interference_set", &interference_set, py::arg("dcc"), py::arg("k"), py::arg("R"), py::arg("N"));
    m.def("interference_sets", &interference_sets, py::arg("dcc"), py::arg("R"), py::arg("N"));
    m.def(
        "optimal_lsfd",
        [](const LsfdStatistics &s, std::vector<double> eta, int k) { return optimal_lsfd(s, eta, k).a; },
        py::arg("stats"), py::arg("eta"), py::arg("k"));
    m.def(
        "nearly_optimal_lsfd",
        [](const LsfdStatistics &s, std::vector<double> eta, int k, std::vector<int> set) {
            return nearly_optimal_lsfd(s, eta, k, set).a;
        },
        py::arg("stats"), py::arg("eta"), py::arg("k"), py::arg("interference_set"));
    m.def(
        "sinr", [](const LsfdStatistics &s, std::vector<double> eta, int k, const CVec &a) { return sinr(s, eta, k, a); },
        py::arg("stats"), py::arg("eta"), py::arg("k"), py::arg("a"));
    m.def(
        "optimal_sinr",
        [](const LsfdStatistics &s, std::vector<double> eta, int k, std::optional<std::vector<int>> subset) {
            if (subset)
                return optimal_sinr(s, eta, k, std::span<const int>(*subset));
            return optimal_sinr(s, eta, k);
        },
        py::arg("stats"), py::arg("eta"), py::arg("k"), py::arg("subset") = py::none());
    m.def("se", &se, py::arg("sinr"), py::arg("tau_c"), py::arg("tau_p"));
    m.def("level2_weights", &level2_weights, py::arg("k"), py::arg("dcc"));

    py::class_<IterationRecord>(m, "IterationRecord")
        .def_readonly("iteration", &IterationRecord::iteration)
        .def_readonly("min_sinr", &IterationRecord::min_sinr)
        .def_readonly("max_sinr", &IterationRecord::max_sinr)
        .def_readonly("spread", &IterationRecord::spread);
    py::class_<PowerAllocation>(m, "PowerAllocation")
        .def_readonly("eta", &PowerAllocation::eta)
        .def_readonly("sinr", &PowerAllocation::sinr)
        .def_readonly("iterations", &PowerAllocation::iterations)
        .def_readonly("converged", &PowerAllocation::converged)
        .def_readonly("history", &PowerAllocation::history)
        .def("min_sinr", &PowerAllocation::min_sinr);

    m.def(
        "maxmin_fixed_point",
        [](const LsfdStatistics &s, LsfdMode mode, double rho_u, double tol, int max_iters,
           std::optional<std::vector<double>> initial, std::optional<std::vector<std::vector<int>>> sets,
           const DccAssignment *dcc) {
            const auto p = make_problem(s, mode, rho_u, sets ? &*sets : nullptr, dcc);
            FixedPointOptions o;
            o.tol = tol;
            o.max_iters = max_iters;
            o.initial = std::move(initial);
            return maxmin_fixed_point(p, o);
        },
        py::arg("stats"), py::arg("mode") = LsfdMode::Level3Opt, py::arg("rho_u") = 0.1, py::arg("tol") = 1e-3,
        py::arg("max_iters") = 500, py::arg("initial") = py::none(), py::arg("sets") = py::none(),
        py::arg("dcc") = nullptr);
    m.def(
        "grid_search_oracle",
        [](const LsfdStatistics &s, double rho_u, int grid_n) {
            return grid_search_oracle(make_problem(s, LsfdMode::Level3Opt, rho_u, nullptr, nullptr), grid_n);
        },
        py::arg("stats"), py::arg("rho_u"), py::arg("grid_n") = 60);

    m.def("lsfd_complexity", &lsfd_complexity, py::arg("m"));
    m.def(
        "fronthaul_uplink_count",
        [](const DccAssignment &d, int tau_c, int tau_p) { return count_dict(fronthaul_uplink_count(d, tau_c, tau_p)); },
        py::arg("dcc"), py::arg("tau_c"), py::arg("tau_p"));
    m.def(
        "fronthaul_stats_count",
        [](const DccAssignment &d, int K, LsfdMode mode, std::optional<std::vector<std::vector<int>>> sets) {
            return count_dict(fronthaul_stats_count(d, K, mode, sets ? &*sets : nullptr));
        },
        py::arg("dcc"), py::arg("K"), py::arg("mode"), py::arg("sets") = py::none());
    m.def("empirical_cdf", &empirical_cdf, py::arg("samples"));

    py::class_<SeRecord>(m, "SeRecord")
        .def_readonly("setup", &SeRecord::setup)
        .def_readonly("ue", &SeRecord::ue)
        .def_readonly("mode", &SeRecord::mode)
        .def_readonly("power", &SeRecord::power)
        .def_readonly("sinr", &SeRecord::sinr)
        .def_readonly("se", &SeRecord::se);
    py::class_<CampaignResult>(m, "CampaignResult")
        .def_readonly("records", &CampaignResult::records)
        .def_readonly("cdfs", &CampaignResult::cdfs)
        .def_readonly("failed_setups", &CampaignResult::failed_setups)
        .def_readonly("setups_run", &CampaignResult::setups_run)
        .def("se_samples", &CampaignResult::se_samples, py::arg("mode"), py::arg("power"))
        .def("min_se_per_setup", &CampaignResult::min_se_per_setup, py::arg("mode"), py::arg("power"))
        .def("per_ue_csv", [](const CampaignResult &r) { return per_ue_csv(r); })
        .def("cdf_csv", [](const CampaignResult &r) { return cdf_csv(r); })
        .def("accounting_csv", [](const CampaignResult &r) { return accounting_csv(r); })
        .def("trace_csv", [](const CampaignResult &r) { return trace_csv(r); });

    m.def(
        "run_campaign",
        [](const SimConfig &config, const std::string &modes, const std::string &powers, int threads,
           bool trace_convergence, const std::string &cache_dir) {
            CampaignOptions o;
            o.modes = parse_mode_list(modes);
            o.powers = parse_power_list(powers);
            o.threads = threads;
            o.trace_convergence = trace_convergence;
            o.cache_dir = cache_dir;
            py::gil_scoped_release release;
            return run_campaign(config, o);
        },
        py::arg("config"), py::arg("modes") = "level2,level3-opt", py::arg("powers") = "full", py::arg("threads") = 1,
        py::arg("trace_convergence") = false, py::arg("cache_dir") = "");
}
