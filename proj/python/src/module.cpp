/*
 * Copyright 2026 The cfleo Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/numpy.h>

#include <stdexcept>

#include "cfleo/allocation.hpp"
#include "cfleo/channel.hpp"
#include "cfleo/config.hpp"
#include "cfleo/downlink.hpp"
#include "cfleo/geometry.hpp"
#include "cfleo/simrunner.hpp"
#include "cfleo/training.hpp"
#include "cfleo/verification.hpp"

namespace py = pybind11;
using namespace cfleo;

namespace {

// Configs cross the boundary as JSON text; the Python side wraps them in dicts.
SimConfig parse(const std::string& text) { return config_from_json(nlohmann::json::parse(text)); }

py::dict rate_report(const RateReport& r) {
  py::dict d;
  d["rate"] = r.rate;
  d["sinr"] = r.sinr;
  d["numerator"] = r.numerator;
  d["interference"] = r.interference;
  d["contamination"] = r.contamination;
  d["self_correction"] = r.self_correction;
  return d;
}

py::dict solution(const PowerSolution& s) {
  py::dict d;
  d["P"] = s.P;
  d["admitted"] = s.admitted;
  d["objective"] = s.objective;
  d["rates"] = s.rates;
  d["feasible"] = s.feasible;
  return d;
}

AllocationProblem problem(const Eigen::MatrixXd& L, const Eigen::MatrixXd& kappa, int tau_up,
                          double pilot_power, double noise_var, const Eigen::VectorXd& r_min,
                          const Eigen::VectorXd& p_max, double alpha, int tau_c) {
  if (r_min.size() != L.cols() || p_max.size() != L.rows()) {
    throw std::invalid_argument("r_min must have K entries and p_max M entries");
  }
  AllocationProblem pb;
  pb.ls = large_scale_from_linear(L, kappa);
  pb.pa = assign_pilots(static_cast<int>(L.cols()), tau_up, pilot_power);
  pb.noise_var = noise_var;
  pb.frame = {tau_c, tau_up, 0, tau_c - tau_up};
  pb.r_min = r_min;
  pb.p_max = p_max;
  pb.alpha = alpha;
  return pb;
}

}  // namespace

PYBIND11_MODULE(_cfleo, m) {
  m.doc() = "Cell-free LEO downlink simulator core";
  m.attr("__version__") = "0.1.0";

  py::register_exception<std::invalid_argument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<std::domain_error>(m, "DomainError", PyExc_ValueError);

  m.def("angle_loss_db", &angle_loss_db, py::arg("theta"), py::arg("eta"));
  m.def("half_power_angle", &half_power_angle, py::arg("eta"));
  m.def("distance_loss_db", &distance_loss_db, py::arg("slant_km"), py::arg("carrier_ghz"));
  m.def("noise_power_w", &noise_power_w, py::arg("nsd_dbm_hz"), py::arg("bandwidth_mhz"),
        py::arg("noise_figure_db"));
  m.def("slant_range", [](double alt, double dx) {
    return slant_range({0.0, 0.0, alt}, {dx, 0.0, 0.0});
  }, py::arg("altitude_km"), py::arg("ground_offset_km"));

  m.def("default_config", [] { return config_to_json(SimConfig{}).dump(); });
  m.def("normalize_config", [](const std::string& text) { return config_to_json(parse(text)).dump(); },
        py::arg("config_json"));
  m.def("config_keys", &config_keys);

  m.def("closed_form_rate",
        [](const Eigen::MatrixXd& L, const Eigen::MatrixXd& kappa, const Eigen::MatrixXd& P,
           int tau_up, double pilot_power, double noise_var, int tau_c) {
          RateInputs in;
          in.ls = large_scale_from_linear(L, kappa);
          in.pa = assign_pilots(static_cast<int>(L.cols()), tau_up, pilot_power);
          in.P = P;
          in.noise_var = noise_var;
          in.frame = {tau_c, tau_up, 0, tau_c - tau_up};
          return rate_report(closed_form_rate(in));
        },
        py::arg("L"), py::arg("kappa"), py::arg("P"), py::arg("tau_up"), py::arg("pilot_power"),
        py::arg("noise_var"), py::arg("tau_c") = 300);

  m.def("ga_solve",
        [](const Eigen::MatrixXd& L, const Eigen::MatrixXd& kappa, int tau_up, double pilot_power,
           double noise_var, const Eigen::VectorXd& r_min, const Eigen::VectorXd& p_max,
           double alpha, int population, int generations, std::uint64_t seed, int tau_c) {
          const auto pb = problem(L, kappa, tau_up, pilot_power, noise_var, r_min, p_max, alpha,
                                  tau_c);
          GaParams ga;
          ga.population = population;
          ga.generations = generations;
          ga.seed = seed;
          py::gil_scoped_release release;
          return ga_solve(pb, ga);
        },
        py::arg("L"), py::arg("kappa"), py::arg("tau_up"), py::arg("pilot_power"),
        py::arg("noise_var"), py::arg("r_min"), py::arg("p_max"), py::arg("alpha") = 0.5,
        py::arg("population") = 60, py::arg("generations") = 150, py::arg("seed") = 1,
        py::arg("tau_c") = 300);

  m.def("brute_force_solve",
        [](const Eigen::MatrixXd& L, const Eigen::MatrixXd& kappa, int tau_up, double pilot_power,
           double noise_var, const Eigen::VectorXd& r_min, const Eigen::VectorXd& p_max,
           double alpha, int grid_levels, int tau_c) {
          const auto pb = problem(L, kappa, tau_up, pilot_power, noise_var, r_min, p_max, alpha,
                                  tau_c);
          return brute_force_solve(pb, grid_levels);
        },
        py::arg("L"), py::arg("kappa"), py::arg("tau_up"), py::arg("pilot_power"),
        py::arg("noise_var"), py::arg("r_min"), py::arg("p_max"), py::arg("alpha") = 0.5,
        py::arg("grid_levels") = 8, py::arg("tau_c") = 300);

  py::class_<PowerSolution>(m, "PowerSolution")
      .def_readonly("P", &PowerSolution::P)
      .def_readonly("admitted", &PowerSolution::admitted)
      .def_readonly("objective", &PowerSolution::objective)
      .def_readonly("rates", &PowerSolution::rates)
      .def_readonly("feasible", &PowerSolution::feasible)
      .def("as_dict", &solution);

  m.def("run",
        [](const std::string& text, unsigned threads) {
          const SimConfig cfg = parse(text);
          MetricsLog log;
          {
            py::gil_scoped_release release;
            log = run(cfg, threads);
          }
          const auto k = static_cast<py::ssize_t>(log.num_uts);
          const auto t = static_cast<py::ssize_t>(log.horizon);
          py::list runs;
          for (const auto& r : log.runs) {
            py::dict d;
            d["rate"] = py::array_t<double>({t, k}, r.rate.data());
            d["served"] = py::array_t<std::uint8_t>({t, k}, r.served.data());
            d["assoc"] = py::array_t<int>({t, k}, r.assoc.data());
            d["num_events"] = r.events.size();
            runs.append(d);
          }
          py::dict out;
          out["mode"] = std::string(to_string(log.mode));
          out["num_saps"] = log.num_saps;
          out["avg_se"] = log.avg_se;
          out["avg_service_time_s"] = log.avg_service_time_s;
          out["handover_rate"] = log.handover_rate;
          out["runs"] = runs;
          return out;
        },
        py::arg("config_json"), py::arg("threads") = 0);

  m.def("sweep",
        [](const std::string& text, const std::vector<int>& saps, const std::string& out_dir,
           unsigned threads) {
          const SimConfig cfg = parse(text);
          std::vector<SweepCell> cells;
          {
            py::gil_scoped_release release;
            cells = sweep(cfg, saps, out_dir, threads);
          }
          py::list out;
          for (const auto& c : cells) {
            py::dict d;
            d["M"] = c.num_saps;
            d["mode"] = std::string(to_string(c.mode));
            d["avg_se"] = c.avg_se;
            d["avg_service_time_s"] = c.avg_service_time_s;
            d["handover_rate"] = c.handover_rate;
            out.append(d);
          }
          return out;
        },
        py::arg("config_json"), py::arg("saps"), py::arg("out_dir") = "", py::arg("threads") = 0);

  m.def("verify",
        [](const std::string& text, int trials) {
          const SimConfig cfg = parse(text);
          VerifyOptions opt;
          opt.trials = trials;
          opt.seed = cfg.seed;
          std::vector<CheckResult> checks;
          {
            py::gil_scoped_release release;
            checks = run_verification(cfg.ga, cfg.alpha, opt);
          }
          py::list out;
          for (const auto& c : checks) {
            out.append(py::make_tuple(c.name, c.value, c.limit, c.pass));
          }
          return out;
        },
        py::arg("config_json"), py::arg("trials") = 100000);
}
