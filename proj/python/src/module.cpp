#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <algorithm>
#include <vector>

#include "pdmpline/config.hpp"
#include "pdmpline/ensemble.hpp"
#include "pdmpline/errors.hpp"
#include "pdmpline/flow.hpp"
#include "pdmpline/io.hpp"
#include "pdmpline/model.hpp"
#include "pdmpline/pdmp.hpp"

namespace py = pybind11;
using namespace pdmpline;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

template <class T, class Member>
auto array_property(Member T::*member) {
  return [member](const T& self) { return to_array(self.*member); };
}

void bind_model(py::module_& m) {
  py::enum_<MachineStatus>(m, "MachineStatus")
      .value("down", MachineStatus::down)
      .value("up", MachineStatus::up);

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init<>())
      .def_readwrite("v", &ModelParams::v)
      .def_readwrite("a", &ModelParams::a)
      .def_readwrite("b", &ModelParams::b)
      .def_readwrite("c", &ModelParams::c)
      .def_readwrite("lambda_10_min", &ModelParams::lambda_10_min)
      .def_readwrite("lambda_10_max", &ModelParams::lambda_10_max)
      .def_readwrite("theta1", &ModelParams::theta1)
      .def_readwrite("theta2", &ModelParams::theta2)
      .def_readwrite("lambda_01", &ModelParams::lambda_01)
      .def("validate", &ModelParams::validate);

  py::class_<InflowProfile>(m, "InflowProfile")
      .def(py::init<double>(), py::arg("rate"))
      .def(py::init<std::vector<double>, std::vector<double>>(), py::arg("starts"), py::arg("rates"))
      .def("__call__", &InflowProfile::operator(), py::arg("t"))
      .def_property_readonly("starts", &InflowProfile::starts)
      .def_property_readonly("rates", &InflowProfile::rates);

  py::class_<SystemState>(m, "SystemState")
      .def(py::init<>())
      .def_readwrite("t", &SystemState::t)
      .def_readwrite("w", &SystemState::w)
      .def_readwrite("r", &SystemState::r)
      .def_readwrite("q", &SystemState::q)
      .def_readwrite("rho", &SystemState::rho)
      .def("wip", &SystemState::wip, py::arg("dx"))
      .def("mass", &SystemState::mass, py::arg("dx"));

  py::class_<Scenario>(m, "Scenario")
      .def(py::init<>())
      .def_readwrite("params", &Scenario::params)
      .def_readwrite("inflow", &Scenario::inflow)
      .def_readwrite("rho0", &Scenario::rho0)
      .def_readwrite("q0", &Scenario::q0)
      .def_readwrite("r0", &Scenario::r0)
      .def_readwrite("w0", &Scenario::w0)
      .def_readwrite("horizon", &Scenario::horizon)
      .def_readwrite("dx", &Scenario::dx)
      .def_readwrite("dt", &Scenario::dt)
      .def("cells", &Scenario::cells)
      .def("validate", &Scenario::validate)
      .def("initial_state", &Scenario::initial_state);

  m.def("failure_rate", &failure_rate, py::arg("w"), py::arg("params"));
  m.def("repair_rate", &repair_rate, py::arg("w"), py::arg("params"));
  m.def("mean_time_to_failure", &mean_time_to_failure, py::arg("params"));
  m.def("characteristic_failure_time", &characteristic_failure_time, py::arg("params"),
        py::arg("inflow"));
}

void bind_flow(py::module_& m) {
  py::class_<FlowStepReport>(m, "FlowStepReport")
      .def_readonly("t", &FlowStepReport::t)
      .def_readonly("dt", &FlowStepReport::dt)
      .def_readonly("inflow", &FlowStepReport::inflow)
      .def_readonly("g_out", &FlowStepReport::g_out)
      .def_readonly("out_flux", &FlowStepReport::out_flux)
      .def_readonly("mass_balance_residual", &FlowStepReport::mass_balance_residual)
      .def_readonly("mass", &FlowStepReport::mass);

  m.def(
      "queue_step",
      [](double q, double inflow, double capacity, double dt) {
        const QueueStep s = queue_step(q, inflow, capacity, dt);
        return py::make_tuple(s.q, s.g_out);
      },
      py::arg("q"), py::arg("inflow"), py::arg("capacity"), py::arg("dt"),
      "Returns (q_new, g_out).");
  m.def(
      "upwind_step",
      [](std::vector<double> rho, double capacity, double g_out, const ModelParams& p, double dt,
         double dx) {
        const double out = upwind_step(rho, capacity, g_out, p, dt, dx);
        return py::make_tuple(rho, out);
      },
      py::arg("rho"), py::arg("capacity"), py::arg("g_out"), py::arg("params"), py::arg("dt"),
      py::arg("dx"), "Returns (new density grid, outflux).");
  m.def("workload_step",
        [](double w, MachineStatus r, const std::vector<double>& rho, double dx, double dt) {
          return workload_step(w, r, rho, dx, dt);
        },
        py::arg("w"), py::arg("r"), py::arg("rho"), py::arg("dx"), py::arg("dt"));
  m.def(
      "flow_advance",
      [](SystemState state, double t_target, const Scenario& s) {
        std::vector<FlowStepReport> reports;
        flow_advance(state, t_target, s, &reports);
        return py::make_tuple(state, reports);
      },
      py::arg("state"), py::arg("t_target"), py::arg("scenario"),
      "Returns (state at t_target, per-step reports).");
}

void bind_pdmp(py::module_& m) {
  py::enum_<JumpKind>(m, "JumpKind").value("failure", JumpKind::failure).value("repair", JumpKind::repair);

  py::class_<JumpEvent>(m, "JumpEvent")
      .def_readonly("time", &JumpEvent::time)
      .def_readonly("kind", &JumpEvent::kind)
      .def_readonly("w_before", &JumpEvent::w_before)
      .def_readonly("w_after", &JumpEvent::w_after)
      .def_readonly("r_after", &JumpEvent::r_after)
      .def_readonly("q_after", &JumpEvent::q_after)
      .def_readonly("mass_after", &JumpEvent::mass_after);

  py::class_<TrajectoryRecord>(m, "TrajectoryRecord")
      .def_property_readonly("sample_times", array_property(&TrajectoryRecord::sample_times))
      .def_property_readonly("w", array_property(&TrajectoryRecord::w))
      .def_property_readonly("capacity", array_property(&TrajectoryRecord::capacity))
      .def_property_readonly("q", array_property(&TrajectoryRecord::q))
      .def_property_readonly("outflow_density", array_property(&TrajectoryRecord::outflow_density))
      .def_readonly("jumps", &TrajectoryRecord::jumps)
      .def_readonly("repair_count", &TrajectoryRecord::repair_count);

  m.def("rate_bound", &rate_bound, py::arg("params"));
  m.def("trajectory_seed", &trajectory_seed, py::arg("master_seed"), py::arg("index"));
  m.def("apply_jump", &apply_jump, py::arg("state"));
  m.def(
      "simulate_trajectory",
      [](const Scenario& s, std::uint64_t seed, std::size_t output_stride, int max_jumps) {
        TrajectoryOptions options;
        options.output_stride = output_stride;
        options.max_jumps = max_jumps;
        py::gil_scoped_release release;
        return simulate_trajectory(s, seed, options);
      },
      py::arg("scenario"), py::arg("seed"), py::arg("output_stride") = 1, py::arg("max_jumps") = -1);
  m.def(
      "first_failure_survival",
      [](const Scenario& s, const std::vector<double>& grid) {
        return to_array(first_failure_survival(s, grid));
      },
      py::arg("scenario"), py::arg("grid"));
}

void bind_ensemble(py::module_& m) {
  py::class_<SeriesEstimate>(m, "SeriesEstimate")
      .def_property_readonly("mean", array_property(&SeriesEstimate::mean))
      .def_property_readonly("std_error", array_property(&SeriesEstimate::std_error));

  py::class_<EnsembleStats>(m, "EnsembleStats")
      .def_property_readonly("sample_times",
                             [](const EnsembleStats& s) { return to_array(s.sample_times); })
      .def_readonly("w", &EnsembleStats::w)
      .def_readonly("capacity", &EnsembleStats::capacity)
      .def_readonly("q", &EnsembleStats::q)
      .def_readonly("outflow_density", &EnsembleStats::outflow_density)
      .def_readonly("n_samples", &EnsembleStats::n_samples)
      .def_readonly("repair_histogram", &EnsembleStats::repair_histogram)
      .def_readonly("mean_repairs", &EnsembleStats::mean_repairs)
      .def_readonly("master_seed", &EnsembleStats::master_seed);

  m.def(
      "run_ensemble",
      [](const Scenario& s, std::size_t n, std::uint64_t master_seed, std::size_t workers,
         std::size_t output_stride) {
        EnsembleOptions options;
        options.workers = workers;
        options.output_stride = output_stride;
        py::gil_scoped_release release;
        return run_ensemble(s, n, master_seed, options);
      },
      py::arg("scenario"), py::arg("n"), py::arg("master_seed") = 0, py::arg("workers") = 1,
      py::arg("output_stride") = 1);
}

void bind_config(py::module_& m) {
  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("scenario", &RunConfig::scenario)
      .def_readwrite("n_samples", &RunConfig::n_samples)
      .def_readwrite("master_seed", &RunConfig::master_seed)
      .def_readwrite("workers", &RunConfig::workers)
      .def_readwrite("output_dir", &RunConfig::output_dir)
      .def_readwrite("output_thinning", &RunConfig::output_thinning)
      .def_readwrite("preset", &RunConfig::preset)
      .def("validate", &RunConfig::validate);

  m.def("preset_names", &preset_names);
  m.def("preset_config", [](const std::string& name) { return preset_config(name); }, py::arg("name"));
  m.def("load_config", &load_config, py::arg("path"));
  m.def(
      "execute",
      [](const RunConfig& config, bool single_trajectory) {
        py::gil_scoped_release release;
        return execute(config, single_trajectory ? RunMode::single_trajectory : RunMode::ensemble);
      },
      py::arg("config"), py::arg("single_trajectory") = false,
      "Writes the CSV/JSON outputs into config.output_dir and returns that path.");
  m.def("version", &version);
}

}  // namespace

PYBIND11_MODULE(_pdmpline, m) {
  m.doc() = "Production line with workload-dependent random machine failures";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<InvariantError>(m, "InvariantError", PyExc_RuntimeError);
  py::register_exception<SampleError>(m, "SampleError", PyExc_RuntimeError);

  bind_model(m);
  bind_flow(m);
  bind_pdmp(m);
  bind_ensemble(m);
  bind_config(m);
}
