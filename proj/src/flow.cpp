#include "pdmpline/flow.hpp"

#include <algorithm>
#include <cmath>

#include "pdmpline/errors.hpp"

namespace pdmpline {

QueueStep queue_step(double q, double inflow, double capacity, double dt) {
  if (!(q >= 0.0) || !(inflow >= 0.0) || !(capacity >= 0.0) || !(dt > 0.0))
    throw DomainError("queue_step: requires q, G_in, mu >= 0 and dt > 0");
  const double drain_limit = inflow + q / dt;
  if (capacity >= drain_limit) return {0.0, drain_limit};
  return {std::max(0.0, q + dt * (inflow - capacity)), capacity};
}

double upwind_step(std::span<double> rho, double capacity, double g_out,
                   const ModelParams& params, double dt, double dx) {
  if (params.v * dt > dx) throw ConfigError("CFL condition v * dt <= dx violated", "dt");
  const double ratio = dt / dx;
  double left_flux = g_out;
  for (double& cell : rho) {
    const double old = cell;
    const double right_flux = std::min(params.v * old, capacity);
    double updated = old + ratio * (left_flux - right_flux);
    if (updated < 0.0) {
      // v dt / dx may round to one ulp above 1 when v != 1
      if (updated < -1e-14 * std::max(1.0, old))
        throw InvariantError("upwind_step: negative density");
      updated = 0.0;
    }
    cell = updated;
    left_flux = right_flux;
  }
  return left_flux;
}

double workload_step(double w, MachineStatus r, std::span<const double> rho, double dx,
                     double dt) {
  if (r == MachineStatus::down) return w;
  return w + dt * integrate_cells(rho, dx);
}

FlowStepReport flow_step(SystemState& state, double h, const Scenario& scenario) {
  const ModelParams& p = scenario.params;
  const double dx = scenario.dx;
  const double capacity = p.capacity(state.r);

  FlowStepReport report;
  report.t = state.t;
  report.dt = h;
  report.inflow = scenario.inflow(state.t);

  const double mass_before = state.mass(dx);
  const double w_next = workload_step(state.w, state.r, state.rho, dx, h);
  const QueueStep queue = queue_step(state.q, report.inflow, capacity, h);
  report.g_out = queue.g_out;
  report.out_flux = upwind_step(state.rho, capacity, queue.g_out, p, h, dx);
  state.q = queue.q;
  state.w = w_next;
  state.t += h;

  report.mass = state.mass(dx);
  report.mass_balance_residual =
      std::abs((report.mass - mass_before) - h * (report.inflow - report.out_flux));
  return report;
}

void flow_advance(SystemState& state, double t_target, const Scenario& scenario,
                  std::vector<FlowStepReport>* reports) {
  if (t_target < state.t) throw DomainError("flow_advance: target time lies in the past");
  const double dt = scenario.dt;
  // Remainders below this are rounding noise of the time grid, not real steps.
  const double snap = 1e-9 * dt;
  while (t_target - state.t > snap) {
    const double h = std::min(dt, t_target - state.t);
    FlowStepReport report = flow_step(state, h, scenario);
    if (reports) reports->push_back(report);
  }
  state.t = t_target;
}

}  // namespace pdmpline
