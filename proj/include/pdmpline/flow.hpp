#pragma once

#include <span>
#include <vector>

#include "pdmpline/model.hpp"

namespace pdmpline {

struct QueueStep {
  double q = 0.0;      ///< queue length after the step
  double g_out = 0.0;  ///< realized outflow into the processor
};

/// Explicit Euler step of the queue. The outflow is min(mu, G_in) for an
/// empty queue; otherwise the queue drains at capacity, but never by more than
/// it holds, so g_out = min(mu, G_in + q / dt) and q_new >= 0.
QueueStep queue_step(double q, double inflow, double capacity, double dt);

/// First-order upwind update of the cell averages, in place. Flux through the
/// right face of cell i is min(v * rho_i, mu); the inlet flux is g_out.
/// Returns the flux leaving the processor at x = b.
double upwind_step(std::span<double> rho, double capacity, double g_out,
                   const ModelParams& params, double dt, double dx);

/// w + dt * r * dx * sum(rho).
double workload_step(double w, MachineStatus r, std::span<const double> rho, double dx,
                     double dt);

struct FlowStepReport {
  double t = 0.0;   ///< start of the step
  double dt = 0.0;  ///< step length, shorter than the scenario dt for partial steps
  double inflow = 0.0;
  double g_out = 0.0;
  double out_flux = 0.0;
  /// |delta(q + dx sum rho) - dt (G_in - out_flux)|
  double mass_balance_residual = 0.0;
  double mass = 0.0;  ///< q + dx sum rho after the step
};

/// One deterministic step of length h <= scenario.dt with mu = r c, in the
/// order: outflow from the pre-step queue, density with inlet flux g_out,
/// then queue and workload (rectangle rule on the pre-step density).
FlowStepReport flow_step(SystemState& state, double h, const Scenario& scenario);

/// Deterministic flow from state.t to t_target with r frozen: full steps of
/// scenario.dt and one shortened final step. Appends one report per step when
/// `reports` is given.
void flow_advance(SystemState& state, double t_target, const Scenario& scenario,
                  std::vector<FlowStepReport>* reports = nullptr);

}  // namespace pdmpline
