#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace pdmpline {

/// Machine status r. The capacity of the processor is mu = r * c.
enum class MachineStatus : std::uint8_t { down = 0, up = 1 };

constexpr double as_factor(MachineStatus r) noexcept {
  return r == MachineStatus::up ? 1.0 : 0.0;
}

constexpr MachineStatus flipped(MachineStatus r) noexcept {
  return r == MachineStatus::up ? MachineStatus::down : MachineStatus::up;
}

/// Physical and hazard parameters of a single queue-processor unit.
struct ModelParams {
  double v = 1.0;  ///< production velocity
  double a = 0.0;  ///< processor inlet
  double b = 1.0;  ///< processor outlet
  double c = 2.0;  ///< maximal capacity
  double lambda_10_min = 0.1;  ///< failure rate of a freshly repaired machine
  double lambda_10_max = 2.0;  ///< failure rate as workload -> infinity
  double theta1 = 0.1;  ///< Weibull scale (inverse workload)
  double theta2 = 5.0;  ///< Weibull shape
  double lambda_01 = 2.0;  ///< repair rate

  double length() const noexcept { return b - a; }
  double capacity(MachineStatus r) const noexcept { return as_factor(r) * c; }

  /// Throws ConfigError naming the first violated constraint.
  void validate() const;
};

/// Piecewise-constant inflow G_in(t). Rate `rates[k]` applies on
/// [starts[k], starts[k+1]); the first piece starts at 0 and the last one
/// extends to infinity.
class InflowProfile {
 public:
  InflowProfile() : InflowProfile(0.0) {}
  explicit InflowProfile(double constant_rate);
  InflowProfile(std::vector<double> starts, std::vector<double> rates);

  double operator()(double t) const noexcept;

  bool is_constant() const noexcept { return rates_.size() == 1; }
  const std::vector<double>& starts() const noexcept { return starts_; }
  const std::vector<double>& rates() const noexcept { return rates_; }

 private:
  std::vector<double> starts_;
  std::vector<double> rates_;
};

/// Element of the PDMP state space at time t: workload since last repair,
/// machine status, queue length and the cell averages of the density on (a,b).
struct SystemState {
  double t = 0.0;
  double w = 0.0;
  MachineStatus r = MachineStatus::up;
  double q = 0.0;
  std::vector<double> rho;

  /// Work in progress, dx * sum(rho).
  double wip(double dx) const noexcept;
  /// Goods in the system, q + wip.
  double mass(double dx) const noexcept { return q + wip(dx); }
  double outlet_density() const noexcept { return rho.empty() ? 0.0 : rho.back(); }
};

/// Rectangle-rule integral dx * sum(rho).
double integrate_cells(std::span<const double> rho, double dx) noexcept;

/// A complete experiment definition.
struct Scenario {
  ModelParams params;
  InflowProfile inflow;
  std::vector<double> rho0;  ///< one value per cell; empty means rho0 == 0
  double q0 = 0.0;
  MachineStatus r0 = MachineStatus::up;
  /// Initial workload. Unset means dx * sum(rho0), the initial WIP.
  std::optional<double> w0;
  double horizon = 50.0;
  double dx = 0.1;
  double dt = 0.1;

  /// Number of cells (b - a) / dx. Throws ConfigError if not a positive integer.
  std::size_t cells() const;
  /// Checks params, CFL (v dt <= dx), the cell count and the initial data.
  void validate() const;
  SystemState initial_state() const;
};

/// Failure rate lambda_10(w): the Weibull CDF in the workload, scaled to
/// [lambda_10_min, lambda_10_max]. Throws DomainError for w < 0.
double failure_rate(double w, const ModelParams& params);

/// Repair rate lambda_01; does not depend on the workload.
double repair_rate(double w, const ModelParams& params) noexcept;

/// Total jump intensity psi in status r: the rate of the single transition
/// r -> 1 - r.
double transition_rate(MachineStatus r, double w, const ModelParams& params);

/// Weibull mean lifetime Gamma(1 + 1/theta2) / theta1, in units of workload.
double mean_time_to_failure(const ModelParams& params);

/// Time at which an intact machine fed with constant inflow is most likely to
/// have failed: Gamma(1 + 1/theta2) / (theta1 * inflow).
double characteristic_failure_time(const ModelParams& params, double inflow);

}  // namespace pdmpline
