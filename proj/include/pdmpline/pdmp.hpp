#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "pdmpline/model.hpp"

namespace pdmpline {

/// Per-trajectory random stream. Seeded through std::seed_seq so that streams
/// for neighbouring seeds are decorrelated.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  /// Uniform on the open interval (0, 1), 52 random bits.
  double uniform();

 private:
  std::mt19937_64 engine_;
};

/// Seed of sample `index` in an ensemble with the given master seed
/// (splitmix64 finalizer over both words). Independent of scheduling.
std::uint64_t trajectory_seed(std::uint64_t master_seed, std::uint64_t index) noexcept;

/// Dominating rate for thinning: max(lambda_10_max, lambda_01).
double rate_bound(const ModelParams& params) noexcept;

/// Inverse transform of a uniform u in (0, 1) to an Exp(rate) variate.
double exponential_from_uniform(double u, double rate);

/// t + E with E ~ Exp(bound); strictly greater than t.
double propose_next_candidate(double t, double bound, RandomStream& rng);

/// Thinning test at a candidate time: accept with probability psi / bound,
/// psi being the current transition intensity. Throws InvariantError if
/// psi > bound.
bool accept_candidate(const SystemState& state, const ModelParams& params, double bound,
                      RandomStream& rng);

/// Jump kernel: failure keeps w, repair resets w to 0; q and rho untouched.
SystemState apply_jump(SystemState state);

enum class JumpKind : std::uint8_t { failure, repair };

struct JumpEvent {
  double time = 0.0;
  JumpKind kind = JumpKind::failure;
  double w_before = 0.0;
  double w_after = 0.0;
  MachineStatus r_after = MachineStatus::down;
  double q_after = 0.0;
  double mass_after = 0.0;
};

/// One sample path on [0, T], observed on sample_times.
struct TrajectoryRecord {
  std::vector<double> sample_times;
  std::vector<double> w;
  std::vector<double> capacity;
  std::vector<double> q;
  std::vector<double> outflow_density;  ///< density in the last cell, x = b
  std::vector<JumpEvent> jumps;
  int repair_count = 0;
};

/// Output grid k * stride * dt for k = 0, 1, ... while <= T.
std::vector<double> sample_grid(const Scenario& scenario, std::size_t stride = 1);

struct TrajectoryOptions {
  std::size_t output_stride = 1;
  /// Stop proposing jumps after this many accepted ones (negative: no limit).
  /// The flow still runs to the horizon.
  int max_jumps = -1;
};

/// Simulates one PDMP path by thinning: candidates from an Exp(bound) clock
/// are handled one at a time; the flow is advanced to each candidate, which
/// is accepted with probability psi / bound. Observables at a sample time
/// that coincides with a jump hold the post-jump state. Deterministic in
/// (scenario, seed).
TrajectoryRecord simulate_trajectory(const Scenario& scenario, std::uint64_t seed,
                                     const TrajectoryOptions& options = {});

/// Survival function of the first failure, exp(-int_0^t lambda_10(w(s)) ds),
/// along the jump-free flow from the scenario's initial state (r0 must be up).
/// The hazard integral uses the trapezoidal rule on the dt steps. `grid`
/// must be non-decreasing and non-negative.
std::vector<double> first_failure_survival(const Scenario& scenario,
                                           std::span<const double> grid);

}  // namespace pdmpline
