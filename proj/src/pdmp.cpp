#include "pdmpline/pdmp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pdmpline/errors.hpp"
#include "pdmpline/flow.hpp"

namespace pdmpline {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 make_engine(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) : engine_(make_engine(seed)) {}

double RandomStream::uniform() {
  return (static_cast<double>(engine_() >> 12) + 0.5) * 0x1p-52;
}

std::uint64_t trajectory_seed(std::uint64_t master_seed, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(master_seed) ^ index);
}

double rate_bound(const ModelParams& params) noexcept {
  return std::max(params.lambda_10_max, params.lambda_01);
}

double exponential_from_uniform(double u, double rate) {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("exponential_from_uniform: u must lie in (0, 1)");
  if (!(rate > 0.0)) throw DomainError("exponential_from_uniform: rate must be > 0");
  return -std::log(u) / rate;
}

double propose_next_candidate(double t, double bound, RandomStream& rng) {
  const double next = t + exponential_from_uniform(rng.uniform(), bound);
  return next > t ? next : std::nextafter(t, kInf);
}

bool accept_candidate(const SystemState& state, const ModelParams& params, double bound,
                      RandomStream& rng) {
  if (!(bound > 0.0)) throw DomainError("accept_candidate: rate bound must be > 0");
  const double psi = transition_rate(state.r, state.w, params);
  if (psi > bound) throw InvariantError("accept_candidate: intensity exceeds the rate bound");
  return rng.uniform() * bound < psi;
}

SystemState apply_jump(SystemState state) {
  if (state.r == MachineStatus::down) state.w = 0.0;
  state.r = flipped(state.r);
  return state;
}

std::vector<double> sample_grid(const Scenario& scenario, std::size_t stride) {
  if (stride == 0) throw ConfigError("output stride must be >= 1", "run.output_thinning");
  const double step = static_cast<double>(stride) * scenario.dt;
  const auto count = static_cast<std::size_t>(std::floor(scenario.horizon / step + 1e-9)) + 1;
  std::vector<double> times(count);
  for (std::size_t k = 0; k < count; ++k) times[k] = static_cast<double>(k) * step;
  return times;
}

TrajectoryRecord simulate_trajectory(const Scenario& scenario, std::uint64_t seed,
                                     const TrajectoryOptions& options) {
  scenario.validate();
  const ModelParams& p = scenario.params;
  const double horizon = scenario.horizon;

  TrajectoryRecord rec;
  rec.sample_times = sample_grid(scenario, options.output_stride);
  const std::size_t n = rec.sample_times.size();
  rec.w.reserve(n);
  rec.capacity.reserve(n);
  rec.q.reserve(n);
  rec.outflow_density.reserve(n);

  SystemState state = scenario.initial_state();
  RandomStream rng(seed);
  const double bound = rate_bound(p);
  int jumps_left = options.max_jumps;
  auto next_candidate = [&](double t) {
    return (bound > 0.0 && jumps_left != 0) ? propose_next_candidate(t, bound, rng) : kInf;
  };

  double candidate = next_candidate(0.0);
  std::size_t k = 0;
  while (true) {
    const double next_sample = k < n ? rec.sample_times[k] : kInf;
    if (std::min(candidate, next_sample) > horizon) break;

    if (candidate <= next_sample) {
      flow_advance(state, candidate, scenario);
      if (accept_candidate(state, p, bound, rng)) {
        const double w_before = state.w;
        state = apply_jump(std::move(state));
        const JumpKind kind = state.r == MachineStatus::up ? JumpKind::repair : JumpKind::failure;
        if (kind == JumpKind::repair) ++rec.repair_count;
        rec.jumps.push_back({state.t, kind, w_before, state.w, state.r, state.q,
                             state.mass(scenario.dx)});
        if (jumps_left > 0) --jumps_left;
      }
      candidate = next_candidate(candidate);
      continue;
    }

    flow_advance(state, next_sample, scenario);
    rec.w.push_back(state.w);
    rec.capacity.push_back(p.capacity(state.r));
    rec.q.push_back(state.q);
    rec.outflow_density.push_back(state.outlet_density());
    ++k;
  }
  return rec;
}

std::vector<double> first_failure_survival(const Scenario& scenario,
                                           std::span<const double> grid) {
  scenario.validate();
  if (scenario.r0 != MachineStatus::up)
    throw DomainError("first_failure_survival: machine must start up");
  const ModelParams& p = scenario.params;
  const double dt = scenario.dt;

  SystemState state = scenario.initial_state();
  double hazard = failure_rate(state.w, p);
  double cumulative = 0.0;
  std::vector<double> survival;
  survival.reserve(grid.size());
  double previous = 0.0;
  for (double target : grid) {
    if (target < previous || target < 0.0)
      throw DomainError("first_failure_survival: grid must be non-decreasing and >= 0");
    previous = target;
    while (state.t < target) {
      const double next_step = (std::floor(state.t / dt + 1e-9) + 1.0) * dt;
      const double until = std::min(target, next_step);
      const double t0 = state.t;
      flow_advance(state, until, scenario);
      const double next_hazard = failure_rate(state.w, p);
      cumulative += 0.5 * (hazard + next_hazard) * (until - t0);
      hazard = next_hazard;
    }
    survival.push_back(std::exp(-cumulative));
  }
  return survival;
}

}  // namespace pdmpline
