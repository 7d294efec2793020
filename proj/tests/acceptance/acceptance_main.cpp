// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "pdmpline/config.hpp"
#include "pdmpline/ensemble.hpp"
#include "pdmpline/flow.hpp"
#include "pdmpline/model.hpp"
#include "pdmpline/pdmp.hpp"
#include "support/oracles.hpp"
#include "support/random_scenarios.hpp"

namespace {

using namespace pdmpline;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::size_t worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

Scenario preset(const char* name) { return preset_config(name).scenario; }

// 1. Jump-free line fed with 0.5: after t > (b - a) / v the line is uniformly
//    filled at 0.5, the queue is empty and the outflux equals the inflow.
Outcome deterministic_correctness() {
  const auto start = std::chrono::steady_clock::now();
  Scenario s = preset("paper-g1");
  s.params.lambda_10_min = s.params.lambda_10_max = s.params.lambda_01 = 0.0;
  const double transient = s.params.length() / s.params.v;

  SystemState state = s.initial_state();
  std::vector<FlowStepReport> reports;
  flow_advance(state, s.horizon, s, &reports);
  double rho_err = 0.0, flux_err = 0.0, q_max = 0.0;
  SystemState replay = s.initial_state();
  for (double t : sample_grid(s)) {
    flow_advance(replay, t, s);
    if (t <= transient + 1e-9) continue;
    for (double r : replay.rho) rho_err = std::max(rho_err, std::abs(r - 0.5));
    q_max = std::max(q_max, replay.q);
  }
  for (const auto& rep : reports)
    if (rep.t > transient + 1e-9) flux_err = std::max(flux_err, std::abs(rep.out_flux - 0.5));

  const TrajectoryRecord rec = simulate_trajectory(s, 1);
  double outlet_err = 0.0;
  for (std::size_t k = 0; k < rec.sample_times.size(); ++k)
    if (rec.sample_times[k] > transient + 1e-9)
      outlet_err = std::max(outlet_err, std::abs(rec.outflow_density[k] - 0.5));

  const double elapsed = seconds_since(start);
  const bool pass = rho_err <= 1e-10 && flux_err <= 1e-10 && q_max == 0.0 && outlet_err <= 1e-10 &&
                    rec.jumps.empty() && elapsed < 1.0;
  return {pass, fmt("max|rho-0.5|=%.2e max|outflux-0.5|=%.2e max q=%.2e jumps=%zu (%.3fs < 1s)",
                    rho_err, flux_err, q_max, rec.jumps.size(), elapsed)};
}

// 2. Per-step discrete mass balance on 100 random scenarios with random
//    status schedules.
Outcome mass_balance() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 gen(20190101);
  double worst = 0.0;
  std::size_t steps = 0;
  bool negative = false;
  for (int trial = 0; trial < 100; ++trial) {
    const Scenario s = test::random_scenario(gen);
    SystemState state = s.initial_state();
    std::vector<FlowStepReport> reports;
    auto segment = [&](double until) {
      flow_advance(state, until, s, &reports);
      negative |= state.q < 0.0 || std::any_of(state.rho.begin(), state.rho.end(),
                                               [](double r) { return r < 0.0; });
    };
    for (double t : test::random_switch_times(gen, s.horizon)) {
      segment(t);
      state.r = flipped(state.r);
    }
    segment(s.horizon);
    for (const auto& rep : reports)
      worst = std::max(worst, rep.mass_balance_residual / std::max(1.0, rep.mass));
    steps += reports.size();
  }
  const double elapsed = seconds_since(start);
  const bool pass = worst <= 1e-12 && !negative && elapsed < 10.0;
  return {pass, fmt("worst residual/max(1,mass)=%.2e over %zu steps, positivity %s (%.2fs < 10s)", worst,
                    steps, negative ? "violated" : "held", elapsed)};
}

// 3. Constant hazard: up and down durations are Exp(2).
Outcome thinning_exactness() {
  const auto start = std::chrono::steady_clock::now();
  Scenario s = preset("paper-g2");
  s.params.lambda_10_min = s.params.lambda_10_max = s.params.lambda_01 = 2.0;
  const std::size_t wanted = 10000;
  std::vector<double> up, down;
  // periods starting before T - 10 end before T except with probability e^-20
  for (std::uint64_t i = 0; up.size() < wanted || down.size() < wanted; ++i) {
    const TrajectoryRecord rec = simulate_trajectory(s, trajectory_seed(303, i));
    double begin = 0.0;
    MachineStatus status = s.r0;
    for (const JumpEvent& j : rec.jumps) {
      auto& bucket = status == MachineStatus::up ? up : down;
      if (begin < s.horizon - 10.0 && bucket.size() < wanted) bucket.push_back(j.time - begin);
      begin = j.time;
      status = j.r_after;
    }
  }
  const auto cdf = [](double x) { return test::exponential_cdf(x, 2.0); };
  const double d_up = test::ks_statistic(up, cdf);
  const double d_down = test::ks_statistic(down, cdf);
  const double crit = test::ks_critical_1pct(wanted);
  const double elapsed = seconds_since(start);
  const bool pass = d_up < crit && d_down < crit && elapsed < 30.0;
  return {pass, fmt("KS up=%.4f down=%.4f, 1%% critical=%.4f, n=%zu each (%.2fs < 30s)", d_up, d_down,
                    crit, wanted, elapsed)};
}

// 4. First failure of preset g2 (no repairs) against the survival oracle.
Outcome survival_oracle() {
  const auto start = std::chrono::steady_clock::now();
  Scenario s = preset("paper-g2");
  s.params.lambda_01 = 0.0;
  const std::size_t n = 10000;
  std::vector<double> first;
  first.reserve(n);
  std::size_t censored = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const TrajectoryRecord rec = simulate_trajectory(s, trajectory_seed(404, i));
    if (rec.jumps.empty()) {
      ++censored;
    } else {
      first.push_back(rec.jumps.front().time);
    }
  }
  std::sort(first.begin(), first.end());
  const auto survival = first_failure_survival(s, first);
  double d = 0.0;
  const double total = static_cast<double>(n);
  for (std::size_t i = 0; i < first.size(); ++i) {
    const double model_cdf = 1.0 - survival[i];
    d = std::max({d, static_cast<double>(i + 1) / total - model_cdf,
                  model_cdf - static_cast<double>(i) / total});
  }
  const double elapsed = seconds_since(start);
  const bool pass = d <= 0.03 && elapsed < 60.0;
  return {pass, fmt("KS distance=%.4f <= 0.03, n=%zu, censored=%zu (%.2fs < 60s)", d, n, censored, elapsed)};
}

struct PaperRuns {
  EnsembleStats g1, g2;
  double seconds_g1 = 0.0, seconds_g2 = 0.0;
};

PaperRuns run_paper_ensembles() {
  PaperRuns runs;
  EnsembleOptions options;
  options.workers = worker_count();
  auto start = std::chrono::steady_clock::now();
  runs.g1 = run_ensemble(preset("paper-g1"), 10000, 2019, options);
  runs.seconds_g1 = seconds_since(start);
  start = std::chrono::steady_clock::now();
  runs.g2 = run_ensemble(preset("paper-g2"), 10000, 2019, options);
  runs.seconds_g2 = seconds_since(start);
  return runs;
}

// Argmin of the 0.5-wide moving average of E[mu] over [lo, hi]; the minimum
// must be attained strictly inside the window.
struct Dip {
  double t = 0.0;
  bool interior = false;
};

Dip capacity_dip(const EnsembleStats& stats, double lo, double hi) {
  const auto smooth = test::moving_average(stats.sample_times, stats.capacity.mean, 0.25);
  std::size_t first = stats.sample_times.size(), last = 0, best = 0;
  for (std::size_t k = 0; k < stats.sample_times.size(); ++k) {
    const double t = stats.sample_times[k];
    if (t < lo - 1e-9 || t > hi + 1e-9) continue;
    first = std::min(first, k);
    last = k;
    if (first == k || smooth[k] < smooth[best]) best = k;
  }
  return {stats.sample_times[best], best != first && best != last};
}

// 5. Characteristic-time dips of the smoothed expected capacity.
Outcome characteristic_dips(const PaperRuns& runs) {
  const Dip g1 = capacity_dip(runs.g1, 16.9, 19.9);
  const Dip g2 = capacity_dip(runs.g2, 4.6, 7.6);
  const bool pass = g1.interior && g2.interior && runs.seconds_g1 < 300.0 && runs.seconds_g2 < 300.0;
  return {pass, fmt("g1 local min at t=%.1f in [16.9,19.9]%s, g2 at t=%.1f in [4.6,7.6]%s, n=10^4 "
                    "(%.2fs, %.2fs < 300s)",
                    g1.t, g1.interior ? "" : " (boundary)", g2.t, g2.interior ? "" : " (boundary)",
                    runs.seconds_g1, runs.seconds_g2)};
}

int mode_of(const std::map<int, double>& hist) {
  return std::max_element(hist.begin(), hist.end(),
                          [](const auto& a, const auto& b) { return a.second < b.second; })
      ->first;
}

// 6. Repair-count modes and the ordering of the mean repair counts.
Outcome repair_modes(const PaperRuns& runs) {
  const int m1 = mode_of(runs.g1.repair_histogram);
  const int m2 = mode_of(runs.g2.repair_histogram);
  const bool pass = m1 >= 5 && m1 <= 9 && m2 >= 9 && m2 <= 14 && runs.g2.mean_repairs > runs.g1.mean_repairs;
  return {pass, fmt("g1 mode=%d in [5,9], g2 mode=%d in [9,14], mean repairs g1=%.3f < g2=%.3f", m1, m2,
                    runs.g1.mean_repairs, runs.g2.mean_repairs)};
}

// 7. Weibull mean lifetime.
Outcome mttf_check() {
  ModelParams p;
  p.theta1 = 0.1;
  p.theta2 = 5.0;
  const double err = std::abs(mean_time_to_failure(p) - test::kGamma12Times10);
  p.theta2 = 1.0;
  const double exp_err = std::abs(mean_time_to_failure(p) * p.theta1 - 1.0);
  return {err <= 1e-6 && exp_err <= 1e-12,
          fmt("|MTTF - 10 Gamma(1.2)|=%.2e <= 1e-6, |theta1 MTTF(theta2=1) - 1|=%.2e <= 1e-12", err, exp_err)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 8. CLI outputs are byte-identical for 1, 4 and 8 workers.
Outcome reproducibility() {
  const fs::path root = fs::temp_directory_path() / "pdmpline_acceptance_repro";
  fs::remove_all(root);
  std::vector<std::string> moments, histograms;
  for (int workers : {1, 4, 8}) {
    const fs::path out = root / std::to_string(workers);
    const std::string cmd = std::string(PDMPLINE_CLI_PATH) + " --preset paper-g2 --samples 2000 --seed 8 --workers " +
                            std::to_string(workers) + " --out " + out.string() + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) return {false, "CLI run failed"};
    moments.push_back(slurp(out / "moments.csv"));
    histograms.push_back(slurp(out / "histogram.csv"));
  }
  fs::remove_all(root);
  const bool same = moments[0] == moments[1] && moments[0] == moments[2] && histograms[0] == histograms[1] &&
                    histograms[0] == histograms[2] && !moments[0].empty();
  return {same, fmt("moments.csv (%zu bytes) and histogram.csv identical across workers {1,4,8}: %s",
                    moments[0].size(), same ? "yes" : "no")};
}

// 9. Short-time flip probability: P(r(t+D) != r(t)) = D lambda_{r,1-r}(w) + o(D).
struct FlipFit {
  double slope = 0.0;
  double intercept = 0.0;
};

FlipFit flip_regression(const SystemState& at, const Scenario& base, std::uint64_t master) {
  Scenario s = base;
  s.rho0 = at.rho;
  s.q0 = at.q;
  s.r0 = at.r;
  s.w0 = at.w;
  const double rate = transition_rate(at.r, at.w, s.params);
  const std::size_t reps = 200000;
  std::vector<double> x, y;
  for (double delta : {0.02, 0.01, 0.005}) {
    s.horizon = delta;
    std::size_t flips = 0;
    for (std::uint64_t i = 0; i < reps; ++i)
      flips += simulate_trajectory(s, trajectory_seed(master, i)).jumps.size() % 2;
    x.push_back(delta * rate);
    y.push_back(static_cast<double>(flips) / static_cast<double>(reps));
  }
  const auto fit = test::fit_line(x, y);
  return {fit.slope, fit.intercept};
}

Outcome small_delta_flips() {
  Scenario s = preset("paper-g2");
  // state of an intact machine after 6 time units of jump-free production
  SystemState up = s.initial_state();
  flow_advance(up, 6.0, s);
  up.t = 0.0;
  SystemState down = up;
  down.r = MachineStatus::down;
  const FlipFit fu = flip_regression(up, s, 901);
  const FlipFit fd = flip_regression(down, s, 902);
  const bool pass = std::abs(fu.slope - 1.0) <= 0.1 && std::abs(fd.slope - 1.0) <= 0.1;
  return {pass, fmt("slope up (w=%.2f, rate %.3f)=%.3f intercept=%.1e; slope down (rate %.3f)=%.3f "
                    "intercept=%.1e; required 1 +- 0.1",
                    up.w, failure_rate(up.w, s.params), fu.slope, fu.intercept, s.params.lambda_01, fd.slope,
                    fd.intercept)};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const char* name, const Outcome& o) {
    std::printf("[%s] AC%d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  };
  auto guarded = [](const std::function<Outcome()>& f) {
    try {
      return f();
    } catch (const std::exception& e) {
      return Outcome{false, std::string("exception: ") + e.what()};
    }
  };

  report(1, "deterministic correctness", guarded(deterministic_correctness));
  report(2, "mass balance", guarded(mass_balance));
  report(3, "thinning exactness", guarded(thinning_exactness));
  report(4, "survival-oracle agreement", guarded(survival_oracle));
  PaperRuns runs;
  std::string paper_error;
  try {
    runs = run_paper_ensembles();
  } catch (const std::exception& e) {
    paper_error = e.what();
  }
  if (paper_error.empty()) {
    report(5, "characteristic-time dips", guarded([&] { return characteristic_dips(runs); }));
    report(6, "repair-count modes", guarded([&] { return repair_modes(runs); }));
  } else {
    report(5, "characteristic-time dips", {false, "ensemble failed: " + paper_error});
    report(6, "repair-count modes", {false, "ensemble failed: " + paper_error});
  }
  report(7, "MTTF unit check", guarded(mttf_check));
  report(8, "reproducibility", guarded(reproducibility));
  report(9, "small-interval flip rate", guarded(small_delta_flips));

  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
