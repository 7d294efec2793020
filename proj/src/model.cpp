#include "pdmpline/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pdmpline/errors.hpp"

namespace pdmpline {

namespace {

void require(bool ok, const char* key, const std::string& message) {
  if (!ok) throw ConfigError(message, key);
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

void ModelParams::validate() const {
  require(finite(v) && v > 0.0, "model.v", "production velocity must be > 0");
  require(finite(a) && finite(b) && b > a, "model.b", "processor requires a < b");
  require(finite(c) && c > 0.0, "model.c", "capacity must be > 0");
  require(finite(lambda_10_min) && lambda_10_min >= 0.0, "model.lambda_10_min",
          "failure rate bound must be >= 0");
  require(finite(lambda_10_max) && lambda_10_max >= lambda_10_min, "model.lambda_10_max",
          "requires lambda_10_min <= lambda_10_max");
  require(finite(theta1) && theta1 > 0.0, "model.theta1", "Weibull scale must be > 0");
  require(finite(theta2) && theta2 > 0.0, "model.theta2", "Weibull shape must be > 0");
  require(finite(lambda_01) && lambda_01 >= 0.0, "model.lambda_01", "repair rate must be >= 0");
}

InflowProfile::InflowProfile(double constant_rate)
    : InflowProfile(std::vector<double>{0.0}, std::vector<double>{constant_rate}) {}

InflowProfile::InflowProfile(std::vector<double> starts, std::vector<double> rates)
    : starts_(std::move(starts)), rates_(std::move(rates)) {
  if (starts_.empty() || starts_.size() != rates_.size())
    throw ConfigError("inflow needs one rate per breakpoint", "inflow");
  if (starts_.front() != 0.0) throw ConfigError("first breakpoint must be 0", "inflow.times");
  for (std::size_t k = 1; k < starts_.size(); ++k)
    if (!(starts_[k] > starts_[k - 1]))
      throw ConfigError("breakpoints must be strictly increasing", "inflow.times");
  for (double g : rates_)
    if (!finite(g) || g < 0.0) throw ConfigError("inflow rates must be >= 0", "inflow.rates");
}

double InflowProfile::operator()(double t) const noexcept {
  auto it = std::upper_bound(starts_.begin(), starts_.end(), t);
  if (it == starts_.begin()) return rates_.front();
  return rates_[static_cast<std::size_t>(it - starts_.begin()) - 1];
}

double integrate_cells(std::span<const double> rho, double dx) noexcept {
  return dx * std::accumulate(rho.begin(), rho.end(), 0.0);
}

double SystemState::wip(double dx) const noexcept { return integrate_cells(rho, dx); }

std::size_t Scenario::cells() const {
  require(finite(dx) && dx > 0.0, "dx", "spatial step must be > 0");
  const double ratio = params.length() / dx;
  const double n = std::round(ratio);
  require(n >= 1.0 && std::abs(ratio - n) <= 1e-9 * n, "dx",
          "(b - a) / dx must be a positive integer");
  return static_cast<std::size_t>(n);
}

void Scenario::validate() const {
  params.validate();
  const std::size_t n = cells();
  require(finite(dt) && dt > 0.0, "dt", "time step must be > 0");
  require(params.v * dt <= dx, "dt", "CFL condition v * dt <= dx violated");
  require(finite(horizon) && horizon > 0.0, "horizon", "horizon must be > 0");
  require(rho0.empty() || rho0.size() == n, "initial.rho0",
          "initial density needs " + std::to_string(n) + " cells");
  for (double x : rho0) require(finite(x) && x >= 0.0, "initial.rho0", "density must be >= 0");
  require(finite(q0) && q0 >= 0.0, "initial.q0", "queue length must be >= 0");
  if (w0) require(finite(*w0) && *w0 >= 0.0, "initial.w0", "workload must be >= 0");
}

SystemState Scenario::initial_state() const {
  SystemState s;
  s.t = 0.0;
  s.r = r0;
  s.q = q0;
  s.rho = rho0.empty() ? std::vector<double>(cells(), 0.0) : rho0;
  s.w = w0 ? *w0 : s.wip(dx);
  return s;
}

double failure_rate(double w, const ModelParams& p) {
  if (!(w >= 0.0)) throw DomainError("failure_rate: workload must be >= 0");
  const double weibull_cdf = -std::expm1(-std::pow(p.theta1 * w, p.theta2));
  const double rate = p.lambda_10_min + (p.lambda_10_max - p.lambda_10_min) * weibull_cdf;
  return std::clamp(rate, p.lambda_10_min, p.lambda_10_max);
}

double repair_rate(double /*w*/, const ModelParams& p) noexcept { return p.lambda_01; }

double transition_rate(MachineStatus r, double w, const ModelParams& p) {
  return r == MachineStatus::up ? failure_rate(w, p) : repair_rate(w, p);
}

double mean_time_to_failure(const ModelParams& p) {
  if (!(p.theta1 > 0.0) || !(p.theta2 > 0.0))
    throw DomainError("mean_time_to_failure: theta1 and theta2 must be > 0");
  return std::tgamma(1.0 + 1.0 / p.theta2) / p.theta1;
}

double characteristic_failure_time(const ModelParams& p, double inflow) {
  if (!(inflow > 0.0)) throw DomainError("characteristic_failure_time: inflow must be > 0");
  return mean_time_to_failure(p) / inflow;
}

}  // namespace pdmpline
