#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "pdmpline/model.hpp"
#include "pdmpline/pdmp.hpp"

namespace pdmpline {

/// Pointwise running mean and variance of a vector-valued series (Welford),
/// with the pairwise merge of Chan et al. for combining partial results.
class RunningSeries {
 public:
  RunningSeries() = default;
  explicit RunningSeries(std::size_t length) : mean_(length, 0.0), m2_(length, 0.0) {}

  void add(std::span<const double> values);
  void merge(const RunningSeries& other);

  std::size_t count() const noexcept { return count_; }
  std::size_t length() const noexcept { return mean_.size(); }
  const std::vector<double>& mean() const noexcept { return mean_; }
  /// Standard error of the mean, sqrt(s^2 / n) with the unbiased s^2; 0 for n = 1.
  std::vector<double> standard_error() const;

 private:
  std::size_t count_ = 0;
  std::vector<double> mean_;
  std::vector<double> m2_;
};

struct SeriesEstimate {
  std::vector<double> mean;
  std::vector<double> std_error;
};

struct MomentEstimates {
  std::vector<double> sample_times;
  SeriesEstimate w;
  SeriesEstimate capacity;
  SeriesEstimate q;
  SeriesEstimate outflow_density;
  std::size_t n_samples = 0;
};

struct EnsembleStats : MomentEstimates {
  std::map<int, double> repair_histogram;  ///< repair count -> relative frequency
  double mean_repairs = 0.0;
  std::uint64_t master_seed = 0;
};

/// Streaming aggregate over trajectory records sharing one sample grid.
class EnsembleAccumulator {
 public:
  void add(const TrajectoryRecord& record);
  void merge(const EnsembleAccumulator& other);

  std::size_t count() const noexcept { return w_.count(); }
  MomentEstimates moments() const;
  std::map<int, double> histogram() const;
  EnsembleStats finish(std::uint64_t master_seed) const;

 private:
  std::vector<double> sample_times_;
  RunningSeries w_, capacity_, q_, outflow_density_;
  std::map<int, std::size_t> repair_counts_;
  long long repair_total_ = 0;
};

/// Pointwise means and standard errors of the observables in one pass.
/// Throws DomainError for an empty collection or mismatched grids.
MomentEstimates estimate_moments(std::span<const TrajectoryRecord> records);

/// Relative frequency of each observed repair count.
std::map<int, double> repair_count_histogram(std::span<const TrajectoryRecord> records);

struct EnsembleOptions {
  std::size_t workers = 1;
  std::size_t output_stride = 1;
  TrajectoryOptions trajectory;  ///< output_stride here is overridden
};

/// Runs n trajectories with seeds trajectory_seed(master_seed, i). Samples are
/// reduced in fixed index-ordered chunks, so the result is bit-identical for
/// any worker count. A failing sample is rethrown as SampleError.
EnsembleStats run_ensemble(const Scenario& scenario, std::size_t n, std::uint64_t master_seed,
                           const EnsembleOptions& options = {});

}  // namespace pdmpline
