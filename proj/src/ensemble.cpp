#include "pdmpline/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <optional>
#include <thread>

#include "pdmpline/errors.hpp"

namespace pdmpline {

void RunningSeries::add(std::span<const double> values) {
  if (count_ == 0 && mean_.empty()) {
    mean_.assign(values.size(), 0.0);
    m2_.assign(values.size(), 0.0);
  }
  if (values.size() != mean_.size()) throw DomainError("RunningSeries: series length mismatch");
  ++count_;
  const double n = static_cast<double>(count_);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double delta = values[i] - mean_[i];
    mean_[i] += delta / n;
    m2_[i] += delta * (values[i] - mean_[i]);
  }
}

void RunningSeries::merge(const RunningSeries& other) {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  if (other.mean_.size() != mean_.size())
    throw DomainError("RunningSeries: series length mismatch");
  const double na = static_cast<double>(count_);
  const double nb = static_cast<double>(other.count_);
  const double n = na + nb;
  for (std::size_t i = 0; i < mean_.size(); ++i) {
    const double delta = other.mean_[i] - mean_[i];
    mean_[i] += delta * (nb / n);
    m2_[i] += other.m2_[i] + delta * delta * (na * nb / n);
  }
  count_ += other.count_;
}

std::vector<double> RunningSeries::standard_error() const {
  std::vector<double> se(mean_.size(), 0.0);
  if (count_ < 2) return se;
  const double n = static_cast<double>(count_);
  for (std::size_t i = 0; i < se.size(); ++i)
    se[i] = std::sqrt(std::max(0.0, m2_[i]) / (n - 1.0) / n);
  return se;
}

void EnsembleAccumulator::add(const TrajectoryRecord& record) {
  if (count() == 0) {
    sample_times_ = record.sample_times;
  } else if (record.sample_times != sample_times_) {
    throw DomainError("EnsembleAccumulator: records must share one sample grid");
  }
  w_.add(record.w);
  capacity_.add(record.capacity);
  q_.add(record.q);
  outflow_density_.add(record.outflow_density);
  ++repair_counts_[record.repair_count];
  repair_total_ += record.repair_count;
}

void EnsembleAccumulator::merge(const EnsembleAccumulator& other) {
  if (other.count() == 0) return;
  if (count() == 0) {
    *this = other;
    return;
  }
  if (other.sample_times_ != sample_times_)
    throw DomainError("EnsembleAccumulator: records must share one sample grid");
  w_.merge(other.w_);
  capacity_.merge(other.capacity_);
  q_.merge(other.q_);
  outflow_density_.merge(other.outflow_density_);
  for (const auto& [k, c] : other.repair_counts_) repair_counts_[k] += c;
  repair_total_ += other.repair_total_;
}

MomentEstimates EnsembleAccumulator::moments() const {
  if (count() == 0) throw DomainError("estimate_moments: no records");
  auto estimate = [](const RunningSeries& s) { return SeriesEstimate{s.mean(), s.standard_error()}; };
  MomentEstimates m;
  m.sample_times = sample_times_;
  m.w = estimate(w_);
  m.capacity = estimate(capacity_);
  m.q = estimate(q_);
  m.outflow_density = estimate(outflow_density_);
  m.n_samples = count();
  return m;
}

std::map<int, double> EnsembleAccumulator::histogram() const {
  if (count() == 0) throw DomainError("repair_count_histogram: no records");
  std::map<int, double> freq;
  const double n = static_cast<double>(count());
  for (const auto& [k, c] : repair_counts_) freq[k] = static_cast<double>(c) / n;
  return freq;
}

EnsembleStats EnsembleAccumulator::finish(std::uint64_t master_seed) const {
  EnsembleStats stats;
  static_cast<MomentEstimates&>(stats) = moments();
  stats.repair_histogram = histogram();
  stats.mean_repairs = static_cast<double>(repair_total_) / static_cast<double>(count());
  stats.master_seed = master_seed;
  return stats;
}

MomentEstimates estimate_moments(std::span<const TrajectoryRecord> records) {
  EnsembleAccumulator acc;
  for (const auto& r : records) acc.add(r);
  return acc.moments();
}

std::map<int, double> repair_count_histogram(std::span<const TrajectoryRecord> records) {
  EnsembleAccumulator acc;
  for (const auto& r : records) acc.add(r);
  return acc.histogram();
}

namespace {

// Chunk boundaries depend on n only, never on the worker count.
std::size_t chunk_size_for(std::size_t n) {
  constexpr std::size_t kMaxChunks = 256;
  constexpr std::size_t kMinChunk = 64;
  return std::max(kMinChunk, (n + kMaxChunks - 1) / kMaxChunks);
}

}  // namespace

EnsembleStats run_ensemble(const Scenario& scenario, std::size_t n, std::uint64_t master_seed,
                           const EnsembleOptions& options) {
  if (n == 0) throw DomainError("run_ensemble: need at least one sample");
  if (options.workers == 0) throw DomainError("run_ensemble: need at least one worker");
  scenario.validate();

  TrajectoryOptions traj = options.trajectory;
  traj.output_stride = options.output_stride;

  const std::size_t chunk = chunk_size_for(n);
  const std::size_t n_chunks = (n + chunk - 1) / chunk;
  std::vector<EnsembleAccumulator> partial(n_chunks);
  std::vector<std::exception_ptr> errors(n_chunks);
  std::atomic<std::size_t> next_chunk{0};
  std::atomic<bool> failed{false};

  auto work = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::size_t c = next_chunk.fetch_add(1);
      if (c >= n_chunks) return;
      const std::size_t begin = c * chunk;
      const std::size_t end = std::min(n, begin + chunk);
      std::size_t i = begin;
      try {
        for (; i < end; ++i)
          partial[c].add(simulate_trajectory(scenario, trajectory_seed(master_seed, i), traj));
      } catch (const std::exception& e) {
        errors[c] = std::make_exception_ptr(SampleError(i, e.what()));
        failed = true;
      }
    }
  };

  const std::size_t n_threads = std::min(options.workers, n_chunks);
  if (n_threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(work);
  }

  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  EnsembleAccumulator total;
  for (const auto& part : partial) total.merge(part);
  return total.finish(master_seed);
}

}  // namespace pdmpline
