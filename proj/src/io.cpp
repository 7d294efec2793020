#include "pdmpline/io.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#ifndef PDMPLINE_VERSION
#define PDMPLINE_VERSION "0.0.0"
#endif

namespace pdmpline {

namespace {

void write_file(const std::filesystem::path& path, auto&& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  writer(out);
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

const char* kind_name(JumpKind kind) { return kind == JumpKind::repair ? "repair" : "failure"; }

}  // namespace

std::string version() { return PDMPLINE_VERSION; }

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_moments_csv(std::ostream& out, const MomentEstimates& m) {
  out << "t,mean_w,se_w,mean_capacity,se_capacity,mean_q,se_q,mean_rho_b,se_rho_b\n";
  for (std::size_t i = 0; i < m.sample_times.size(); ++i) {
    out << format_double(m.sample_times[i]);
    for (const SeriesEstimate* s : {&m.w, &m.capacity, &m.q, &m.outflow_density})
      out << ',' << format_double(s->mean[i]) << ',' << format_double(s->std_error[i]);
    out << '\n';
  }
}

void write_histogram_csv(std::ostream& out, const std::map<int, double>& histogram) {
  out << "repairs,frequency\n";
  for (const auto& [k, f] : histogram) out << k << ',' << format_double(f) << '\n';
}

void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& rec, double c) {
  out << "t,w,r,capacity,q,rho_b\n";
  for (std::size_t i = 0; i < rec.sample_times.size(); ++i) {
    out << format_double(rec.sample_times[i]) << ',' << format_double(rec.w[i]) << ','
        << (rec.capacity[i] == c ? 1 : 0) << ',' << format_double(rec.capacity[i]) << ','
        << format_double(rec.q[i]) << ',' << format_double(rec.outflow_density[i]) << '\n';
  }
}

void write_jumps_csv(std::ostream& out, const TrajectoryRecord& rec) {
  out << "time,kind,w_before,w_after,r_after,q_after,mass_after\n";
  for (const JumpEvent& j : rec.jumps) {
    out << format_double(j.time) << ',' << kind_name(j.kind) << ',' << format_double(j.w_before)
        << ',' << format_double(j.w_after) << ',' << (j.r_after == MachineStatus::up ? 1 : 0)
        << ',' << format_double(j.q_after) << ',' << format_double(j.mass_after) << '\n';
  }
}

std::filesystem::path execute(const RunConfig& config, RunMode mode) {
  config.validate();
  const std::filesystem::path dir(config.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create '" + dir.string() + "': " + ec.message());

  const auto start = std::chrono::steady_clock::now();
  nlohmann::json info;
  if (mode == RunMode::ensemble) {
    EnsembleOptions options;
    options.workers = config.workers;
    options.output_stride = config.output_thinning;
    const EnsembleStats stats =
        run_ensemble(config.scenario, config.n_samples, config.master_seed, options);
    write_file(dir / "moments.csv", [&](std::ostream& o) { write_moments_csv(o, stats); });
    write_file(dir / "histogram.csv",
               [&](std::ostream& o) { write_histogram_csv(o, stats.repair_histogram); });
    info["mode"] = "ensemble";
    info["mean_repairs"] = stats.mean_repairs;
  } else {
    TrajectoryOptions options;
    options.output_stride = config.output_thinning;
    const TrajectoryRecord rec =
        simulate_trajectory(config.scenario, trajectory_seed(config.master_seed, 0), options);
    const double c = config.scenario.params.c;
    write_file(dir / "trajectory.csv", [&](std::ostream& o) { write_trajectory_csv(o, rec, c); });
    write_file(dir / "jumps.csv", [&](std::ostream& o) { write_jumps_csv(o, rec); });
    info["mode"] = "single-trajectory";
    info["repair_count"] = rec.repair_count;
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

  nlohmann::json meta = config_to_json(config);
  info["master_seed"] = config.master_seed;
  info["wall_time_s"] = elapsed.count();
  info["version"] = version();
  meta["run_info"] = info;
  write_file(dir / "meta.json", [&](std::ostream& o) { o << meta.dump(2) << '\n'; });
  return dir;
}

}  // namespace pdmpline
