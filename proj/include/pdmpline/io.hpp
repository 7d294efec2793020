#pragma once

#include <filesystem>
#include <map>
#include <ostream>
#include <string>

#include "pdmpline/config.hpp"
#include "pdmpline/ensemble.hpp"
#include "pdmpline/pdmp.hpp"

namespace pdmpline {

/// Library version string, also written to meta.json.
std::string version();

/// Decimal format of every CSV float: 17 significant digits ("%.17g").
std::string format_double(double x);

/// Header: t,mean_w,se_w,mean_capacity,se_capacity,mean_q,se_q,mean_rho_b,se_rho_b
void write_moments_csv(std::ostream& out, const MomentEstimates& moments);
/// Header: repairs,frequency; ascending repair count.
void write_histogram_csv(std::ostream& out, const std::map<int, double>& histogram);
/// Header: t,w,r,capacity,q,rho_b
void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& record, double c);
/// Header: time,kind,w_before,w_after,r_after,q_after,mass_after
void write_jumps_csv(std::ostream& out, const TrajectoryRecord& record);

enum class RunMode { ensemble, single_trajectory };

/// Runs `config` and writes its outputs into config.output_dir (created if
/// needed): moments.csv, histogram.csv and meta.json for an ensemble;
/// trajectory.csv, jumps.csv and meta.json for a single path, which is
/// sample 0 of the ensemble with the same master seed. Returns the directory.
/// Throws std::runtime_error on I/O failure.
std::filesystem::path execute(const RunConfig& config, RunMode mode);

}  // namespace pdmpline
