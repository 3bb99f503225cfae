// CSV and summary file formats. Every CSV starts with a header row whose
// column names carry their unit suffix.
#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "windsim/mc_engine.hpp"
#include "windsim/stats.hpp"
#include "windsim/steady_curve.hpp"
#include "windsim/wind_model.hpp"

namespace windsim {

/// Failure to create or read a data file.
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// t_s,vbar_mps,w_mps,v_mps
void write_wind_csv(const std::filesystem::path& path, std::span<const WindSample> samples);

/// Dynamic traces with states:
///   t_s,turbine,mode,omega_radps,theta_rad,v_mps,p_out_w
/// otherwise:
///   t_s,turbine,v_mps,p_out_w
/// Rows are ordered by time, then turbine index.
void write_trace_csv(const std::filesystem::path& path, const PowerTrace& trace);

/// Reads either trace layout back. Mode, omega and theta are restored when
/// present.
[[nodiscard]] PowerTrace read_trace_csv(const std::filesystem::path& path);

/// x_w,F at the distinct values of the probability grid k/(points-1).
void write_cdf_csv(const std::filesystem::path& path, const EmpiricalDistribution& dist,
                   std::size_t points);

/// v_lo_mps,v_hi_mps,p_lo_w,p_hi_w,count for every cell, row-major in v.
void write_joint_csv(const std::filesystem::path& path, const JointHistogram& hist);

/// v_mps,p_out_w
void write_curve_csv(const std::filesystem::path& path, const PowerCurve& curve);

/// lambda,theta_deg,cp on a regular grid.
void write_cp_surface_csv(const std::filesystem::path& path, const TurbineParams& params,
                          double lambda_max, std::size_t lambda_points, double theta_max_deg,
                          std::size_t theta_points);

using SummaryEntries = std::vector<std::pair<std::string, std::string>>;

/// "key = value" lines in insertion order.
void write_summary(const std::filesystem::path& path, const SummaryEntries& entries);

/// Parses a file written by write_summary.
[[nodiscard]] SummaryEntries read_summary(const std::filesystem::path& path);

} // namespace windsim
