// Campaign configuration files.
//
// INI syntax, one section per module:
//
//   [mc_engine]     seed, duration_hours, n_turbines, record_interval_s,
//                   n_replicates, warmup_hours, threads
//   [wind_model]    dt_s, length_scale_m, kappa, target_annual_mean_mps,
//                   mean_targeting (shift|scale), burn_in_hours,
//                   vbar_floor_mps, fixed_mean_mps
//   [arma]          phi1, phi2, phi3, theta1, theta2, sigma_alpha,
//                   base_mean_mps, base_std_mps
//   [turbine]       rotor_radius_m, inertia_kgm2, omega_min_rpm, omega_nom_rpm,
//                   p_g_nom_w, v_nom_mps, v_cut_in_mps, v_restart_mps,
//                   v5_cutoff_mps, v60_cutoff_mps, air_density_kgm3,
//                   efficiency, pitch_gain, theta_max_deg,
//                   pitch_rate_min_degps, pitch_rate_max_degps,
//                   cp_c1 .. cp_c8, cp_exponent
//   [steady_curve]  v_step_mps, cutout (slow|fast)
//   [stats]         v_bin_mps, v_max_mps, p_bin_w, cdf_points
//   [cli]           out_dir, model (dynamic|static|both)
//
// RPM and degree inputs are converted to rad/s and rad here; everything
// downstream is SI. Cp is calibrated after loading.
#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "windsim/mc_engine.hpp"

namespace windsim {

enum class ModelSelection { Dynamic, Static, Both };

struct CampaignConfig {
    SimConfig sim{};
    double record_interval = 10.0; ///< [s]; record_stride is derived from it
    std::filesystem::path out_dir = "out";
    ModelSelection model = ModelSelection::Both;
    std::size_t cdf_points = 1000;

    /// Recomputes sim.record_stride from record_interval and dt.
    void sync_stride();
};

enum class ConfigErrorKind {
    MissingFile,
    Syntax,
    UnknownKey,
    Invariant,
};

class ConfigError : public std::runtime_error {
  public:
    ConfigError(ConfigErrorKind kind, std::string key, const std::string& message)
        : std::runtime_error(message), kind_(kind), key_(std::move(key)) {}

    [[nodiscard]] ConfigErrorKind kind() const noexcept { return kind_; }
    /// Offending "section.key", empty when not key-specific.
    [[nodiscard]] const std::string& key() const noexcept { return key_; }

  private:
    ConfigErrorKind kind_;
    std::string key_;
};

[[nodiscard]] CampaignConfig parse_config(const std::filesystem::path& path);
[[nodiscard]] CampaignConfig parse_config_text(std::string_view text);

/// Defaults for every key; equivalent to parsing an empty file.
[[nodiscard]] CampaignConfig default_config();

/// Re-validates cross-field invariants and recalibrates Cp. Used after CLI
/// overrides are applied. Throws ConfigError(Invariant).
void finalize_config(CampaignConfig& config);

} // namespace windsim
