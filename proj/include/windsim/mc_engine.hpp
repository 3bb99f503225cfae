// Monte-Carlo campaigns: slow-wind sampling, per-turbine dynamic and static
// simulation, farm aggregation and distribution estimation.
//
// Random streams (see rng.hpp):
//   slow wind of replicate r        -> (seed, SlowWind, 0, r)
//   turbulence of turbine i, rep. r -> (seed, Turbulence, i, r)
// Work is split over (replicate, turbine) tasks and merged in index order, so
// results do not depend on the thread count.
#pragma once

#include <cstdint>
#include <vector>

#include "windsim/hybrid_ctrl.hpp"
#include "windsim/stats.hpp"
#include "windsim/steady_curve.hpp"
#include "windsim/turbine.hpp"
#include "windsim/wind_model.hpp"

namespace windsim {

struct HistogramBinning {
    double v_width = 0.5;   ///< [m/s]
    double v_max = 30.0;    ///< [m/s]
    double p_width = 50e3;  ///< [W]
};

struct SimConfig {
    double duration = 8760.0 * kSecondsPerHour; ///< [s]
    std::size_t n_turbines = 1;
    std::uint64_t seed = 42;
    WindModelParams wind{};
    TurbineParams turbine = calibrated(TurbineParams{});
    std::size_t record_stride = 10; ///< ticks between recorded samples
    std::size_t n_replicates = 1;
    double warmup = kSecondsPerHour; ///< excluded from distributions [s]
    unsigned threads = 1;            ///< 0 = hardware concurrency
    bool record_states = false;      ///< keep mode/omega/theta channels
    StaticCutout static_cutout = StaticCutout::Slow;
    double curve_v_step = 0.1;       ///< [m/s]
    HistogramBinning binning{};

    [[nodiscard]] double dt() const noexcept { return wind.dt; }
    [[nodiscard]] std::size_t ticks() const;
    /// Hours of slow series needed to cover the run (ticks + interpolation node).
    [[nodiscard]] std::size_t slow_hours() const;
    void validate() const;
};

/// Recorded samples of one simulation. Per-turbine channels are indexed
/// [turbine][sample].
struct PowerTrace {
    std::vector<double> time;                  ///< [s]
    std::vector<std::vector<double>> p_out;    ///< [W]
    std::vector<std::vector<double>> v;        ///< instantaneous wind [m/s]
    std::vector<double> farm;                  ///< sum over turbines [W]
    // Dynamic runs with record_states only.
    std::vector<std::vector<Mode>> mode;
    std::vector<std::vector<double>> omega;    ///< [rad/s], 0 in Mode 0
    std::vector<std::vector<double>> theta;    ///< [rad]

    [[nodiscard]] std::size_t n_turbines() const noexcept { return p_out.size(); }
    [[nodiscard]] std::size_t size() const noexcept { return time.size(); }
    [[nodiscard]] bool has_states() const noexcept { return !mode.empty(); }
};

/// Stream keys of one replicate.
struct StreamSet {
    std::uint64_t slow = 0;
    std::vector<std::uint64_t> turbulence;
};

[[nodiscard]] StreamSet streams_for(const SimConfig& config, std::uint64_t replicate = 0);

/// Slow series of a run drawn from the given stream.
[[nodiscard]] SlowWindSeries sample_slow_series(const SimConfig& config, std::uint64_t slow_key);

/// Single turbine, dynamic model.
[[nodiscard]] PowerTrace simulate_turbine(const SimConfig& config, std::uint64_t slow_key,
                                          std::uint64_t turbulence_key);

/// Farm of config.n_turbines sharing one slow component, dynamic model.
[[nodiscard]] PowerTrace simulate_farm(const SimConfig& config, std::uint64_t replicate = 0);

/// Same wind pipeline as simulate_farm, power from the static curve.
[[nodiscard]] PowerTrace simulate_static(const SimConfig& config, const PowerCurve& curve,
                                         std::uint64_t replicate = 0);

struct ReplicateResult {
    Summary dynamic;
    Summary steady;
    double ks = 0.0;
};

struct CampaignResult {
    /// Farm total divided by n_turbines, pooled over replicates, t >= warmup.
    EmpiricalDistribution dynamic;
    EmpiricalDistribution steady;
    JointHistogram joint_dynamic; ///< per-turbine (v, P) pairs
    JointHistogram joint_static;
    PowerCurve curve;
    std::vector<ReplicateResult> replicates;
    double ks = 0.0;
    double wind_mean = 0.0; ///< mean instantaneous wind over distribution samples [m/s]
};

/// Paired dynamic and static runs on identical wind samples.
[[nodiscard]] CampaignResult run_campaign(const SimConfig& config);

} // namespace windsim
