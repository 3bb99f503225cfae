// Two-timescale wind speed model.
//
//   v(t) = vbar(t) + w(t)
//
// vbar is an hourly ARMA(3,2) series, reflected at zero and linearly
// interpolated between hours. w is an Ornstein-Uhlenbeck turbulence process
//
//   dw = -w/T dt + kappa * vbar * sqrt(2/T) dB,   T = L / vbar
//
// integrated with Euler-Maruyama.
#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "windsim/rng.hpp"

namespace windsim {

/// Hourly ARMA(3,2) generator for the slow wind component.
///
/// Defaults are the Swift Current (Saskatchewan) model:
///   y_t = 1.1772 y_{t-1} + 0.1001 y_{t-2} - 0.3572 y_{t-3}
///         + a_t - 0.5030 a_{t-1} - 0.2924 a_{t-2},   a_t ~ N(0, 0.524760^2)
/// and the hourly speed is mu + sigma * y_t.
struct ArmaParams {
    std::array<double, 3> phi{1.1772, 0.1001, -0.3572};
    std::array<double, 2> theta{-0.5030, -0.2924};
    double sigma_alpha = 0.524760;
    double base_mean = 5.46;       ///< mu [m/s]
    double base_std = 9.70 / 3.6;  ///< sigma [m/s] (9.70 km/h)

    /// Throws InvalidParameter on non-positive scales or a non-stationary
    /// AR polynomial.
    void validate() const;
};

/// True iff all roots of 1 - phi1 z - phi2 z^2 - phi3 z^3 lie strictly
/// outside the unit circle.
[[nodiscard]] bool is_stationary(const std::array<double, 3>& phi);

/// How the annual target mean is imposed on the ARMA output.
enum class MeanTargeting {
    Shift,  ///< vbar = |target + sigma * y|
    Scale,  ///< vbar = (target / mu) * |mu + sigma * y|
};

struct WindModelParams {
    double length_scale = 300.0;        ///< L [m]
    double kappa = 0.15;                ///< turbulence std / mean
    double target_annual_mean = 5.46;   ///< [m/s]
    double dt = 1.0;                    ///< [s]
    ArmaParams arma{};
    MeanTargeting targeting = MeanTargeting::Shift;
    /// ARMA steps discarded before the first recorded hour.
    int burn_in_hours = 500;
    /// Floor applied to vbar before computing T = L / vbar.
    double vbar_floor = 0.1;
    /// When set, the slow component is held at this value (no ARMA draws).
    std::optional<double> fixed_mean;

    void validate() const;
};

/// One ARMA(3,2) recursion step.
/// y_hist = (y_{t-1}, y_{t-2}, y_{t-3}), innov_hist = (a_{t-1}, a_{t-2}).
[[nodiscard]] double arma_step(const ArmaParams& arma, std::span<const double, 3> y_hist,
                               std::span<const double, 2> innov_hist, double alpha);

/// Hourly mean speed from a standardized ARMA value, reflected at zero:
///   vbar = |scale * (mu + sigma * y) + shift|
[[nodiscard]] double hourly_mean_from_y(double y, const ArmaParams& arma, double scale,
                                        double shift = 0.0);

/// Hourly node values, one per hour starting at start_time.
struct SlowWindSeries {
    std::vector<double> hourly_means;  ///< [m/s]
    double start_time = 0.0;           ///< [s]

    [[nodiscard]] double end_time() const;
};

inline constexpr double kSecondsPerHour = 3600.0;

/// Piecewise-linear interpolation of the hourly nodes; RangeError outside
/// [start_time, end_time()].
[[nodiscard]] double interpolate_slow(const SlowWindSeries& series, double t);

/// Draws `hours` hourly means (hours >= 2) from the ARMA model, or a constant
/// series when params.fixed_mean is set.
[[nodiscard]] SlowWindSeries generate_slow_series(const WindModelParams& params,
                                                  std::size_t hours, NormalStream& rng);

struct TurbulenceState {
    double w = 0.0;  ///< [m/s]
};

/// Euler-Maruyama step of the turbulence SDE. vbar must be positive and
/// dt < T/2, otherwise SingularTimescale.
[[nodiscard]] TurbulenceState ou_step(TurbulenceState state, double vbar, double dt, double xi,
                                      double length_scale, double kappa);

/// v = max(vbar + w, 0).
[[nodiscard]] constexpr double sample_wind(double vbar, double w) noexcept {
    const double v = vbar + w;
    return v > 0.0 ? v : 0.0;
}

struct WindSample {
    double t;     ///< [s]
    double vbar;  ///< [m/s]
    double w;     ///< [m/s]
    double v;     ///< [m/s]
};

/// Streams v(t) on the tick grid t_k = start + k*dt for one turbine. Several
/// generators may share one slow series; each owns its turbulence stream.
class WindGenerator {
  public:
    WindGenerator(const WindModelParams& params, std::shared_ptr<const SlowWindSeries> slow,
                  std::uint64_t turbulence_key);

    /// Sample at the current tick, then advance the turbulence by one step.
    WindSample next();

    [[nodiscard]] double time() const noexcept { return t_; }

  private:
    WindModelParams params_;
    std::shared_ptr<const SlowWindSeries> slow_;
    NormalStream noise_;
    TurbulenceState turb_{};
    std::uint64_t tick_ = 0;
    double t_;
};

} // namespace windsim
