// Steady-state power curve of the turbine: the wind -> grid-power map given
// by the equilibria of the drive train under constant wind.
#pragma once

#include <vector>

#include "windsim/turbine.hpp"

namespace windsim {

/// Which averaged threshold bounds the static operating band from above.
enum class StaticCutout {
    Slow, ///< v60_cutoff (default): a constant wind above it trips the 60 s guard
    Fast, ///< v5_cutoff
};

[[nodiscard]] double static_cutout_speed(const TurbineParams& p, StaticCutout c) noexcept;

struct PowerCurve {
    std::vector<double> v_grid;   ///< strictly ascending [m/s]
    std::vector<double> p_values; ///< [W]
    double v_cut_in = 0.0;        ///< [m/s]
    double v_cut_out = 0.0;       ///< [m/s]
};

/// Equilibrium rotor speed in partial load: root of
/// aero_power(v, omega, 0) - mode1_power_ref(omega) on [omega_min, omega_nom].
/// Throws ModelInconsistency when the root is not bracketed.
[[nodiscard]] double mode1_equilibrium_speed(const TurbineParams& p, double v);

/// Steady-state grid power at constant wind v [W].
[[nodiscard]] double equilibrium_power(const TurbineParams& p, double v,
                                       StaticCutout cutout = StaticCutout::Slow);

/// Tabulates equilibrium_power on [0, v5_cutoff + 2] with spacing v_step. The
/// cut-in and cut-out speeds are inserted as nodes when they fall between grid
/// points.
[[nodiscard]] PowerCurve build_curve(const TurbineParams& p, double v_step,
                                     StaticCutout cutout = StaticCutout::Slow);

/// Linear interpolation on the curve; exactly zero outside [v_cut_in, v_cut_out].
[[nodiscard]] double static_power(const PowerCurve& curve, double v);

} // namespace windsim
