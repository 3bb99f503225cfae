// Continuous dynamics of a variable-speed pitch-controlled DFIG turbine.
#pragma once

#include <numbers>

namespace windsim {

inline constexpr double kBetzLimit = 16.0 / 27.0;

[[nodiscard]] constexpr double rpm_to_radps(double rpm) noexcept {
    return rpm * 2.0 * std::numbers::pi / 60.0;
}
[[nodiscard]] constexpr double deg_to_rad(double deg) noexcept {
    return deg * std::numbers::pi / 180.0;
}
[[nodiscard]] constexpr double rad_to_deg(double rad) noexcept {
    return rad * 180.0 / std::numbers::pi;
}

/// Coefficients of the exponential power-coefficient approximation
///
///   1/li = 1/(lambda - c7*theta) + c8/(theta^3 + 1)
///   Cp   = c1 * (c2/li - c3*theta - c4*theta^x - c5) * exp(-c6/li)
///
/// with theta in degrees. Defaults are the usual DFIG values
/// (peak Cp ~ 0.44 at lambda ~ 7.2, theta = 0).
struct CpCoefficients {
    double c1 = 0.73;
    double c2 = 151.0;
    double c3 = 0.58;
    double c4 = 0.002;
    double x = 2.14;
    double c5 = 13.2;
    double c6 = 18.4;
    double c7 = 0.02;
    double c8 = 0.003;
};

/// Physical and control constants of one turbine. All fields are SI.
struct TurbineParams {
    double rotor_radius = 37.5;            ///< R [m]
    double inertia = 1.4e6;                ///< J [kg m^2]
    double omega_min = rpm_to_radps(9.0);  ///< [rad/s]
    double omega_nom = rpm_to_radps(18.0); ///< [rad/s]
    double p_g_nom = 2.03e6;               ///< rated electro-mechanical power [W]
    double v_nom = 14.0;                   ///< [m/s]
    double v_cut_in = 3.5;                 ///< [m/s]
    double v_restart = 19.0;               ///< restart speed after a high-wind trip [m/s]
    double v5_cutoff = 25.0;               ///< [m/s]
    double v60_cutoff = 20.0;              ///< [m/s]
    double air_density = 1.134;            ///< rho [kg/m^3]
    double efficiency = 0.9;               ///< eta, grid power / P_g
    double pitch_gain = 100.0;             ///< K2 [(rad/s) / (rad/s)]
    double theta_max = deg_to_rad(30.0);   ///< [rad]
    double pitch_rate_min = deg_to_rad(-5.0); ///< [rad/s]
    double pitch_rate_max = deg_to_rad(5.0);  ///< [rad/s]
    CpCoefficients cp_coeffs{};
    double cp_scale = 1.0;

    /// Throws InvalidParameter if an ordering or sign invariant fails.
    void validate() const;
};

/// Mechanical state: rotor speed and pitch angle.
struct MechState {
    double omega = 0.0; ///< [rad/s]
    double theta = 0.0; ///< [rad]
};

/// lambda = R * omega / v. Throws InvalidParameter for v <= 0.
[[nodiscard]] double tip_speed_ratio(const TurbineParams& p, double omega, double v);

/// Raw Cp from the coefficient formula, before scaling and clamping.
/// Returns 0 where lambda <= c7*theta (formula singular or negative).
[[nodiscard]] double cp_unscaled(const CpCoefficients& c, double lambda, double theta_rad);

/// cp_scale * Cp(lambda, theta), clamped to [0, 16/27].
[[nodiscard]] double cp(const TurbineParams& p, double lambda, double theta_rad);

/// Scale factor making the mode-1 reference hit p_g_nom at omega_nom.
/// Throws CalibrationError when the required Cp exceeds the Betz limit or the
/// raw Cp at the nominal point is not positive.
[[nodiscard]] double calibrate_cp(const TurbineParams& p);

/// Copy of p with cp_scale replaced by calibrate_cp(p).
[[nodiscard]] TurbineParams calibrated(TurbineParams p);

/// (pi/2) * rho * R^2, the factor in front of Cp * v^3.
[[nodiscard]] double swept_power_factor(const TurbineParams& p) noexcept;

/// Mechanical power captured from wind speed v [W].
[[nodiscard]] double aero_power(const TurbineParams& p, double v, double omega, double theta);

/// Wind speed at which omega is the steady-state mode-1 rotor speed.
[[nodiscard]] double mode1_wind_anchor(const TurbineParams& p, double omega) noexcept;

/// Partial-load generator power reference. omega is clamped to
/// [omega_min, omega_nom] before evaluation.
[[nodiscard]] double mode1_power_ref(const TurbineParams& p, double omega);

/// Full-load reference (omega / omega_nom) * p_g_nom.
[[nodiscard]] double mode2_power_ref(const TurbineParams& p, double omega) noexcept;

/// Saturated proportional pitch controller, zero at the travel limits.
[[nodiscard]] double pitch_rate(const TurbineParams& p, double theta, double omega) noexcept;

/// One explicit Euler step of J * omega * d(omega)/dt = P_m - P_g together
/// with the pitch actuator. Throws IntegrationDomainError when
/// state.omega < 0.5 * omega_min.
[[nodiscard]] MechState drivetrain_step(const TurbineParams& p, MechState state, double p_m,
                                        double p_g, double dt);

/// Power injected into the grid, eta * P_g. Throws InvalidParameter on P_g < 0.
[[nodiscard]] double grid_power(const TurbineParams& p, double p_g);

} // namespace windsim
