#include "windsim/turbine.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "windsim/errors.hpp"

namespace windsim {

void TurbineParams::validate() const {
    auto fail = [](const char* msg) { throw InvalidParameter(msg); };
    if (!(rotor_radius > 0.0)) fail("turbine.rotor_radius must be > 0");
    if (!(inertia > 0.0)) fail("turbine.inertia must be > 0");
    if (!(omega_min > 0.0 && omega_min < omega_nom)) fail("turbine: need 0 < omega_min < omega_nom");
    if (!(p_g_nom > 0.0)) fail("turbine.p_g_nom must be > 0");
    if (!(v_cut_in > 0.0 && v_cut_in < v_nom && v_nom < v60_cutoff && v60_cutoff <= v5_cutoff)) {
        fail("turbine: need 0 < v_cut_in < v_nom < v60_cutoff <= v5_cutoff");
    }
    if (!(v_restart > 0.0)) fail("turbine.v_restart must be > 0");
    if (!(air_density > 0.0)) fail("turbine.air_density must be > 0");
    if (!(efficiency > 0.0 && efficiency <= 1.0)) fail("turbine.efficiency must be in (0, 1]");
    if (!(pitch_gain >= 0.0)) fail("turbine.pitch_gain must be >= 0");
    if (!(theta_max > 0.0)) fail("turbine.theta_max must be > 0");
    if (!(pitch_rate_min < 0.0 && pitch_rate_max > 0.0)) {
        fail("turbine: need pitch_rate_min < 0 < pitch_rate_max");
    }
    if (!(cp_scale > 0.0 && std::isfinite(cp_scale))) fail("turbine.cp_scale must be > 0");
}

double tip_speed_ratio(const TurbineParams& p, double omega, double v) {
    if (!(v > 0.0)) {
        throw InvalidParameter(fmt::format("tip-speed ratio undefined for v = {}", v));
    }
    return p.rotor_radius * omega / v;
}

double cp_unscaled(const CpCoefficients& c, double lambda, double theta_rad) {
    const double theta = rad_to_deg(theta_rad);
    const double denom = lambda - c.c7 * theta;
    if (!(denom > 0.0)) return 0.0;
    const double inv_li = 1.0 / denom + c.c8 / (theta * theta * theta + 1.0);
    const double pitch_term = theta > 0.0 ? c.c4 * std::pow(theta, c.x) : 0.0;
    return c.c1 * (c.c2 * inv_li - c.c3 * theta - pitch_term - c.c5) * std::exp(-c.c6 * inv_li);
}

double cp(const TurbineParams& p, double lambda, double theta_rad) {
    return std::clamp(p.cp_scale * cp_unscaled(p.cp_coeffs, lambda, theta_rad), 0.0, kBetzLimit);
}

double swept_power_factor(const TurbineParams& p) noexcept {
    return 0.5 * std::numbers::pi * p.air_density * p.rotor_radius * p.rotor_radius;
}

double calibrate_cp(const TurbineParams& p) {
    const double lambda_nom = p.rotor_radius * p.omega_nom / p.v_nom;
    const double raw = cp_unscaled(p.cp_coeffs, lambda_nom, 0.0);
    if (!(raw > 0.0)) {
        throw CalibrationError(
            fmt::format("Cp is not positive at the nominal point (lambda = {})", lambda_nom));
    }
    const double required = p.p_g_nom / (swept_power_factor(p) * std::pow(p.v_nom, 3));
    if (required > kBetzLimit) {
        throw CalibrationError(fmt::format(
            "nominal point needs Cp = {} above the Betz limit", required));
    }
    return required / raw;
}

TurbineParams calibrated(TurbineParams p) {
    p.cp_scale = calibrate_cp(p);
    return p;
}

double aero_power(const TurbineParams& p, double v, double omega, double theta) {
    if (!(v > 0.0)) return 0.0;
    const double lambda = tip_speed_ratio(p, omega, v);
    return swept_power_factor(p) * cp(p, lambda, theta) * v * v * v;
}

double mode1_wind_anchor(const TurbineParams& p, double omega) noexcept {
    return (omega - p.omega_min) / (p.omega_nom - p.omega_min) * (p.v_nom - p.v_cut_in) +
           p.v_cut_in;
}

double mode1_power_ref(const TurbineParams& p, double omega) {
    const double w = std::clamp(omega, p.omega_min, p.omega_nom);
    const double v1 = mode1_wind_anchor(p, w);
    return swept_power_factor(p) * cp(p, p.rotor_radius * w / v1, 0.0) * v1 * v1 * v1;
}

double mode2_power_ref(const TurbineParams& p, double omega) noexcept {
    return omega / p.omega_nom * p.p_g_nom;
}

double pitch_rate(const TurbineParams& p, double theta, double omega) noexcept {
    if (theta <= 0.0 && omega <= p.omega_nom) return 0.0;
    if (theta >= p.theta_max && omega >= p.omega_nom) return 0.0;
    return std::clamp(p.pitch_gain * (omega - p.omega_nom), p.pitch_rate_min, p.pitch_rate_max);
}

MechState drivetrain_step(const TurbineParams& p, MechState state, double p_m, double p_g,
                          double dt) {
    if (!(state.omega >= 0.5 * p.omega_min)) {
        throw IntegrationDomainError(fmt::format(
            "drive train integrated at omega = {} rad/s (< 0.5 * omega_min)", state.omega));
    }
    MechState next;
    next.omega = state.omega + dt * (p_m - p_g) / (p.inertia * state.omega);
    next.theta = std::clamp(state.theta + dt * pitch_rate(p, state.theta, state.omega), 0.0,
                            p.theta_max);
    return next;
}

double grid_power(const TurbineParams& p, double p_g) {
    if (p_g < 0.0) {
        throw InvalidParameter(fmt::format("negative generator power {} W", p_g));
    }
    return p.efficiency * p_g;
}

} // namespace windsim
