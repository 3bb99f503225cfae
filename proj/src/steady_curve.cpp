#include "windsim/steady_curve.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "windsim/errors.hpp"

namespace windsim {

namespace {

constexpr int kMaxBisection = 200;
constexpr double kResidualTolerance = 1e-6; // relative to p_g_nom

} // namespace

double static_cutout_speed(const TurbineParams& p, StaticCutout c) noexcept {
    return c == StaticCutout::Fast ? p.v5_cutoff : p.v60_cutoff;
}

double mode1_equilibrium_speed(const TurbineParams& p, double v) {
    auto residual = [&](double omega) {
        return aero_power(p, v, omega, 0.0) - mode1_power_ref(p, omega);
    };
    const double tol = kResidualTolerance * p.p_g_nom;
    double lo = p.omega_min;
    double hi = p.omega_nom;
    double f_lo = residual(lo);
    double f_hi = residual(hi);
    if (std::abs(f_lo) < tol) return lo;
    if (std::abs(f_hi) < tol) return hi;
    if (f_lo * f_hi > 0.0) {
        throw ModelInconsistency(fmt::format(
            "no partial-load equilibrium bracketed at v = {} m/s (residuals {} W, {} W)", v,
            f_lo, f_hi));
    }
    double mid = 0.5 * (lo + hi);
    for (int i = 0; i < kMaxBisection; ++i) {
        mid = 0.5 * (lo + hi);
        const double f_mid = residual(mid);
        if (std::abs(f_mid) < tol) break;
        if ((f_mid < 0.0) == (f_lo < 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return mid;
}

double equilibrium_power(const TurbineParams& p, double v, StaticCutout cutout) {
    if (v < 0.0) throw InvalidParameter(fmt::format("negative wind speed {}", v));
    if (v < p.v_cut_in || v > static_cutout_speed(p, cutout)) return 0.0;
    if (v <= p.v_nom) {
        return grid_power(p, mode1_power_ref(p, mode1_equilibrium_speed(p, v)));
    }
    // Full load: pitch sheds the surplus and holds omega at omega_nom.
    return grid_power(p, p.p_g_nom);
}

PowerCurve build_curve(const TurbineParams& p, double v_step, StaticCutout cutout) {
    if (!(v_step > 0.0)) throw InvalidParameter("curve v_step must be > 0");
    PowerCurve curve;
    curve.v_cut_in = p.v_cut_in;
    curve.v_cut_out = static_cutout_speed(p, cutout);

    const double v_end = p.v5_cutoff + 2.0;
    const auto n = static_cast<std::size_t>(std::floor(v_end / v_step + 1e-9)) + 1;
    std::vector<double> grid;
    grid.reserve(n + 2);
    for (std::size_t i = 0; i < n; ++i) grid.push_back(static_cast<double>(i) * v_step);
    for (double edge : {curve.v_cut_in, curve.v_cut_out}) {
        const bool present = std::any_of(grid.begin(), grid.end(), [&](double g) {
            return std::abs(g - edge) < 1e-9 * std::max(1.0, edge);
        });
        if (!present && edge <= v_end) grid.push_back(edge);
    }
    std::sort(grid.begin(), grid.end());

    curve.v_grid = std::move(grid);
    curve.p_values.reserve(curve.v_grid.size());
    for (double v : curve.v_grid) curve.p_values.push_back(equilibrium_power(p, v, cutout));
    return curve;
}

double static_power(const PowerCurve& curve, double v) {
    if (v < curve.v_cut_in || v > curve.v_cut_out) return 0.0;
    const auto& g = curve.v_grid;
    auto it = std::upper_bound(g.begin(), g.end(), v);
    if (it == g.begin()) return curve.p_values.front();
    if (it == g.end()) return curve.p_values.back();
    const auto k = static_cast<std::size_t>(it - g.begin()) - 1;
    const double frac = (v - g[k]) / (g[k + 1] - g[k]);
    return curve.p_values[k] + frac * (curve.p_values[k + 1] - curve.p_values[k]);
}

} // namespace windsim
