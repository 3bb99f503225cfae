#include "windsim/wind_model.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <fmt/format.h>

#include "windsim/errors.hpp"

namespace windsim {

namespace {

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) {
        throw InvalidParameter(fmt::format("{} must be finite (got {})", what, x));
    }
}

} // namespace

bool is_stationary(const std::array<double, 3>& phi) {
    // Jury test on the reciprocal polynomial z^3 + a2 z^2 + a1 z + a0, whose
    // roots are the inverses of the AR polynomial roots.
    const double a2 = -phi[0];
    const double a1 = -phi[1];
    const double a0 = -phi[2];
    const double p_plus = 1.0 + a2 + a1 + a0;
    const double p_minus = -1.0 + a2 - a1 + a0;
    return p_plus > 0.0 && -p_minus > 0.0 && std::abs(a0) < 1.0 &&
           std::abs(a0 * a0 - 1.0) > std::abs(a0 * a2 - a1);
}

void ArmaParams::validate() const {
    for (double c : phi) require_finite(c, "arma.phi");
    for (double c : theta) require_finite(c, "arma.theta");
    if (!(sigma_alpha > 0.0)) throw InvalidParameter("arma.sigma_alpha must be > 0");
    if (!(base_std > 0.0)) throw InvalidParameter("arma.base_std must be > 0");
    if (!(base_mean > 0.0)) throw InvalidParameter("arma.base_mean must be > 0");
    if (!is_stationary(phi)) {
        throw InvalidParameter("arma.phi: AR polynomial is not stationary");
    }
}

void WindModelParams::validate() const {
    if (!(length_scale > 0.0)) throw InvalidParameter("wind.length_scale must be > 0");
    if (!(kappa >= 0.0 && kappa < 1.0)) throw InvalidParameter("wind.kappa must be in [0, 1)");
    if (!(dt > 0.0)) throw InvalidParameter("wind.dt must be > 0");
    if (!(target_annual_mean > 0.0)) {
        throw InvalidParameter("wind.target_annual_mean must be > 0");
    }
    if (burn_in_hours < 0) throw InvalidParameter("wind.burn_in_hours must be >= 0");
    if (!(vbar_floor > 0.0)) throw InvalidParameter("wind.vbar_floor must be > 0");
    if (fixed_mean && !(*fixed_mean >= 0.0 && std::isfinite(*fixed_mean))) {
        throw InvalidParameter("wind.fixed_mean must be finite and >= 0");
    }
    arma.validate();
}

double arma_step(const ArmaParams& arma, std::span<const double, 3> y_hist,
                 std::span<const double, 2> innov_hist, double alpha) {
    require_finite(alpha, "arma innovation");
    double y = alpha;
    for (std::size_t i = 0; i < 3; ++i) {
        require_finite(y_hist[i], "arma history");
        y += arma.phi[i] * y_hist[i];
    }
    for (std::size_t j = 0; j < 2; ++j) {
        require_finite(innov_hist[j], "arma innovation history");
        y += arma.theta[j] * innov_hist[j];
    }
    return y;
}

double hourly_mean_from_y(double y, const ArmaParams& arma, double scale, double shift) {
    require_finite(y, "arma output");
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw InvalidParameter("hourly mean scale must be positive and finite");
    }
    require_finite(shift, "hourly mean shift");
    return std::abs(scale * (arma.base_mean + arma.base_std * y) + shift);
}

double SlowWindSeries::end_time() const {
    if (hourly_means.empty()) return start_time;
    return start_time + kSecondsPerHour * static_cast<double>(hourly_means.size() - 1);
}

double interpolate_slow(const SlowWindSeries& series, double t) {
    if (series.hourly_means.size() < 2) {
        throw InvalidParameter("slow wind series needs at least two nodes");
    }
    if (!(t >= series.start_time && t <= series.end_time())) {
        throw RangeError(fmt::format("t = {} s outside slow series [{}, {}]", t,
                                     series.start_time, series.end_time()));
    }
    const double u = (t - series.start_time) / kSecondsPerHour;
    auto k = static_cast<std::size_t>(u);
    if (k >= series.hourly_means.size() - 1) {
        k = series.hourly_means.size() - 2;
    }
    const double frac = u - static_cast<double>(k);
    const double a = series.hourly_means[k];
    const double b = series.hourly_means[k + 1];
    return a + frac * (b - a);
}

SlowWindSeries generate_slow_series(const WindModelParams& params, std::size_t hours,
                                    NormalStream& rng) {
    if (hours < 2) throw InvalidParameter("slow wind series needs at least two hours");
    SlowWindSeries series;
    series.hourly_means.reserve(hours);
    if (params.fixed_mean) {
        series.hourly_means.assign(hours, *params.fixed_mean);
        return series;
    }

    const ArmaParams& arma = params.arma;
    double scale = 1.0;
    double shift = 0.0;
    switch (params.targeting) {
    case MeanTargeting::Shift:
        shift = params.target_annual_mean - arma.base_mean;
        break;
    case MeanTargeting::Scale:
        scale = params.target_annual_mean / arma.base_mean;
        break;
    }

    std::array<double, 3> y_hist{};
    std::array<double, 2> a_hist{};
    auto advance = [&] {
        const double alpha = arma.sigma_alpha * rng();
        const double y = arma_step(arma, y_hist, a_hist, alpha);
        y_hist = {y, y_hist[0], y_hist[1]};
        a_hist = {alpha, a_hist[0]};
        return y;
    };
    for (int i = 0; i < params.burn_in_hours; ++i) advance();
    for (std::size_t h = 0; h < hours; ++h) {
        series.hourly_means.push_back(hourly_mean_from_y(advance(), arma, scale, shift));
    }
    return series;
}

TurbulenceState ou_step(TurbulenceState state, double vbar, double dt, double xi,
                        double length_scale, double kappa) {
    if (!(vbar > 0.0)) {
        throw SingularTimescale(fmt::format("turbulence time scale undefined for vbar = {}", vbar));
    }
    const double T = length_scale / vbar;
    if (!(dt < 0.5 * T)) {
        throw SingularTimescale(
            fmt::format("dt = {} s too large for turbulence time scale T = {} s", dt, T));
    }
    const double drift = -state.w / T * dt;
    const double diffusion = kappa * vbar * std::sqrt(2.0 / T) * std::sqrt(dt) * xi;
    return TurbulenceState{state.w + drift + diffusion};
}

WindGenerator::WindGenerator(const WindModelParams& params,
                             std::shared_ptr<const SlowWindSeries> slow,
                             std::uint64_t turbulence_key)
    : params_(params), slow_(std::move(slow)), noise_(turbulence_key),
      t_(slow_ ? slow_->start_time : 0.0) {
    if (!slow_) throw InvalidParameter("wind generator needs a slow series");
}

WindSample WindGenerator::next() {
    const double vbar = interpolate_slow(*slow_, t_);
    const WindSample sample{t_, vbar, turb_.w, sample_wind(vbar, turb_.w)};
    const double xi = noise_();
    turb_ = ou_step(turb_, std::max(vbar, params_.vbar_floor), params_.dt, xi,
                    params_.length_scale, params_.kappa);
    ++tick_;
    t_ = slow_->start_time + static_cast<double>(tick_) * params_.dt;
    return sample;
}

} // namespace windsim
