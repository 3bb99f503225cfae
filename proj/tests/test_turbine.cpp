#include <doctest.h>

#include <cmath>
#include <numbers>

#include "windsim/errors.hpp"
#include "windsim/turbine.hpp"

using namespace windsim;

namespace {

const TurbineParams kCal = calibrated(TurbineParams{});

// Table values worked by hand.
constexpr double kOmegaNom = 18.0 * 2.0 * std::numbers::pi / 60.0;
constexpr double kOmegaMin = 9.0 * 2.0 * std::numbers::pi / 60.0;
constexpr double kSwept = 0.5 * std::numbers::pi * 1.134 * 37.5 * 37.5;

} // namespace

TEST_SUITE("turbine") {

TEST_CASE("tip speed ratio") {
    CHECK(tip_speed_ratio(kCal, kOmegaNom, 14.0) == doctest::Approx(5.049).epsilon(1e-3));
    CHECK(tip_speed_ratio(kCal, 1.2, 16.0) ==
          doctest::Approx(0.5 * tip_speed_ratio(kCal, 1.2, 8.0)));
    CHECK(tip_speed_ratio(kCal, 0.0, 8.0) == 0.0);
    CHECK_THROWS_AS((void)tip_speed_ratio(kCal, 1.0, 0.0), InvalidParameter);
    CHECK_THROWS_AS((void)tip_speed_ratio(kCal, 1.0, -2.0), InvalidParameter);
}

TEST_CASE("Cp stays within [0, Betz] on a dense grid") {
    TurbineParams loose_mut = kCal;
    loose_mut.cp_scale = 3.0; // force the clamp to matter
    const TurbineParams& loose = loose_mut;
    for (int i = 0; i <= 150; ++i) {
        for (int j = 0; j <= 30; ++j) {
            const double lam = 15.0 * i / 150.0;
            const double th = kCal.theta_max * j / 30.0;
            for (const TurbineParams* p : {&kCal, &loose}) {
                const double c = cp(*p, lam, th);
                REQUIRE(c >= 0.0);
                REQUIRE(c <= kBetzLimit);
            }
        }
    }
}

TEST_CASE("pitching reduces Cp near the optimum") {
    for (double lam : {5.0, 5.5, 6.0, 6.5, 7.0}) {
        const double c0 = cp(kCal, lam, 0.0);
        for (double deg : {1.0, 2.0, 5.0, 10.0, 20.0, 30.0}) {
            CAPTURE(lam);
            CAPTURE(deg);
            CHECK(c0 >= cp(kCal, lam, deg_to_rad(deg)));
        }
    }
}

TEST_CASE("calibrated Cp at the nominal point") {
    const double required = 2.03e6 / (kSwept * 14.0 * 14.0 * 14.0);
    CHECK(required == doctest::Approx(0.295).epsilon(0.01));
    CHECK(cp(kCal, tip_speed_ratio(kCal, kOmegaNom, 14.0), 0.0) ==
          doctest::Approx(required).epsilon(1e-9));
    CHECK(aero_power(kCal, 14.0, kOmegaNom, 0.0) == doctest::Approx(2.03e6).epsilon(1e-3));
}

TEST_CASE("calibration scale is linear in the Cp magnitude") {
    TurbineParams consistent;
    consistent.cp_coeffs.c1 *= calibrate_cp(TurbineParams{});
    CHECK(calibrate_cp(consistent) == doctest::Approx(1.0).epsilon(1e-12));
    TurbineParams doubled = consistent;
    doubled.cp_coeffs.c1 *= 2.0;
    CHECK(calibrate_cp(doubled) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("infeasible calibration") {
    TurbineParams small;
    small.rotor_radius = 15.0; // needs Cp ~ 1.8
    CHECK_THROWS_AS((void)calibrate_cp(small), CalibrationError);
    TurbineParams slow_tip;
    slow_tip.cp_coeffs.c5 = 1e3; // raw Cp negative everywhere
    CHECK_THROWS_AS((void)calibrate_cp(slow_tip), CalibrationError);
}

TEST_CASE("aerodynamic power") {
    CHECK(aero_power(kCal, 0.0, kOmegaNom, 0.0) == 0.0);
    // same lambda and theta, twice the wind: eight times the power
    const double p1 = aero_power(kCal, 6.0, 1.0, deg_to_rad(3.0));
    const double p2 = aero_power(kCal, 12.0, 2.0, deg_to_rad(3.0));
    CHECK(p2 == doctest::Approx(8.0 * p1));
    CHECK(aero_power(kCal, 14.0, kOmegaNom, 0.0) == doctest::Approx(2.03e6).epsilon(1e-3));
}

TEST_CASE("aero_power is continuous over the operating domain") {
    const double h = 1e-7;
    for (double v = 3.0; v <= 25.0; v += 1.1) {
        for (double w = kOmegaMin * 0.5; w <= kOmegaNom * 1.3; w += 0.17) {
            for (double th = 0.0; th <= kCal.theta_max; th += 0.05) {
                const double p = aero_power(kCal, v, w, th);
                const double scale = 1e-3 * kCal.p_g_nom;
                REQUIRE(std::abs(aero_power(kCal, v + h, w, th) - p) < scale);
                REQUIRE(std::abs(aero_power(kCal, v, w + h, th) - p) < scale);
                REQUIRE(std::abs(aero_power(kCal, v, w, th + h) - p) < scale);
            }
        }
    }
}

TEST_CASE("mode-1 wind anchor and reference") {
    CHECK(mode1_wind_anchor(kCal, kOmegaMin) == doctest::Approx(3.5));
    CHECK(mode1_wind_anchor(kCal, kOmegaNom) == doctest::Approx(14.0));
    CHECK(mode1_wind_anchor(kCal, 0.5 * (kOmegaMin + kOmegaNom)) == doctest::Approx(8.75));
    CHECK(mode1_power_ref(kCal, kOmegaNom) == doctest::Approx(2.03e6).epsilon(1e-3));
    // below omega_min the reference holds its omega_min value
    CHECK(mode1_power_ref(kCal, 0.96 * kOmegaMin) == mode1_power_ref(kCal, kOmegaMin));
    CHECK(mode1_power_ref(kCal, 1.05 * kOmegaNom) == mode1_power_ref(kCal, kOmegaNom));
    double prev = -1.0;
    for (int i = 0; i <= 400; ++i) {
        const double w = kOmegaMin + (kOmegaNom - kOmegaMin) * i / 400.0;
        const double p = mode1_power_ref(kCal, w);
        REQUIRE(p >= prev);
        prev = p;
    }
}

TEST_CASE("mode-1 reference matches its closed form") {
    for (double w : {kOmegaMin, 1.2, 1.5, kOmegaNom}) {
        const double v1 = 3.5 + (w - kOmegaMin) / (kOmegaNom - kOmegaMin) * 10.5;
        const double expect = kSwept * cp(kCal, 37.5 * w / v1, 0.0) * v1 * v1 * v1;
        CHECK(mode1_power_ref(kCal, w) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("mode-2 reference") {
    CHECK(mode2_power_ref(kCal, kOmegaNom) == doctest::Approx(2.03e6));
    CHECK(mode2_power_ref(kCal, 0.95 * kOmegaNom) == doctest::Approx(1.9285e6));
    CHECK(mode2_power_ref(kCal, 1.05 * kOmegaNom) == doctest::Approx(2.1315e6));
}

TEST_CASE("pitch rate law") {
    CHECK(pitch_rate(kCal, 0.0, kOmegaNom) == 0.0);
    CHECK(pitch_rate(kCal, 0.0, 0.9 * kOmegaNom) == 0.0);
    CHECK(pitch_rate(kCal, 0.1, kOmegaNom) == 0.0);
    CHECK(pitch_rate(kCal, 0.1, kOmegaNom + 10.0) == kCal.pitch_rate_max);
    CHECK(pitch_rate(kCal, 0.1, kOmegaNom - 10.0) == kCal.pitch_rate_min);
    CHECK(pitch_rate(kCal, kCal.theta_max, kOmegaNom + 1.0) == 0.0);
    CHECK(pitch_rate(kCal, kCal.theta_max, kOmegaNom - 0.1) == kCal.pitch_rate_min);
    CHECK(pitch_rate(kCal, 0.0, kOmegaNom + 1e-4) == doctest::Approx(100.0 * 1e-4));
}

TEST_CASE("drive-train Euler step") {
    const MechState s{kOmegaNom, 0.0};
    CHECK(drivetrain_step(kCal, s, 1.5e6, 1.5e6, 1.0).omega == s.omega);
    const double dw = drivetrain_step(kCal, s, 1.1e6, 1.0e6, 1.0).omega - s.omega;
    CHECK(dw == doctest::Approx(1e5 / (1.4e6 * 1.885)).epsilon(1e-3));
    CHECK(dw == doctest::Approx(0.0379).epsilon(2e-3));
    CHECK_THROWS_AS((void)drivetrain_step(kCal, {0.49 * kOmegaMin, 0.0}, 1.0, 0.0, 1.0),
                    IntegrationDomainError);
}

TEST_CASE("energy-rate consistency along a trajectory") {
    MechState s{1.3, 0.0};
    for (int k = 0; k < 200; ++k) {
        const double pm = aero_power(kCal, 9.0, s.omega, s.theta);
        const double pg = mode1_power_ref(kCal, s.omega);
        const MechState n = drivetrain_step(kCal, s, pm, pg, 0.5);
        REQUIRE(kCal.inertia * s.omega * (n.omega - s.omega) / 0.5 ==
                doctest::Approx(pm - pg).epsilon(1e-9));
        s = n;
    }
}

TEST_CASE("local error is second order against the exact solution") {
    // J w dw/dt = dP has w(t)^2 = w0^2 + 2 dP t / J
    const double w0 = 1.0;
    const double dp = 1e5;
    auto exact = [&](double t) { return std::sqrt(w0 * w0 + 2.0 * dp * t / kCal.inertia); };
    double prev_err = 0.0;
    for (double dt : {1.0, 0.5, 0.25, 0.125}) {
        const double err = std::abs(drivetrain_step(kCal, {w0, 0.0}, dp, 0.0, dt).omega - exact(dt));
        if (prev_err > 0.0) CHECK(prev_err / err == doctest::Approx(4.0).epsilon(0.05));
        prev_err = err;
    }
    // two half steps land closer to the fine-step result than one full step
    const MechState half = drivetrain_step(kCal, drivetrain_step(kCal, {w0, 0.0}, dp, 0.0, 0.5),
                                           dp, 0.0, 0.5);
    const MechState full = drivetrain_step(kCal, {w0, 0.0}, dp, 0.0, 1.0);
    MechState fine{w0, 0.0};
    for (int k = 0; k < 1000; ++k) fine = drivetrain_step(kCal, fine, dp, 0.0, 1e-3);
    CHECK(std::abs(half.omega - fine.omega) < std::abs(full.omega - fine.omega));
}

TEST_CASE("pitch angle stays bounded and rate-limited") {
    MechState s{kOmegaNom * 1.5, 0.0};
    const double max_rate = std::max(-kCal.pitch_rate_min, kCal.pitch_rate_max);
    for (int k = 0; k < 400; ++k) {
        const double target = k < 200 ? kOmegaNom * 1.5 : kOmegaNom * 0.8;
        const MechState n = drivetrain_step(kCal, {target, s.theta}, 0.0, 0.0, 0.7);
        REQUIRE(n.theta >= 0.0);
        REQUIRE(n.theta <= kCal.theta_max);
        REQUIRE(std::abs(n.theta - s.theta) <= max_rate * 0.7 + 1e-15);
        s = n;
    }
}

TEST_CASE("grid power") {
    CHECK(grid_power(kCal, 2.03e6) == doctest::Approx(1.827e6));
    CHECK(grid_power(kCal, 0.0) == 0.0);
    TurbineParams ideal = kCal;
    ideal.efficiency = 1.0;
    CHECK(grid_power(ideal, 1.234e6) == 1.234e6);
    CHECK_THROWS_AS((void)grid_power(kCal, -1.0), InvalidParameter);
}

TEST_CASE("parameter validation") {
    CHECK_NOTHROW(kCal.validate());
    TurbineParams p;
    p.omega_min = p.omega_nom;
    CHECK_THROWS_AS(p.validate(), InvalidParameter);
    p = {};
    p.v60_cutoff = 26.0;
    CHECK_THROWS_AS(p.validate(), InvalidParameter);
    p = {};
    p.efficiency = 1.1;
    CHECK_THROWS_AS(p.validate(), InvalidParameter);
    p = {};
    p.pitch_rate_min = 0.0;
    CHECK_THROWS_AS(p.validate(), InvalidParameter);
    p = {};
    p.inertia = 0.0;
    CHECK_THROWS_AS(p.validate(), InvalidParameter);
}

}
