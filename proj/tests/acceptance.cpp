// Acceptance suite. One PASS/FAIL line per criterion; exit status is the
// number of failed criteria.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "windsim/commands.hpp"
#include "windsim/hybrid_ctrl.hpp"
#include "windsim/mc_engine.hpp"
#include "windsim/rng.hpp"
#include "windsim/stats.hpp"
#include "windsim/steady_curve.hpp"
#include "windsim/turbine.hpp"
#include "windsim/wind_model.hpp"

using namespace windsim;
namespace fs = std::filesystem;

namespace {

const TurbineParams kCal = calibrated(TurbineParams{});

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    double budget_s; ///< wall-clock limit, 0 when none is stated
    std::function<Outcome()> run;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Runs the hybrid model under a constant wind from a cold start and
/// returns the mean output over the final `average_s` seconds.
double constant_wind_output(double v, double dt, double total_s, double average_s) {
    HybridState s = initial_state(dt, v);
    const auto n = static_cast<std::size_t>(std::llround(total_s / dt));
    const auto tail = static_cast<std::size_t>(std::llround(average_s / dt));
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double p = step(kCal, s, v, dt).p_out;
        if (k >= n - tail) sum += p;
    }
    return sum / static_cast<double>(tail);
}

SimConfig month(double mean, std::size_t reps, std::size_t turbines = 1) {
    SimConfig c;
    c.duration = 720.0 * kSecondsPerHour;
    c.wind.target_annual_mean = mean;
    c.n_replicates = reps;
    c.n_turbines = turbines;
    c.threads = 0;
    return c;
}

// 1 ------------------------------------------------------------------------

Outcome nominal_anchor() {
    const double eq = equilibrium_power(kCal, 14.0);
    const double dyn = constant_wind_output(14.0, 1.0, 2 * 3600.0, 600.0);
    const bool ok = std::abs(eq - 1.827e6) <= 0.01 * 1.827e6 &&
                    std::abs(dyn - 1.827e6) <= 0.01 * 1.827e6;
    return {ok, fmt::format("equilibrium {:.1f} W, dynamic {:.1f} W, target 1827000 W +-1%", eq,
                            dyn)};
}

// 2 ------------------------------------------------------------------------

/// Ticks after the switch to `v` until the turbine leaves operation, -1 if never.
int ticks_to_trip(double v, int max_ticks) {
    HybridState s = initial_state(1.0, 14.0);
    for (int k = 0; k < 1800; ++k) (void)step(kCal, s, 14.0, 1.0);
    if (s.mode == Mode::NoLoad) return -2;
    for (int k = 1; k <= max_ticks; ++k) {
        (void)step(kCal, s, v, 1.0);
        if (s.mode == Mode::NoLoad) return k;
    }
    return -1;
}

/// After a 26 m/s trip, holds `v` for two hours; returns whether it restarted.
bool restarts_after_trip(double v, double* power) {
    HybridState s = initial_state(1.0, 14.0);
    for (int k = 0; k < 1800; ++k) (void)step(kCal, s, 14.0, 1.0);
    for (int k = 0; k < 120; ++k) (void)step(kCal, s, 26.0, 1.0);
    if (s.mode != Mode::NoLoad || !s.cutoff_latch) return false;
    bool restarted = false;
    double last = 0.0;
    for (int k = 0; k < 7200; ++k) {
        last = step(kCal, s, v, 1.0).p_out;
        restarted = restarted || s.mode != Mode::NoLoad;
    }
    *power = last;
    return restarted;
}

Outcome cutoff_anchors() {
    const int t26 = ticks_to_trip(26.0, 600);
    const int t21 = ticks_to_trip(21.0, 600);
    double p195 = 0.0;
    double p18 = 0.0;
    const bool r195 = restarts_after_trip(19.5, &p195);
    const bool r18 = restarts_after_trip(18.0, &p18);
    const bool ok = t26 >= 1 && t26 <= 5 && t21 >= 1 && t21 <= 60 && !r195 && r18 && p18 > 0.0;
    return {ok, fmt::format("26 m/s trip after {} s (<=5), 21 m/s trip after {} s (<=60), "
                            "19.5 m/s restart {}, 18 m/s restart {} ({:.0f} W)",
                            t26, t21, r195 ? "yes" : "no", r18 ? "yes" : "no", p18)};
}

// 3 ------------------------------------------------------------------------

Outcome ou_statistics() {
    WindModelParams wp;
    const std::size_t n = 1'000'000;
    const std::size_t skip = 3600;
    const auto hours = static_cast<std::size_t>((n + skip) / 3600) + 2;
    auto slow = std::make_shared<const SlowWindSeries>(
        SlowWindSeries{std::vector<double>(hours, 10.0), 0.0});
    WindGenerator gen(wp, slow, derive_stream_key(42, StreamRole::Turbulence, 0));
    for (std::size_t k = 0; k < skip; ++k) (void)gen.next();
    std::vector<double> w(n);
    for (auto& x : w) x = gen.next().w;
    const double mean = std::accumulate(w.begin(), w.end(), 0.0) / static_cast<double>(n);
    double var = 0.0;
    for (double x : w) var += (x - mean) * (x - mean);
    var /= static_cast<double>(n);
    double cov = 0.0;
    for (std::size_t k = 0; k + 30 < n; ++k) cov += (w[k] - mean) * (w[k + 30] - mean);
    cov /= static_cast<double>(n - 30);
    const double sd = std::sqrt(var);
    const double rho = cov / var;
    const bool ok = std::abs(sd - 1.5) <= 0.02 * 1.5 && std::abs(rho - std::exp(-1.0)) <= 0.05;
    return {ok, fmt::format("std {:.4f} m/s (1.5 +-2%), lag-30 s autocorrelation {:.4f} "
                            "(e^-1 = {:.4f} +-0.05), {} steps",
                            sd, rho, std::exp(-1.0), n)};
}

// 4 ------------------------------------------------------------------------

Outcome constant_wind_consistency() {
    Outcome o;
    std::string parts;
    for (double v : {5.0, 8.0, 11.0, 14.0, 17.0}) {
        const double eq = equilibrium_power(kCal, v);
        const double dyn = constant_wind_output(v, 1.0, 4 * 3600.0, 3600.0);
        const double rel = (dyn - eq) / eq;
        const bool ok = std::abs(rel) <= 0.01;
        o.pass = o.pass && ok;
        parts += fmt::format("{}v={:g}: {:+.2f}%{}", parts.empty() ? "" : ", ", v, 100.0 * rel,
                             ok ? "" : " (out of tolerance)");
    }
    o.detail = parts + "; tolerance 1%";
    return o;
}

// 5 ------------------------------------------------------------------------

Outcome low_wind_scenario() {
    const CampaignResult r = run_campaign(month(5.46, 3));
    std::string reps;
    for (const auto& rep : r.replicates) reps += fmt::format(" {:.4f}", rep.ks);
    return {r.ks <= 0.05,
            fmt::format("pooled KS {:.4f} (<= 0.05), per seed{}, wind mean {:.3f} m/s", r.ks,
                        reps, r.wind_mean)};
}

// 6 ------------------------------------------------------------------------

Outcome high_wind_scenario() {
    const CampaignResult hi = run_campaign(month(10.0, 3));
    const CampaignResult lo = run_campaign(month(5.46, 3));
    const double p0 = hi.dynamic.evaluate(std::nextafter(kZeroPowerThreshold, 0.0));
    int wins = 0;
    std::string reps;
    for (std::size_t r = 0; r < 3; ++r) {
        const bool w = hi.replicates[r].ks >= lo.replicates[r].ks;
        wins += w ? 1 : 0;
        reps += fmt::format(" {:.4f}/{:.4f}", hi.replicates[r].ks, lo.replicates[r].ks);
    }
    const bool ok = p0 < 0.01 && wins >= 2;
    return {ok, fmt::format("P(P_out < 1 W) = {:.5f} (< 0.01); KS 10 vs 5.46 m/s per seed{} "
                            "-> {}/3 with KS(10) >= KS(5.46) (need >= 2)",
                            p0, reps, wins)};
}

// 7 ------------------------------------------------------------------------

Outcome farm_smoothing() {
    const CampaignResult farm = run_campaign(month(10.0, 1, 10));
    const CampaignResult single = run_campaign(month(10.0, 1, 1));
    const double sf = farm.dynamic.stddev();
    const double ss = single.dynamic.stddev();
    return {sf <= ss, fmt::format("std of farm/10 {:.0f} W vs single turbine {:.0f} W", sf, ss)};
}

// 8 ------------------------------------------------------------------------

/// Monthly energy on a fixed slow series with the turbulence driven by one
/// Brownian path: the coarse run sums pairs of fine increments.
std::pair<double, double> coupled_energy(const SimConfig& base) {
    const SlowWindSeries slow_series =
        sample_slow_series(base, derive_stream_key(base.seed, StreamRole::SlowWind, 0));
    const std::size_t fine_ticks = base.ticks() * 2;
    NormalStream rng(derive_stream_key(base.seed, StreamRole::Turbulence, 0));
    std::vector<float> xi(fine_ticks);
    for (auto& x : xi) x = static_cast<float>(rng());

    auto energy = [&](double dt, bool coarse) {
        const std::size_t ticks = coarse ? fine_ticks / 2 : fine_ticks;
        TurbulenceState w{};
        HybridState s;
        double e = 0.0;
        for (std::size_t k = 0; k < ticks; ++k) {
            const double t = static_cast<double>(k) * dt;
            const double vbar = interpolate_slow(slow_series, t);
            const double v = sample_wind(vbar, w.w);
            if (k == 0) s = initial_state(dt, v);
            e += step(base.turbine, s, v, dt).p_out * dt;
            const double z = coarse ? (static_cast<double>(xi[2 * k]) + xi[2 * k + 1]) / std::sqrt(2.0)
                                    : static_cast<double>(xi[k]);
            w = ou_step(w, std::max(vbar, base.wind.vbar_floor), dt, z, base.wind.length_scale,
                        base.wind.kappa);
        }
        return e;
    };
    return {energy(1.0, true), energy(0.5, false)};
}

Outcome numerical_hygiene() {
    Outcome o;
    // (a) dt refinement
    const auto [e1, e05] = coupled_energy(month(5.46, 1));
    const double rel = std::abs(e1 - e05) / e05;
    const bool a = rel < 0.01;

    // (b) drive-train local error against the exact solution of J w w' = dP
    const double w0 = 1.0;
    const double dp = 1e5;
    auto exact = [&](double t) { return std::sqrt(w0 * w0 + 2.0 * dp * t / kCal.inertia); };
    std::vector<double> errs;
    for (double dt : {1.0, 0.5, 0.25, 0.125}) {
        errs.push_back(std::abs(drivetrain_step(kCal, {w0, 0.0}, dp, 0.0, dt).omega - exact(dt)));
    }
    double min_ratio = 1e300;
    double max_ratio = 0.0;
    for (std::size_t i = 1; i < errs.size(); ++i) {
        min_ratio = std::min(min_ratio, errs[i - 1] / errs[i]);
        max_ratio = std::max(max_ratio, errs[i - 1] / errs[i]);
    }
    const bool b = min_ratio > 3.6 && max_ratio < 4.4;

    // (c) Betz bound on a 150 x 30 grid
    double cp_max = 0.0;
    for (int i = 0; i < 150; ++i) {
        for (int j = 0; j < 30; ++j) {
            const double lam = 15.0 * i / 149.0;
            const double th = kCal.theta_max * j / 29.0;
            cp_max = std::max(cp_max, cp(kCal, lam, th));
        }
    }
    const bool c = cp_max <= kBetzLimit;

    // (d) ECDF vs counting
    std::mt19937_64 g(8);
    std::normal_distribution<double> nd(0.0, 1.0);
    std::vector<double> x(1000);
    for (auto& v : x) v = std::round(nd(g) * 20.0) / 20.0; // ties on purpose
    const auto dist = ecdf(x);
    int mismatches = 0;
    for (int q = 0; q < 100; ++q) {
        const double t = -3.0 + 6.0 * q / 99.0;
        const auto cnt = std::count_if(x.begin(), x.end(), [&](double s) { return s <= t; });
        if (dist.evaluate(t) != static_cast<double>(cnt) / 1000.0) ++mismatches;
    }
    const bool d = mismatches == 0;

    o.pass = a && b && c && d;
    o.detail = fmt::format("dt 1 -> 0.5 s energy change {:.3f}% (< 1%); Euler error ratio per "
                           "halving {:.2f}..{:.2f} (~4); max Cp {:.4f} <= {:.4f}; ECDF mismatches "
                           "{}/100",
                           100.0 * rel, min_ratio, max_ratio, cp_max, kBetzLimit, mismatches);
    return o;
}

// 9 ------------------------------------------------------------------------

fs::path scratch_root() {
    const char* env = std::getenv("WINDSIM_TMP");
    return env ? fs::path(env) : fs::temp_directory_path() / "windsim_acceptance";
}

int cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv{"windsim"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int rc = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    if (rc != 0) std::cerr << err.str();
    return rc;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome determinism() {
    const fs::path root = scratch_root();
    const fs::path a = root / "run_threads1";
    const fs::path b = root / "run_threads4";
    fs::remove_all(a);
    fs::remove_all(b);
    const std::vector<std::string> common{"compare", "--seed", "42", "--mean", "8",
                                          "--turbines", "3", "--replicates", "2",
                                          "--duration-hours", "240"};
    auto with = [&](const fs::path& dir, const char* threads) {
        auto args = common;
        args.insert(args.end(), {"--threads", threads, "--out-dir", dir.string()});
        return cli(args);
    };
    if (with(a, "1") != 0 || with(b, "4") != 0) return {false, "compare command failed"};
    int files = 0;
    int differ = 0;
    for (const auto& entry : fs::directory_iterator(a)) {
        const auto name = entry.path().filename();
        if (entry.path().extension() != ".csv") continue;
        ++files;
        if (!fs::exists(b / name) || slurp(entry.path()) != slurp(b / name)) ++differ;
    }
    return {files >= 4 && differ == 0,
            fmt::format("{} CSV files compared between 1 and 4 threads, {} differ", files, differ)};
}

} // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "nominal-point anchor", 1.0, nominal_anchor},
        {2, "cut-off anchors", 10.0, cutoff_anchors},
        {3, "OU statistics", 10.0, ou_statistics},
        {4, "dynamic/static consistency under constant wind", 60.0, constant_wind_consistency},
        {5, "low-wind scenario (5.46 m/s KS)", 0.0, low_wind_scenario},
        {6, "high-wind scenario (10 m/s)", 0.0, high_wind_scenario},
        {7, "farm smoothing", 0.0, farm_smoothing},
        {8, "numerical hygiene", 0.0, numerical_hygiene},
        {9, "determinism across thread counts", 0.0, determinism},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, fmt::format("exception: {}", e.what())};
        }
        const double elapsed = seconds_since(t0);
        if (c.budget_s > 0.0 && elapsed > c.budget_s) {
            o.pass = false;
            o.detail += fmt::format("; over the {:g} s budget", c.budget_s);
        }
        failed += o.pass ? 0 : 1;
        std::cout << fmt::format("{} criterion {}: {} [{:.2f} s] {}\n", o.pass ? "PASS" : "FAIL",
                                 c.id, c.name, elapsed, o.detail)
                  << std::flush;
    }
    std::cout << fmt::format("{}/{} criteria passed\n", criteria.size() - failed, criteria.size());
    return failed;
}
