#include "windsim/mc_engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <memory>
#include <thread>

#include <fmt/format.h>

#include "windsim/errors.hpp"

namespace windsim {

std::size_t SimConfig::ticks() const {
    return static_cast<std::size_t>(std::llround(duration / dt()));
}

std::size_t SimConfig::slow_hours() const {
    const double span = static_cast<double>(ticks()) * dt();
    return static_cast<std::size_t>(std::ceil(span / kSecondsPerHour)) + 2;
}

void SimConfig::validate() const {
    if (!(duration >= kSecondsPerHour)) throw InvalidParameter("duration must be >= 3600 s");
    if (n_turbines < 1) throw InvalidParameter("n_turbines must be >= 1");
    if (record_stride < 1) throw InvalidParameter("record_stride must be >= 1");
    if (n_replicates < 1) throw InvalidParameter("n_replicates must be >= 1");
    if (!(warmup >= 0.0 && warmup < duration)) {
        throw InvalidParameter("warmup must be in [0, duration)");
    }
    if (!(curve_v_step > 0.0)) throw InvalidParameter("curve_v_step must be > 0");
    if (!(binning.v_width > 0.0 && binning.v_max > binning.v_width && binning.p_width > 0.0)) {
        throw InvalidParameter("histogram binning must have positive widths");
    }
    wind.validate();
    turbine.validate();
    const double nominal = aero_power(turbine, turbine.v_nom, turbine.omega_nom, 0.0);
    if (std::abs(nominal - turbine.p_g_nom) > 1e-3 * turbine.p_g_nom) {
        throw InvalidParameter(fmt::format(
            "turbine Cp is not calibrated: nominal-point power {} W vs p_g_nom {} W", nominal,
            turbine.p_g_nom));
    }
}

StreamSet streams_for(const SimConfig& config, std::uint64_t replicate) {
    StreamSet s;
    s.slow = derive_stream_key(config.seed, StreamRole::SlowWind, 0, replicate);
    s.turbulence.reserve(config.n_turbines);
    for (std::size_t i = 0; i < config.n_turbines; ++i) {
        s.turbulence.push_back(derive_stream_key(config.seed, StreamRole::Turbulence, i, replicate));
    }
    return s;
}

SlowWindSeries sample_slow_series(const SimConfig& config, std::uint64_t slow_key) {
    NormalStream rng(slow_key);
    return generate_slow_series(config.wind, config.slow_hours(), rng);
}

namespace {

/// Everything one turbine trajectory produces.
struct TurbineRecord {
    std::vector<double> time;
    std::vector<double> v;
    std::vector<double> p_dynamic;
    std::vector<double> p_static;
    std::vector<Mode> mode;
    std::vector<double> omega;
    std::vector<double> theta;
};

struct RunOptions {
    bool dynamic = true;
    const PowerCurve* curve = nullptr;
    bool states = false;
};

/// Advances one turbine through the whole run, feeding the same wind sample
/// to the dynamic model and (when a curve is given) to the static curve.
TurbineRecord run_turbine(const SimConfig& config, std::shared_ptr<const SlowWindSeries> slow,
                          std::uint64_t turbulence_key, const RunOptions& opt) {
    const TurbineParams& tp = config.turbine;
    const double dt = config.dt();
    const std::size_t ticks = config.ticks();
    const std::size_t stride = config.record_stride;
    const std::size_t n_rec = (ticks + stride - 1) / stride;

    TurbineRecord rec;
    rec.time.reserve(n_rec);
    rec.v.reserve(n_rec);
    if (opt.dynamic) rec.p_dynamic.reserve(n_rec);
    if (opt.curve) rec.p_static.reserve(n_rec);
    if (opt.states) {
        rec.mode.reserve(n_rec);
        rec.omega.reserve(n_rec);
        rec.theta.reserve(n_rec);
    }

    WindGenerator wind(config.wind, std::move(slow), turbulence_key);
    HybridState state;
    for (std::size_t k = 0; k < ticks; ++k) {
        const WindSample ws = wind.next();
        if (k == 0) state = initial_state(dt, ws.v);
        double p_dyn = 0.0;
        if (opt.dynamic) {
            p_dyn = step(tp, state, ws.v, dt).p_out;
            if (state.mech && !(std::isfinite(state.mech->omega) && std::isfinite(p_dyn))) {
                throw SimulationError(fmt::format("non-finite state at t = {} s (mode {}, omega {})",
                                                  ws.t, mode_name(state.mode),
                                                  state.mech->omega));
            }
        }
        if (k % stride != 0) continue;
        rec.time.push_back(ws.t);
        rec.v.push_back(ws.v);
        if (opt.dynamic) rec.p_dynamic.push_back(p_dyn);
        if (opt.curve) rec.p_static.push_back(static_power(*opt.curve, ws.v));
        if (opt.states) {
            rec.mode.push_back(state.mode);
            rec.omega.push_back(state.mech ? state.mech->omega : 0.0);
            rec.theta.push_back(state.mech ? state.mech->theta : 0.0);
        }
    }
    return rec;
}

/// Runs task(i) for i in [0, n) on up to `threads` workers. Exceptions are
/// rethrown for the lowest failing index.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& task) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers = std::min<std::size_t>(threads, n);
    std::vector<std::exception_ptr> errors(n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            try {
                task(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    try {
                        task(i);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

PowerTrace assemble(std::vector<TurbineRecord>& recs, bool dynamic, bool states) {
    PowerTrace trace;
    if (recs.empty()) return trace;
    trace.time = recs.front().time;
    const std::size_t n = trace.time.size();
    trace.farm.assign(n, 0.0);
    for (auto& r : recs) {
        auto& p = dynamic ? r.p_dynamic : r.p_static;
        for (std::size_t j = 0; j < n; ++j) trace.farm[j] += p[j];
        trace.p_out.push_back(std::move(p));
        trace.v.push_back(std::move(r.v));
        if (states) {
            trace.mode.push_back(std::move(r.mode));
            trace.omega.push_back(std::move(r.omega));
            trace.theta.push_back(std::move(r.theta));
        }
    }
    return trace;
}

PowerTrace simulate_with(const SimConfig& config, std::uint64_t replicate,
                         const RunOptions& opt) {
    config.validate();
    const StreamSet streams = streams_for(config, replicate);
    auto slow = std::make_shared<const SlowWindSeries>(sample_slow_series(config, streams.slow));
    std::vector<TurbineRecord> recs(config.n_turbines);
    parallel_for(config.n_turbines, config.threads, [&](std::size_t i) {
        recs[i] = run_turbine(config, slow, streams.turbulence[i], opt);
    });
    return assemble(recs, opt.dynamic, opt.states);
}

} // namespace

PowerTrace simulate_turbine(const SimConfig& config, std::uint64_t slow_key,
                            std::uint64_t turbulence_key) {
    SimConfig one = config;
    one.n_turbines = 1;
    one.validate();
    auto slow = std::make_shared<const SlowWindSeries>(sample_slow_series(one, slow_key));
    std::vector<TurbineRecord> recs;
    recs.push_back(run_turbine(one, std::move(slow), turbulence_key,
                               RunOptions{true, nullptr, one.record_states}));
    return assemble(recs, true, one.record_states);
}

PowerTrace simulate_farm(const SimConfig& config, std::uint64_t replicate) {
    return simulate_with(config, replicate, RunOptions{true, nullptr, config.record_states});
}

PowerTrace simulate_static(const SimConfig& config, const PowerCurve& curve,
                           std::uint64_t replicate) {
    return simulate_with(config, replicate, RunOptions{false, &curve, false});
}

namespace {

Summary summarize_farm(const std::vector<double>& farm, std::size_t n_turbines,
                       double rated_output) {
    Summary s;
    s.samples = farm.size();
    if (farm.empty()) return s;
    double sum = 0.0;
    std::size_t zeros = 0;
    for (double p : farm) {
        sum += p;
        if (p < kZeroPowerThreshold) ++zeros;
    }
    s.mean_power = sum / static_cast<double>(farm.size());
    s.capacity_factor = s.mean_power / (static_cast<double>(n_turbines) * rated_output);
    s.p_zero = static_cast<double>(zeros) / static_cast<double>(farm.size());
    return s;
}

/// Per-task output of a campaign: float power channels plus histograms.
struct CampaignTask {
    std::vector<float> p_dynamic;
    std::vector<float> p_static;
    std::array<std::uint64_t, 3> modes{};
    double v_sum = 0.0;
    std::size_t v_count = 0;
    std::optional<JointHistogram> joint_dynamic;
    std::optional<JointHistogram> joint_static;
};

} // namespace

CampaignResult run_campaign(const SimConfig& config) {
    config.validate();
    const PowerCurve curve = build_curve(config.turbine, config.curve_v_step, config.static_cutout);
    const auto v_edges = uniform_edges(0.0, config.binning.v_max, config.binning.v_width);
    const auto p_edges = uniform_edges(0.0, 1.2 * grid_power(config.turbine, config.turbine.p_g_nom),
                                       config.binning.p_width);

    const std::size_t n_rep = config.n_replicates;
    const std::size_t n_turb = config.n_turbines;
    std::vector<std::shared_ptr<const SlowWindSeries>> slow(n_rep);
    std::vector<StreamSet> streams(n_rep);
    for (std::size_t r = 0; r < n_rep; ++r) {
        streams[r] = streams_for(config, r);
        slow[r] = std::make_shared<const SlowWindSeries>(sample_slow_series(config, streams[r].slow));
    }

    std::vector<CampaignTask> tasks(n_rep * n_turb);
    std::vector<double> time;
    parallel_for(tasks.size(), config.threads, [&](std::size_t idx) {
        const std::size_t r = idx / n_turb;
        const std::size_t i = idx % n_turb;
        TurbineRecord rec = run_turbine(config, slow[r], streams[r].turbulence[i],
                                        RunOptions{true, &curve, true});
        CampaignTask& t = tasks[idx];
        t.joint_dynamic.emplace(v_edges, p_edges);
        t.joint_static.emplace(v_edges, p_edges);
        t.p_dynamic.reserve(rec.time.size());
        t.p_static.reserve(rec.time.size());
        for (std::size_t j = 0; j < rec.time.size(); ++j) {
            if (rec.time[j] < config.warmup) continue;
            t.p_dynamic.push_back(static_cast<float>(rec.p_dynamic[j]));
            t.p_static.push_back(static_cast<float>(rec.p_static[j]));
            t.joint_dynamic->add(rec.v[j], rec.p_dynamic[j]);
            t.joint_static->add(rec.v[j], rec.p_static[j]);
            ++t.modes[static_cast<std::size_t>(mode_index(rec.mode[j]))];
            t.v_sum += rec.v[j];
            ++t.v_count;
        }
    });

    JointHistogram joint_dyn(v_edges, p_edges);
    JointHistogram joint_st(v_edges, p_edges);
    std::vector<double> pooled_dyn;
    std::vector<double> pooled_st;
    std::vector<ReplicateResult> reps;
    double v_sum = 0.0;
    std::size_t v_count = 0;
    const double rated = grid_power(config.turbine, config.turbine.p_g_nom);
    const double norm = 1.0 / static_cast<double>(n_turb);
    for (std::size_t r = 0; r < n_rep; ++r) {
        const std::size_t n = tasks[r * n_turb].p_dynamic.size();
        std::vector<double> farm_dyn(n, 0.0);
        std::vector<double> farm_st(n, 0.0);
        std::array<std::uint64_t, 3> modes{};
        for (std::size_t i = 0; i < n_turb; ++i) {
            const CampaignTask& t = tasks[r * n_turb + i];
            for (std::size_t j = 0; j < n; ++j) {
                farm_dyn[j] += t.p_dynamic[j];
                farm_st[j] += t.p_static[j];
            }
            for (std::size_t m = 0; m < 3; ++m) modes[m] += t.modes[m];
            joint_dyn.merge(*t.joint_dynamic);
            joint_st.merge(*t.joint_static);
            v_sum += t.v_sum;
            v_count += t.v_count;
        }
        ReplicateResult rep;
        rep.dynamic = summarize_farm(farm_dyn, n_turb, rated);
        rep.steady = summarize_farm(farm_st, n_turb, rated);
        const double total_modes = static_cast<double>(modes[0] + modes[1] + modes[2]);
        rep.dynamic.mode_occupancy = std::array<double, 3>{
            modes[0] / total_modes, modes[1] / total_modes, modes[2] / total_modes};
        for (double& p : farm_dyn) p *= norm;
        for (double& p : farm_st) p *= norm;
        rep.ks = ks_distance(ecdf(farm_dyn), ecdf(farm_st));
        reps.push_back(rep);
        pooled_dyn.insert(pooled_dyn.end(), farm_dyn.begin(), farm_dyn.end());
        pooled_st.insert(pooled_st.end(), farm_st.begin(), farm_st.end());
    }

    CampaignResult result{ecdf(std::move(pooled_dyn)), ecdf(std::move(pooled_st)),
                          std::move(joint_dyn), std::move(joint_st), curve, std::move(reps),
                          0.0, v_count ? v_sum / static_cast<double>(v_count) : 0.0};
    result.ks = ks_distance(result.dynamic, result.steady);
    return result;
}

} // namespace windsim
