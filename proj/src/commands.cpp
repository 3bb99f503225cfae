#include "windsim/commands.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "windsim/config.hpp"
#include "windsim/csv_io.hpp"
#include "windsim/errors.hpp"

namespace windsim {

namespace fs = std::filesystem;

namespace {

/// Files of one command. Unless commit() is reached, everything written so
/// far is deleted when the set goes out of scope.
class OutputSet {
  public:
    explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec || !fs::is_directory(dir_)) {
            throw IoError(fmt::format("cannot create output directory '{}'", dir_.string()));
        }
    }
    OutputSet(const OutputSet&) = delete;
    OutputSet& operator=(const OutputSet&) = delete;
    ~OutputSet() {
        if (committed_) return;
        std::error_code ec;
        for (const auto& p : files_) {
            if (fs::is_regular_file(p, ec)) fs::remove(p, ec);
        }
    }

    /// Path for `name`, registered for cleanup.
    fs::path add(const std::string& name) {
        files_.push_back(dir_ / name);
        return files_.back();
    }

    /// Checks that every file exists and has a header line, then keeps them.
    void commit() {
        for (const auto& p : files_) {
            std::ifstream in(p);
            std::string first;
            if (!in || !std::getline(in, first) || first.empty()) {
                throw IoError(fmt::format("output '{}' missing or empty", p.string()));
            }
        }
        committed_ = true;
    }

    [[nodiscard]] const std::vector<fs::path>& files() const noexcept { return files_; }

  private:
    fs::path dir_;
    std::vector<fs::path> files_;
    bool committed_ = false;
};

struct CommonOptions {
    std::string config_path;
    std::uint64_t seed = 0;
    double mean = 0.0;
    std::size_t turbines = 0;
    double duration_hours = 0.0;
    double dt = 0.0;
    std::string out_dir;
    std::string model;
    unsigned threads = 0;
    std::size_t replicates = 0;

    CLI::Option* seed_opt = nullptr;
    CLI::Option* mean_opt = nullptr;
    CLI::Option* turbines_opt = nullptr;
    CLI::Option* duration_opt = nullptr;
    CLI::Option* dt_opt = nullptr;
    CLI::Option* out_opt = nullptr;
    CLI::Option* model_opt = nullptr;
    CLI::Option* threads_opt = nullptr;
    CLI::Option* replicates_opt = nullptr;
};

void add_common(CLI::App& cmd, CommonOptions& o) {
    cmd.add_option("--config", o.config_path, "INI campaign config");
    o.seed_opt = cmd.add_option("--seed", o.seed, "root random seed");
    o.mean_opt = cmd.add_option("--mean", o.mean, "target annual mean wind speed [m/s]")
                     ->check(CLI::PositiveNumber);
    o.turbines_opt =
        cmd.add_option("--turbines", o.turbines, "farm size")->check(CLI::Range(1, 100000));
    o.duration_opt = cmd.add_option("--duration-hours", o.duration_hours, "simulated time [h]")
                         ->check(CLI::Range(1.0, 1e7));
    o.dt_opt = cmd.add_option("--dt", o.dt, "integration step [s]")->check(CLI::PositiveNumber);
    o.out_opt = cmd.add_option("--out-dir", o.out_dir, "output directory");
    o.model_opt = cmd.add_option("--model", o.model, "dynamic, static or both")
                      ->check(CLI::IsMember({"dynamic", "static", "both"}));
    o.threads_opt = cmd.add_option("--threads", o.threads, "worker threads, 0 = all cores");
    o.replicates_opt = cmd.add_option("--replicates", o.replicates, "independent replicates")
                           ->check(CLI::Range(1, 100000));
}

CampaignConfig load(const CommonOptions& o) {
    CampaignConfig c = o.config_path.empty() ? default_config() : parse_config(o.config_path);
    if (o.seed_opt->count()) c.sim.seed = o.seed;
    if (o.mean_opt->count()) c.sim.wind.target_annual_mean = o.mean;
    if (o.turbines_opt->count()) c.sim.n_turbines = o.turbines;
    if (o.duration_opt->count()) c.sim.duration = o.duration_hours * kSecondsPerHour;
    if (o.dt_opt->count()) c.sim.wind.dt = o.dt;
    if (o.out_opt->count()) c.out_dir = o.out_dir;
    if (o.threads_opt->count()) c.sim.threads = o.threads;
    if (o.replicates_opt->count()) c.sim.n_replicates = o.replicates;
    if (o.model_opt->count()) {
        c.model = o.model == "dynamic"  ? ModelSelection::Dynamic
                  : o.model == "static" ? ModelSelection::Static
                                        : ModelSelection::Both;
    }
    finalize_config(c);
    return c;
}

std::string str(double x) { return fmt::format("{}", x); }

void add_summary(SummaryEntries& e, const std::string& prefix, const Summary& s) {
    e.emplace_back(prefix + "mean_power_w", str(s.mean_power));
    e.emplace_back(prefix + "capacity_factor", str(s.capacity_factor));
    e.emplace_back(prefix + "p_zero", str(s.p_zero));
    if (s.mode_occupancy) {
        e.emplace_back(prefix + "mode_no_load", str((*s.mode_occupancy)[0]));
        e.emplace_back(prefix + "mode_partial_load", str((*s.mode_occupancy)[1]));
        e.emplace_back(prefix + "mode_full_load", str((*s.mode_occupancy)[2]));
    }
}

void add_run_info(SummaryEntries& e, const CampaignConfig& c) {
    e.emplace_back("seed", fmt::format("{}", c.sim.seed));
    e.emplace_back("target_mean_mps", str(c.sim.wind.target_annual_mean));
    e.emplace_back("n_turbines", fmt::format("{}", c.sim.n_turbines));
    e.emplace_back("n_replicates", fmt::format("{}", c.sim.n_replicates));
    e.emplace_back("duration_hours", str(c.sim.duration / kSecondsPerHour));
    e.emplace_back("dt_s", str(c.sim.dt()));
    e.emplace_back("record_interval_s", str(c.sim.dt() * static_cast<double>(c.sim.record_stride)));
    e.emplace_back("warmup_s", str(c.sim.warmup));
    e.emplace_back("cp_scale", str(c.sim.turbine.cp_scale));
}

/// Farm output divided by farm size, samples at or after the warm-up.
void append_normalized(std::vector<double>& out, const PowerTrace& trace, double warmup) {
    const double norm = 1.0 / static_cast<double>(trace.n_turbines());
    for (std::size_t j = 0; j < trace.size(); ++j) {
        if (trace.time[j] >= warmup) out.push_back(trace.farm[j] * norm);
    }
}

void add_pairs(JointHistogram& h, const PowerTrace& trace, double warmup) {
    for (std::size_t i = 0; i < trace.n_turbines(); ++i) {
        for (std::size_t j = 0; j < trace.size(); ++j) {
            if (trace.time[j] >= warmup) h.add(trace.v[i][j], trace.p_out[i][j]);
        }
    }
}

JointHistogram empty_joint(const SimConfig& sim) {
    return JointHistogram(
        uniform_edges(0.0, sim.binning.v_max, sim.binning.v_width),
        uniform_edges(0.0, 1.2 * grid_power(sim.turbine, sim.turbine.p_g_nom), sim.binning.p_width));
}

void dump_wind(const fs::path& path, const SimConfig& sim) {
    const StreamSet streams = streams_for(sim, 0);
    auto slow = std::make_shared<const SlowWindSeries>(sample_slow_series(sim, streams.slow));
    WindGenerator gen(sim.wind, slow, streams.turbulence.front());
    std::vector<WindSample> samples;
    const std::size_t ticks = sim.ticks();
    samples.reserve(ticks / sim.record_stride + 1);
    for (std::size_t k = 0; k < ticks; ++k) {
        const WindSample s = gen.next();
        if (k % sim.record_stride == 0) samples.push_back(s);
    }
    write_wind_csv(path, samples);
}

int cmd_simulate(const CampaignConfig& c, bool wind_csv, std::ostream& out) {
    OutputSet files(c.out_dir);
    const bool dyn = c.model != ModelSelection::Static;
    const bool sta = c.model != ModelSelection::Dynamic;
    SimConfig sim = c.sim;
    sim.record_states = true;
    const PowerCurve curve = build_curve(sim.turbine, sim.curve_v_step, sim.static_cutout);

    std::vector<double> cdf_dyn;
    std::vector<double> cdf_st;
    JointHistogram joint_dyn = empty_joint(sim);
    JointHistogram joint_st = empty_joint(sim);
    SummaryEntries summary;
    add_run_info(summary, c);
    const double rated = grid_power(sim.turbine, sim.turbine.p_g_nom);

    for (std::size_t r = 0; r < sim.n_replicates; ++r) {
        const std::string tag = sim.n_replicates > 1 ? fmt::format("rep{}.", r) : "";
        if (dyn) {
            const PowerTrace trace = simulate_farm(sim, r);
            if (r == 0) write_trace_csv(files.add("trace.csv"), trace);
            append_normalized(cdf_dyn, trace, sim.warmup);
            add_pairs(joint_dyn, trace, sim.warmup);
            add_summary(summary, tag + "dynamic.", summarize(trace, rated, sim.warmup));
        }
        if (sta) {
            const PowerTrace trace = simulate_static(sim, curve, r);
            if (r == 0) write_trace_csv(files.add(dyn ? "trace_static.csv" : "trace.csv"), trace);
            append_normalized(cdf_st, trace, sim.warmup);
            add_pairs(joint_st, trace, sim.warmup);
            add_summary(summary, tag + "static.", summarize(trace, rated, sim.warmup));
        }
    }
    if (dyn) {
        write_cdf_csv(files.add("cdf_dynamic.csv"), ecdf(std::move(cdf_dyn)), c.cdf_points);
        write_joint_csv(files.add("joint_hist.csv"), joint_dyn);
    }
    if (sta) {
        write_cdf_csv(files.add("cdf_static.csv"), ecdf(std::move(cdf_st)), c.cdf_points);
        write_joint_csv(files.add(dyn ? "joint_hist_static.csv" : "joint_hist.csv"), joint_st);
    }
    if (wind_csv) dump_wind(files.add("wind.csv"), sim);
    write_summary(files.add("summary.txt"), summary);
    files.commit();
    for (const auto& f : files.files()) out << "wrote " << f.string() << '\n';
    return kExitOk;
}

int cmd_curve(const CampaignConfig& c, bool surface, std::ostream& out) {
    OutputSet files(c.out_dir);
    const PowerCurve curve = build_curve(c.sim.turbine, c.sim.curve_v_step, c.sim.static_cutout);
    write_curve_csv(files.add("power_curve.csv"), curve);
    if (surface) {
        write_cp_surface_csv(files.add("cp_surface.csv"), c.sim.turbine, 15.0, 151,
                             rad_to_deg(c.sim.turbine.theta_max), 31);
    }
    files.commit();
    for (const auto& f : files.files()) out << "wrote " << f.string() << '\n';
    return kExitOk;
}

int cmd_compare(const CampaignConfig& c, std::ostream& out) {
    OutputSet files(c.out_dir);
    const CampaignResult res = run_campaign(c.sim);
    write_cdf_csv(files.add("cdf_dynamic.csv"), res.dynamic, c.cdf_points);
    write_cdf_csv(files.add("cdf_static.csv"), res.steady, c.cdf_points);
    write_joint_csv(files.add("joint_hist.csv"), res.joint_dynamic);
    write_joint_csv(files.add("joint_hist_static.csv"), res.joint_static);
    write_curve_csv(files.add("power_curve.csv"), res.curve);

    SummaryEntries summary;
    add_run_info(summary, c);
    summary.emplace_back("ks_distance", str(res.ks));
    summary.emplace_back("wind_mean_mps", str(res.wind_mean));
    summary.emplace_back("dynamic.samples", fmt::format("{}", res.dynamic.count()));
    summary.emplace_back("dynamic.normalized_mean_w", str(res.dynamic.mean()));
    summary.emplace_back("dynamic.normalized_std_w", str(res.dynamic.stddev()));
    summary.emplace_back("static.normalized_mean_w", str(res.steady.mean()));
    summary.emplace_back("static.normalized_std_w", str(res.steady.stddev()));
    for (std::size_t r = 0; r < res.replicates.size(); ++r) {
        const auto& rep = res.replicates[r];
        const std::string tag = fmt::format("rep{}.", r);
        summary.emplace_back(tag + "ks_distance", str(rep.ks));
        add_summary(summary, tag + "dynamic.", rep.dynamic);
        add_summary(summary, tag + "static.", rep.steady);
    }
    write_summary(files.add("summary.txt"), summary);
    files.commit();
    out << fmt::format("ks_distance = {}\n", res.ks);
    for (const auto& f : files.files()) out << "wrote " << f.string() << '\n';
    return kExitOk;
}

int cmd_stats(const CampaignConfig& c, const std::string& input, std::ostream& out) {
    if (!fs::exists(input)) {
        throw ConfigError(ConfigErrorKind::MissingFile, "",
                          fmt::format("input trace '{}' not found", input));
    }
    const PowerTrace trace = read_trace_csv(input);
    OutputSet files(c.out_dir);
    const double rated = grid_power(c.sim.turbine, c.sim.turbine.p_g_nom);
    const double from = trace.time.back() >= c.sim.warmup ? c.sim.warmup : 0.0;
    const Summary s = summarize(trace, rated, from);
    std::vector<double> samples;
    append_normalized(samples, trace, from);
    const std::string kind = trace.has_states() ? "dynamic" : "static";
    write_cdf_csv(files.add(fmt::format("cdf_{}.csv", kind)), ecdf(std::move(samples)),
                  c.cdf_points);
    SummaryEntries summary;
    summary.emplace_back("input", input);
    summary.emplace_back("n_turbines", fmt::format("{}", trace.n_turbines()));
    summary.emplace_back("from_time_s", str(from));
    summary.emplace_back("samples", fmt::format("{}", s.samples));
    add_summary(summary, kind + ".", s);
    write_summary(files.add("summary.txt"), summary);
    files.commit();
    for (const auto& [k, v] : summary) out << k << " = " << v << '\n';
    return kExitOk;
}

int config_exit(ConfigErrorKind kind) {
    switch (kind) {
    case ConfigErrorKind::MissingFile: return kExitMissingFile;
    case ConfigErrorKind::Syntax: return kExitSyntax;
    case ConfigErrorKind::UnknownKey: return kExitUnknownKey;
    case ConfigErrorKind::Invariant: return kExitInvariant;
    }
    return kExitInvariant;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Stochastic hybrid wind turbine simulator"};
    app.require_subcommand(1);

    CommonOptions sim_o, curve_o, cmp_o, stats_o;
    bool wind_csv = false;
    bool surface = false;
    std::string input;

    auto* sim = app.add_subcommand("simulate", "run a campaign and write traces and CDFs");
    add_common(*sim, sim_o);
    sim->add_flag("--dump-wind", wind_csv, "also write wind.csv for turbine 0");
    auto* curve = app.add_subcommand("curve", "write the steady-state power curve");
    add_common(*curve, curve_o);
    curve->add_flag("--cp-surface", surface, "also write cp_surface.csv");
    auto* cmp = app.add_subcommand("compare", "paired dynamic/static campaign");
    add_common(*cmp, cmp_o);
    auto* stats = app.add_subcommand("stats", "summarize an existing trace CSV");
    add_common(*stats, stats_o);
    stats->add_option("--input", input, "trace CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*sim) return cmd_simulate(load(sim_o), wind_csv, out);
        if (*curve) return cmd_curve(load(curve_o), surface, out);
        if (*cmp) return cmd_compare(load(cmp_o), out);
        return cmd_stats(load(stats_o), input, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return config_exit(e.kind());
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return kExitIo;
    } catch (const InvalidParameter& e) {
        err << "invalid parameter: " << e.what() << '\n';
        return kExitInvariant;
    } catch (const std::exception& e) {
        err << "simulation failed: " << e.what() << '\n';
        return kExitSimulation;
    }
}

} // namespace windsim
