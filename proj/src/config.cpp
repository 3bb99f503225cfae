#include "windsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "windsim/errors.hpp"

namespace windsim {

void CampaignConfig::sync_stride() {
    const double ratio = record_interval / sim.dt();
    sim.record_stride = static_cast<std::size_t>(std::max(1.0, std::round(ratio)));
}

namespace {

using Setter = std::function<void(CampaignConfig&, const std::string& key, const std::string&)>;

[[noreturn]] void invariant(const std::string& key, std::string_view what) {
    throw ConfigError(ConfigErrorKind::Invariant, key, fmt::format("{}: {}", key, what));
}

double to_double(const std::string& key, const std::string& text) {
    double out = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last || !std::isfinite(out)) {
        throw ConfigError(ConfigErrorKind::Syntax, key,
                          fmt::format("{}: '{}' is not a finite number", key, text));
    }
    return out;
}

std::uint64_t to_uint(const std::string& key, const std::string& text) {
    std::uint64_t out = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last) {
        throw ConfigError(ConfigErrorKind::Syntax, key,
                          fmt::format("{}: '{}' is not a non-negative integer", key, text));
    }
    return out;
}

/// Numeric key with an optional range predicate and unit conversion.
Setter number(std::function<double&(CampaignConfig&)> field,
              std::function<bool(double)> ok = {}, std::string_view rule = {},
              double (*convert)(double) = nullptr) {
    return [=](CampaignConfig& c, const std::string& key, const std::string& text) {
        const double x = to_double(key, text);
        if (ok && !ok(x)) invariant(key, rule);
        field(c) = convert ? convert(x) : x;
    };
}

bool positive(double x) { return x > 0.0; }
bool non_negative(double x) { return x >= 0.0; }

const std::map<std::string, Setter>& key_table() {
    static const std::map<std::string, Setter> table = [] {
        std::map<std::string, Setter> t;
        // mc_engine
        t["mc_engine.seed"] = [](CampaignConfig& c, const std::string& k, const std::string& v) {
            c.sim.seed = to_uint(k, v);
        };
        t["mc_engine.duration_hours"] = number(
            [](CampaignConfig& c) -> double& { return c.sim.duration; },
            [](double h) { return h >= 1.0; }, "must be >= 1 hour",
            [](double h) { return h * kSecondsPerHour; });
        t["mc_engine.n_turbines"] = [](CampaignConfig& c, const std::string& k,
                                       const std::string& v) {
            const auto n = to_uint(k, v);
            if (n < 1) invariant(k, "must be >= 1");
            c.sim.n_turbines = n;
        };
        t["mc_engine.record_interval_s"] = number(
            [](CampaignConfig& c) -> double& { return c.record_interval; }, positive,
            "must be > 0");
        t["mc_engine.n_replicates"] = [](CampaignConfig& c, const std::string& k,
                                         const std::string& v) {
            const auto n = to_uint(k, v);
            if (n < 1) invariant(k, "must be >= 1");
            c.sim.n_replicates = n;
        };
        t["mc_engine.warmup_hours"] = number(
            [](CampaignConfig& c) -> double& { return c.sim.warmup; }, non_negative,
            "must be >= 0", [](double h) { return h * kSecondsPerHour; });
        t["mc_engine.threads"] = [](CampaignConfig& c, const std::string& k,
                                    const std::string& v) {
            c.sim.threads = static_cast<unsigned>(to_uint(k, v));
        };

        // wind_model
        auto wind = [](auto member) {
            return [member](CampaignConfig& c) -> double& { return c.sim.wind.*member; };
        };
        t["wind_model.dt_s"] = number(wind(&WindModelParams::dt), positive, "must be > 0");
        t["wind_model.length_scale_m"] =
            number(wind(&WindModelParams::length_scale), positive, "must be > 0");
        t["wind_model.kappa"] = number(
            wind(&WindModelParams::kappa), [](double k) { return k >= 0.0 && k < 1.0; },
            "must be in [0, 1)");
        t["wind_model.target_annual_mean_mps"] =
            number(wind(&WindModelParams::target_annual_mean), positive, "must be > 0");
        t["wind_model.vbar_floor_mps"] =
            number(wind(&WindModelParams::vbar_floor), positive, "must be > 0");
        t["wind_model.burn_in_hours"] = [](CampaignConfig& c, const std::string& k,
                                           const std::string& v) {
            c.sim.wind.burn_in_hours = static_cast<int>(to_uint(k, v));
        };
        t["wind_model.fixed_mean_mps"] = [](CampaignConfig& c, const std::string& k,
                                            const std::string& v) {
            const double x = to_double(k, v);
            if (x < 0.0) invariant(k, "must be >= 0");
            c.sim.wind.fixed_mean = x;
        };
        t["wind_model.mean_targeting"] = [](CampaignConfig& c, const std::string& k,
                                            const std::string& v) {
            if (v == "shift") {
                c.sim.wind.targeting = MeanTargeting::Shift;
            } else if (v == "scale") {
                c.sim.wind.targeting = MeanTargeting::Scale;
            } else {
                invariant(k, "must be 'shift' or 'scale'");
            }
        };

        // arma
        auto arma = [](auto get) {
            return [get](CampaignConfig& c) -> double& { return get(c.sim.wind.arma); };
        };
        t["arma.phi1"] = number(arma([](ArmaParams& a) -> double& { return a.phi[0]; }));
        t["arma.phi2"] = number(arma([](ArmaParams& a) -> double& { return a.phi[1]; }));
        t["arma.phi3"] = number(arma([](ArmaParams& a) -> double& { return a.phi[2]; }));
        t["arma.theta1"] = number(arma([](ArmaParams& a) -> double& { return a.theta[0]; }));
        t["arma.theta2"] = number(arma([](ArmaParams& a) -> double& { return a.theta[1]; }));
        t["arma.sigma_alpha"] = number(
            arma([](ArmaParams& a) -> double& { return a.sigma_alpha; }), positive,
            "must be > 0");
        t["arma.base_mean_mps"] = number(
            arma([](ArmaParams& a) -> double& { return a.base_mean; }), positive, "must be > 0");
        t["arma.base_std_mps"] = number(
            arma([](ArmaParams& a) -> double& { return a.base_std; }), positive, "must be > 0");

        // turbine
        auto turb = [](auto member) {
            return [member](CampaignConfig& c) -> double& { return c.sim.turbine.*member; };
        };
        auto cpc = [](auto member) {
            return [member](CampaignConfig& c) -> double& {
                return c.sim.turbine.cp_coeffs.*member;
            };
        };
        constexpr auto rpm = [](double x) { return rpm_to_radps(x); };
        constexpr auto deg = [](double x) { return deg_to_rad(x); };
        t["turbine.rotor_radius_m"] =
            number(turb(&TurbineParams::rotor_radius), positive, "must be > 0");
        t["turbine.inertia_kgm2"] = number(turb(&TurbineParams::inertia), positive, "must be > 0");
        t["turbine.omega_min_rpm"] =
            number(turb(&TurbineParams::omega_min), positive, "must be > 0", rpm);
        t["turbine.omega_nom_rpm"] =
            number(turb(&TurbineParams::omega_nom), positive, "must be > 0", rpm);
        t["turbine.p_g_nom_w"] = number(turb(&TurbineParams::p_g_nom), positive, "must be > 0");
        t["turbine.v_nom_mps"] = number(turb(&TurbineParams::v_nom), positive, "must be > 0");
        t["turbine.v_cut_in_mps"] = number(turb(&TurbineParams::v_cut_in), positive, "must be > 0");
        t["turbine.v_restart_mps"] =
            number(turb(&TurbineParams::v_restart), positive, "must be > 0");
        t["turbine.v5_cutoff_mps"] =
            number(turb(&TurbineParams::v5_cutoff), positive, "must be > 0");
        t["turbine.v60_cutoff_mps"] =
            number(turb(&TurbineParams::v60_cutoff), positive, "must be > 0");
        t["turbine.air_density_kgm3"] =
            number(turb(&TurbineParams::air_density), positive, "must be > 0");
        t["turbine.efficiency"] = number(
            turb(&TurbineParams::efficiency), [](double e) { return e > 0.0 && e <= 1.0; },
            "must be in (0, 1]");
        t["turbine.pitch_gain"] =
            number(turb(&TurbineParams::pitch_gain), non_negative, "must be >= 0");
        t["turbine.theta_max_deg"] =
            number(turb(&TurbineParams::theta_max), positive, "must be > 0", deg);
        t["turbine.pitch_rate_min_degps"] = number(
            turb(&TurbineParams::pitch_rate_min), [](double r) { return r < 0.0; },
            "must be < 0", deg);
        t["turbine.pitch_rate_max_degps"] =
            number(turb(&TurbineParams::pitch_rate_max), positive, "must be > 0", deg);
        t["turbine.cp_c1"] = number(cpc(&CpCoefficients::c1));
        t["turbine.cp_c2"] = number(cpc(&CpCoefficients::c2));
        t["turbine.cp_c3"] = number(cpc(&CpCoefficients::c3));
        t["turbine.cp_c4"] = number(cpc(&CpCoefficients::c4));
        t["turbine.cp_c5"] = number(cpc(&CpCoefficients::c5));
        t["turbine.cp_c6"] = number(cpc(&CpCoefficients::c6));
        t["turbine.cp_c7"] = number(cpc(&CpCoefficients::c7));
        t["turbine.cp_c8"] = number(cpc(&CpCoefficients::c8));
        t["turbine.cp_exponent"] = number(cpc(&CpCoefficients::x));

        // steady_curve
        t["steady_curve.v_step_mps"] = number(
            [](CampaignConfig& c) -> double& { return c.sim.curve_v_step; }, positive,
            "must be > 0");
        t["steady_curve.cutout"] = [](CampaignConfig& c, const std::string& k,
                                      const std::string& v) {
            if (v == "slow") {
                c.sim.static_cutout = StaticCutout::Slow;
            } else if (v == "fast") {
                c.sim.static_cutout = StaticCutout::Fast;
            } else {
                invariant(k, "must be 'slow' or 'fast'");
            }
        };

        // stats
        t["stats.v_bin_mps"] = number(
            [](CampaignConfig& c) -> double& { return c.sim.binning.v_width; }, positive,
            "must be > 0");
        t["stats.v_max_mps"] = number(
            [](CampaignConfig& c) -> double& { return c.sim.binning.v_max; }, positive,
            "must be > 0");
        t["stats.p_bin_w"] = number(
            [](CampaignConfig& c) -> double& { return c.sim.binning.p_width; }, positive,
            "must be > 0");
        t["stats.cdf_points"] = [](CampaignConfig& c, const std::string& k,
                                   const std::string& v) {
            const auto n = to_uint(k, v);
            if (n < 2) invariant(k, "must be >= 2");
            c.cdf_points = n;
        };

        // cli
        t["cli.out_dir"] = [](CampaignConfig& c, const std::string&, const std::string& v) {
            c.out_dir = v;
        };
        t["cli.model"] = [](CampaignConfig& c, const std::string& k, const std::string& v) {
            if (v == "dynamic") {
                c.model = ModelSelection::Dynamic;
            } else if (v == "static") {
                c.model = ModelSelection::Static;
            } else if (v == "both") {
                c.model = ModelSelection::Both;
            } else {
                invariant(k, "must be 'dynamic', 'static' or 'both'");
            }
        };
        return t;
    }();
    return table;
}

CampaignConfig from_tree(const boost::property_tree::ptree& tree) {
    CampaignConfig config;
    config.sim.turbine = TurbineParams{};
    const auto& table = key_table();
    for (const auto& [section, body] : tree) {
        if (!body.data().empty()) {
            throw ConfigError(ConfigErrorKind::UnknownKey, section,
                              fmt::format("unknown top-level key '{}' (keys belong in a section)",
                                          section));
        }
        const bool known_section = std::any_of(table.begin(), table.end(), [&](const auto& kv) {
            return kv.first.starts_with(section + ".");
        });
        if (!known_section) {
            throw ConfigError(ConfigErrorKind::UnknownKey, section,
                              fmt::format("unknown section '[{}]'", section));
        }
        for (const auto& [name, node] : body) {
            const std::string key = section + "." + name;
            const auto it = table.find(key);
            if (it == table.end()) {
                throw ConfigError(ConfigErrorKind::UnknownKey, key,
                                  fmt::format("unknown key '{}'", key));
            }
            it->second(config, key, node.get_value<std::string>());
        }
    }
    finalize_config(config);
    return config;
}

} // namespace

void finalize_config(CampaignConfig& config) {
    config.sync_stride();
    try {
        config.sim.turbine.cp_scale = 1.0;
        config.sim.turbine.validate();
        config.sim.turbine = calibrated(config.sim.turbine);
        config.sim.validate();
    } catch (const CalibrationError& e) {
        throw ConfigError(ConfigErrorKind::Invariant, "turbine", e.what());
    } catch (const InvalidParameter& e) {
        throw ConfigError(ConfigErrorKind::Invariant, "", e.what());
    }
}

CampaignConfig default_config() { return parse_config_text(""); }

CampaignConfig parse_config_text(std::string_view text) {
    boost::property_tree::ptree tree;
    std::istringstream in{std::string(text)};
    try {
        boost::property_tree::ini_parser::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(ConfigErrorKind::Syntax, "",
                          fmt::format("line {}: {}", e.line(), e.message()));
    }
    return from_tree(tree);
}

CampaignConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(ConfigErrorKind::MissingFile, "",
                          fmt::format("cannot open config file '{}'", path.string()));
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

} // namespace windsim
