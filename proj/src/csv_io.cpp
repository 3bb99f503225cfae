#include "windsim/csv_io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>
#include <fmt/os.h>

namespace windsim {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError(fmt::format("write to '{}' failed", path.string()));
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        fields.push_back(line.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return fields;
}

double parse_field(std::string_view s, const std::filesystem::path& path, std::size_t line) {
    double x = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw IoError(fmt::format("{}:{}: bad number '{}'", path.string(), line, s));
    }
    return x;
}

} // namespace

void write_wind_csv(const std::filesystem::path& path, std::span<const WindSample> samples) {
    auto out = open_out(path);
    out << "t_s,vbar_mps,w_mps,v_mps\n";
    for (const auto& s : samples) out << fmt::format("{},{},{},{}\n", s.t, s.vbar, s.w, s.v);
    finish(out, path);
}

void write_trace_csv(const std::filesystem::path& path, const PowerTrace& trace) {
    auto out = open_out(path);
    const bool states = trace.has_states();
    out << (states ? "t_s,turbine,mode,omega_radps,theta_rad,v_mps,p_out_w\n"
                   : "t_s,turbine,v_mps,p_out_w\n");
    fmt::memory_buffer buf;
    for (std::size_t j = 0; j < trace.size(); ++j) {
        for (std::size_t i = 0; i < trace.n_turbines(); ++i) {
            if (states) {
                fmt::format_to(std::back_inserter(buf), "{},{},{},{},{},{},{}\n", trace.time[j], i,
                               mode_index(trace.mode[i][j]), trace.omega[i][j],
                               trace.theta[i][j], trace.v[i][j], trace.p_out[i][j]);
            } else {
                fmt::format_to(std::back_inserter(buf), "{},{},{},{}\n", trace.time[j], i,
                               trace.v[i][j], trace.p_out[i][j]);
            }
        }
        if (buf.size() > (1u << 20)) {
            out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
            buf.clear();
        }
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    finish(out, path);
}

PowerTrace read_trace_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(fmt::format("cannot open trace '{}'", path.string()));
    std::string line;
    if (!std::getline(in, line)) throw IoError(fmt::format("{}: empty file", path.string()));
    const bool states = line == "t_s,turbine,mode,omega_radps,theta_rad,v_mps,p_out_w";
    if (!states && line != "t_s,turbine,v_mps,p_out_w") {
        throw IoError(fmt::format("{}: unrecognised trace header '{}'", path.string(), line));
    }
    const std::size_t width = states ? 7 : 4;

    PowerTrace trace;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != width) {
            throw IoError(fmt::format("{}:{}: expected {} fields", path.string(), line_no, width));
        }
        const double t = parse_field(f[0], path, line_no);
        const auto i = static_cast<std::size_t>(parse_field(f[1], path, line_no));
        if (i == 0) trace.time.push_back(t);
        if (i >= trace.p_out.size()) {
            if (i != trace.p_out.size() || trace.time.size() != 1) {
                throw IoError(fmt::format("{}:{}: turbine index {} out of order", path.string(),
                                          line_no, i));
            }
            trace.p_out.emplace_back();
            trace.v.emplace_back();
            if (states) {
                trace.mode.emplace_back();
                trace.omega.emplace_back();
                trace.theta.emplace_back();
            }
        }
        if (states) {
            const auto m = static_cast<int>(parse_field(f[2], path, line_no));
            if (m < 0 || m > 2) throw IoError(fmt::format("{}:{}: bad mode", path.string(), line_no));
            trace.mode[i].push_back(static_cast<Mode>(m));
            trace.omega[i].push_back(parse_field(f[3], path, line_no));
            trace.theta[i].push_back(parse_field(f[4], path, line_no));
        }
        trace.v[i].push_back(parse_field(f[width - 2], path, line_no));
        trace.p_out[i].push_back(parse_field(f[width - 1], path, line_no));
    }
    if (trace.time.empty()) throw IoError(fmt::format("{}: no samples", path.string()));
    for (const auto& p : trace.p_out) {
        if (p.size() != trace.time.size()) {
            throw IoError(fmt::format("{}: ragged turbine columns", path.string()));
        }
    }
    trace.farm.assign(trace.time.size(), 0.0);
    for (const auto& p : trace.p_out) {
        for (std::size_t j = 0; j < p.size(); ++j) trace.farm[j] += p[j];
    }
    return trace;
}

void write_cdf_csv(const std::filesystem::path& path, const EmpiricalDistribution& dist,
                   std::size_t points) {
    auto out = open_out(path);
    out << "x_w,F\n";
    double last = 0.0;
    bool first = true;
    for (std::size_t k = 0; k < points; ++k) {
        const double prob = static_cast<double>(k) / static_cast<double>(points - 1);
        const double x = dist.quantile(prob);
        if (!first && x == last) continue;
        out << fmt::format("{},{}\n", x, dist.evaluate(x));
        last = x;
        first = false;
    }
    finish(out, path);
}

void write_joint_csv(const std::filesystem::path& path, const JointHistogram& hist) {
    auto out = open_out(path);
    out << "v_lo_mps,v_hi_mps,p_lo_w,p_hi_w,count\n";
    const auto& ve = hist.v_edges();
    const auto& pe = hist.p_edges();
    fmt::memory_buffer buf;
    for (std::size_t iv = 0; iv < hist.v_bins(); ++iv) {
        for (std::size_t ip = 0; ip < hist.p_bins(); ++ip) {
            fmt::format_to(std::back_inserter(buf), "{},{},{},{},{}\n", ve[iv], ve[iv + 1], pe[ip],
                           pe[ip + 1], hist.count(iv, ip));
        }
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    finish(out, path);
}

void write_curve_csv(const std::filesystem::path& path, const PowerCurve& curve) {
    auto out = open_out(path);
    out << "v_mps,p_out_w\n";
    for (std::size_t k = 0; k < curve.v_grid.size(); ++k) {
        out << fmt::format("{},{}\n", curve.v_grid[k], curve.p_values[k]);
    }
    finish(out, path);
}

void write_cp_surface_csv(const std::filesystem::path& path, const TurbineParams& params,
                          double lambda_max, std::size_t lambda_points, double theta_max_deg,
                          std::size_t theta_points) {
    auto out = open_out(path);
    out << "lambda,theta_deg,cp\n";
    for (std::size_t it = 0; it < theta_points; ++it) {
        const double th = theta_points > 1 ? theta_max_deg * static_cast<double>(it) /
                                                 static_cast<double>(theta_points - 1)
                                           : 0.0;
        for (std::size_t il = 0; il < lambda_points; ++il) {
            const double lam = lambda_points > 1 ? lambda_max * static_cast<double>(il) /
                                                       static_cast<double>(lambda_points - 1)
                                                 : 0.0;
            out << fmt::format("{},{},{}\n", lam, th, cp(params, lam, deg_to_rad(th)));
        }
    }
    finish(out, path);
}

void write_summary(const std::filesystem::path& path, const SummaryEntries& entries) {
    auto out = open_out(path);
    for (const auto& [k, v] : entries) out << k << " = " << v << '\n';
    finish(out, path);
}

SummaryEntries read_summary(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(fmt::format("cannot open summary '{}'", path.string()));
    SummaryEntries entries;
    std::string line;
    while (std::getline(in, line)) {
        const auto pos = line.find(" = ");
        if (pos == std::string::npos) continue;
        entries.emplace_back(line.substr(0, pos), line.substr(pos + 3));
    }
    return entries;
}

} // namespace windsim
