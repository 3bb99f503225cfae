#include "windsim/stats.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "windsim/errors.hpp"
#include "windsim/mc_engine.hpp"

namespace windsim {

EmpiricalDistribution EmpiricalDistribution::from_samples(std::vector<double> samples) {
    if (samples.empty()) throw InvalidParameter("empirical distribution needs >= 1 sample");
    for (double x : samples) {
        if (!std::isfinite(x)) throw InvalidParameter("empirical distribution sample not finite");
    }
    std::sort(samples.begin(), samples.end());
    return EmpiricalDistribution(std::move(samples));
}

double EmpiricalDistribution::evaluate(double x) const noexcept {
    const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
    return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double EmpiricalDistribution::quantile(double prob) const {
    if (!(prob >= 0.0 && prob <= 1.0)) {
        throw InvalidParameter(fmt::format("quantile probability {} outside [0, 1]", prob));
    }
    const auto n = static_cast<double>(sorted_.size());
    auto k = static_cast<std::size_t>(std::ceil(prob * n - 1e-12));
    k = std::clamp<std::size_t>(k, 1, sorted_.size());
    return sorted_[k - 1];
}

double EmpiricalDistribution::mean() const noexcept {
    double s = 0.0;
    for (double x : sorted_) s += x;
    return s / static_cast<double>(sorted_.size());
}

double EmpiricalDistribution::stddev() const noexcept {
    const double m = mean();
    double s = 0.0;
    for (double x : sorted_) s += (x - m) * (x - m);
    return sorted_.size() > 1 ? std::sqrt(s / static_cast<double>(sorted_.size() - 1)) : 0.0;
}

double ks_distance(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
    // Merge walk: after consuming every copy of the next support point from
    // both samples, both CDFs are exact at that point.
    const auto xa = a.samples();
    const auto xb = b.samples();
    const auto na = static_cast<double>(xa.size());
    const auto nb = static_cast<double>(xb.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < xa.size() || j < xb.size()) {
        double x;
        if (j >= xb.size() || (i < xa.size() && xa[i] <= xb[j])) {
            x = xa[i];
        } else {
            x = xb[j];
        }
        while (i < xa.size() && xa[i] == x) ++i;
        while (j < xb.size() && xb[j] == x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

std::vector<double> uniform_edges(double lo, double hi, double width) {
    if (!(width > 0.0) || !(hi > lo)) throw InvalidParameter("invalid bin edge specification");
    const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / width - 1e-9));
    std::vector<double> edges;
    edges.reserve(n + 1);
    for (std::size_t i = 0; i <= n; ++i) edges.push_back(lo + static_cast<double>(i) * width);
    return edges;
}

namespace {

void check_edges(const std::vector<double>& e, const char* what) {
    if (e.size() < 2) throw InvalidParameter(fmt::format("{} edges need >= 2 entries", what));
    for (std::size_t i = 1; i < e.size(); ++i) {
        if (!(e[i] > e[i - 1])) {
            throw InvalidParameter(fmt::format("{} edges not strictly ascending", what));
        }
    }
}

std::size_t find_bin(const std::vector<double>& edges, double x) noexcept {
    if (!(x >= edges.front())) return 0; // also catches NaN
    const auto it = std::upper_bound(edges.begin(), edges.end(), x);
    const auto k = static_cast<std::size_t>(it - edges.begin());
    return std::min(k - 1, edges.size() - 2);
}

} // namespace

JointHistogram::JointHistogram(std::vector<double> v_edges, std::vector<double> p_edges)
    : v_edges_(std::move(v_edges)), p_edges_(std::move(p_edges)) {
    check_edges(v_edges_, "wind");
    check_edges(p_edges_, "power");
    counts_.assign(v_bins() * p_bins(), 0);
}

std::size_t JointHistogram::v_bin(double v) const noexcept { return find_bin(v_edges_, v); }
std::size_t JointHistogram::p_bin(double p) const noexcept { return find_bin(p_edges_, p); }

void JointHistogram::add(double v, double p) {
    ++counts_[v_bin(v) * p_bins() + p_bin(p)];
    ++total_;
}

void JointHistogram::merge(const JointHistogram& other) {
    if (other.v_edges_ != v_edges_ || other.p_edges_ != p_edges_) {
        throw InvalidParameter("cannot merge histograms with different edges");
    }
    for (std::size_t k = 0; k < counts_.size(); ++k) counts_[k] += other.counts_[k];
    total_ += other.total_;
}

JointHistogram joint_hist(std::span<const double> v, std::span<const double> p,
                          std::vector<double> v_edges, std::vector<double> p_edges) {
    if (v.size() != p.size()) {
        throw InvalidParameter(fmt::format("joint histogram: {} wind samples vs {} power samples",
                                           v.size(), p.size()));
    }
    JointHistogram h(std::move(v_edges), std::move(p_edges));
    for (std::size_t k = 0; k < v.size(); ++k) h.add(v[k], p[k]);
    return h;
}

Summary summarize(const PowerTrace& trace, double rated_output, double from_time,
                  double zero_threshold) {
    Summary s;
    double sum = 0.0;
    std::size_t zeros = 0;
    std::array<std::size_t, 3> modes{};
    for (std::size_t j = 0; j < trace.size(); ++j) {
        if (trace.time[j] < from_time) continue;
        ++s.samples;
        sum += trace.farm[j];
        if (trace.farm[j] < zero_threshold) ++zeros;
        if (trace.has_states()) {
            for (const auto& m : trace.mode) ++modes[static_cast<std::size_t>(mode_index(m[j]))];
        }
    }
    if (s.samples == 0) throw InvalidParameter("summary of an empty trace");
    const auto n = static_cast<double>(s.samples);
    s.mean_power = sum / n;
    s.capacity_factor =
        s.mean_power / (static_cast<double>(trace.n_turbines()) * rated_output);
    s.p_zero = static_cast<double>(zeros) / n;
    if (trace.has_states()) {
        const double total = n * static_cast<double>(trace.n_turbines());
        s.mode_occupancy = std::array<double, 3>{modes[0] / total, modes[1] / total,
                                                 modes[2] / total};
    }
    return s;
}

} // namespace windsim
