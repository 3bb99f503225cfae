// Empirical distributions and model comparison metrics.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace windsim {

/// Right-continuous empirical CDF over a sorted copy of the samples.
class EmpiricalDistribution {
  public:
    /// Throws InvalidParameter on empty or non-finite input.
    static EmpiricalDistribution from_samples(std::vector<double> samples);

    /// F(x) = #{samples <= x} / n.
    [[nodiscard]] double evaluate(double x) const noexcept;
    /// Smallest sample x with F(x) >= prob, prob in [0, 1].
    [[nodiscard]] double quantile(double prob) const;

    [[nodiscard]] std::size_t count() const noexcept { return sorted_.size(); }
    [[nodiscard]] std::span<const double> samples() const noexcept { return sorted_; }
    [[nodiscard]] double mean() const noexcept;
    [[nodiscard]] double stddev() const noexcept;

  private:
    explicit EmpiricalDistribution(std::vector<double> sorted) : sorted_(std::move(sorted)) {}
    std::vector<double> sorted_;
};

[[nodiscard]] inline EmpiricalDistribution ecdf(std::vector<double> samples) {
    return EmpiricalDistribution::from_samples(std::move(samples));
}

/// sup_x |F_a(x) - F_b(x)|, evaluated at every point of the merged support.
[[nodiscard]] double ks_distance(const EmpiricalDistribution& a, const EmpiricalDistribution& b);

/// Evenly spaced bin edges lo, lo+width, ..., up to the first edge >= hi.
[[nodiscard]] std::vector<double> uniform_edges(double lo, double hi, double width);

/// 2-D histogram over (wind speed, power) pairs. Pairs outside the edges are
/// counted in the nearest boundary bin.
class JointHistogram {
  public:
    JointHistogram(std::vector<double> v_edges, std::vector<double> p_edges);

    void add(double v, double p);
    void merge(const JointHistogram& other);

    [[nodiscard]] std::size_t v_bins() const noexcept { return v_edges_.size() - 1; }
    [[nodiscard]] std::size_t p_bins() const noexcept { return p_edges_.size() - 1; }
    [[nodiscard]] std::uint64_t count(std::size_t iv, std::size_t ip) const {
        return counts_.at(iv * p_bins() + ip);
    }
    [[nodiscard]] std::uint64_t total() const noexcept { return total_; }
    [[nodiscard]] const std::vector<double>& v_edges() const noexcept { return v_edges_; }
    [[nodiscard]] const std::vector<double>& p_edges() const noexcept { return p_edges_; }
    [[nodiscard]] std::size_t v_bin(double v) const noexcept;
    [[nodiscard]] std::size_t p_bin(double p) const noexcept;

  private:
    std::vector<double> v_edges_;
    std::vector<double> p_edges_;
    std::vector<std::uint64_t> counts_;
    std::uint64_t total_ = 0;
};

/// Throws InvalidParameter when the sample spans differ in length.
[[nodiscard]] JointHistogram joint_hist(std::span<const double> v, std::span<const double> p,
                                        std::vector<double> v_edges,
                                        std::vector<double> p_edges);

struct PowerTrace;

struct Summary {
    std::size_t samples = 0;
    double mean_power = 0.0;      ///< farm total [W]
    double capacity_factor = 0.0; ///< mean / (n_turbines * eta * P_g_nom)
    double p_zero = 0.0;          ///< fraction of samples with farm output below the threshold
    std::optional<std::array<double, 3>> mode_occupancy; ///< pooled over turbines
};

inline constexpr double kZeroPowerThreshold = 1.0; // W

/// Summary of the farm total, ignoring samples with t < from_time.
/// rated_output is eta * P_g_nom of one turbine.
[[nodiscard]] Summary summarize(const PowerTrace& trace, double rated_output,
                                double from_time = 0.0,
                                double zero_threshold = kZeroPowerThreshold);

} // namespace windsim
