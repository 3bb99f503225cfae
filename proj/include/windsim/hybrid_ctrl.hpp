// Three-mode supervisory automaton of the turbine.
//
//   Mode 0 (no load)      -> Mode 1  on the start condition, reset omega = omega_min, theta = 0
//   Mode 1 (partial load) -> Mode 0  on cut-off or omega < 0.95 omega_min
//                         -> Mode 2  on omega > omega_nom
//   Mode 2 (full load)    -> Mode 0  on cut-off
//                         -> Mode 1  on omega < 0.95 omega_nom
//
// Guards read 5 s and 60 s moving averages of the sampled wind. Cut-off is
// checked before the speed guards and at most one transition fires per tick.
#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "windsim/turbine.hpp"

namespace windsim {

enum class Mode : std::uint8_t {
    NoLoad = 0,
    PartialLoad = 1,
    FullLoad = 2,
};

[[nodiscard]] constexpr int mode_index(Mode m) noexcept { return static_cast<int>(m); }
[[nodiscard]] std::string_view mode_name(Mode m) noexcept;

/// Fixed-capacity ring buffer with a running mean.
class RingMean {
  public:
    RingMean() = default;
    RingMean(std::size_t capacity, double prefill);

    void push(double v);
    [[nodiscard]] double mean() const noexcept { return sum_ / static_cast<double>(buf_.size()); }
    [[nodiscard]] std::size_t capacity() const noexcept { return buf_.size(); }
    [[nodiscard]] const std::vector<double>& contents() const noexcept { return buf_; }

  private:
    std::vector<double> buf_;
    std::size_t head_ = 0;
    std::size_t since_resync_ = 0;
    double sum_ = 0.0;
};

/// 5 s and 60 s averages of the sampled wind speed.
class MovingAverages {
  public:
    MovingAverages() = default;
    /// Buffers of ceil(5/dt) and ceil(60/dt) samples, all set to prefill.
    MovingAverages(double dt, double prefill);

    void push(double v);
    [[nodiscard]] double v5() const noexcept { return short_.mean(); }
    [[nodiscard]] double v60() const noexcept { return long_.mean(); }
    [[nodiscard]] const RingMean& short_window() const noexcept { return short_; }
    [[nodiscard]] const RingMean& long_window() const noexcept { return long_; }

  private:
    RingMean short_;
    RingMean long_;
};

struct HybridState {
    Mode mode = Mode::NoLoad;
    std::optional<MechState> mech; ///< empty in Mode 0
    MovingAverages avgs;
    bool cutoff_latch = false;
};

/// Start-of-simulation state: Mode 0, averages prefilled with v0.
[[nodiscard]] HybridState initial_state(double dt, double v0);

/// Appends v to both windows.
void update_averages(MovingAverages& avgs, double v);

[[nodiscard]] bool cutoff_condition(const TurbineParams& p, double v5, double v60) noexcept;

[[nodiscard]] bool startup_condition(const TurbineParams& p, double v5, double v60,
                                     bool latch) noexcept;

/// Applies at most one guarded transition. Returns true iff one fired.
bool transition(const TurbineParams& p, HybridState& state);

struct StepResult {
    double p_out = 0.0; ///< grid power [W]
    double p_m = 0.0;   ///< aerodynamic power [W]
    double p_g = 0.0;   ///< generator reference [W]
    bool transitioned = false;
};

/// One control tick: averages, transition, power reference and drive-train
/// integration. Mode 0 reports zero power and does not integrate.
StepResult step(const TurbineParams& p, HybridState& state, double v, double dt);

} // namespace windsim
