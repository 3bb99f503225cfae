#include "windsim/hybrid_ctrl.hpp"

#include <cmath>
#include <numeric>

#include "windsim/errors.hpp"

namespace windsim {

std::string_view mode_name(Mode m) noexcept {
    switch (m) {
    case Mode::NoLoad: return "no_load";
    case Mode::PartialLoad: return "partial_load";
    case Mode::FullLoad: return "full_load";
    }
    return "unknown";
}

RingMean::RingMean(std::size_t capacity, double prefill)
    : buf_(capacity, prefill), sum_(prefill * static_cast<double>(capacity)) {
    if (capacity == 0) throw InvalidParameter("moving-average window must hold >= 1 sample");
}

void RingMean::push(double v) {
    sum_ += v - buf_[head_];
    buf_[head_] = v;
    head_ = (head_ + 1) % buf_.size();
    // Running sums drift over a year of ticks; resum once per full cycle.
    if (++since_resync_ == buf_.size()) {
        sum_ = std::accumulate(buf_.begin(), buf_.end(), 0.0);
        since_resync_ = 0;
    }
}

namespace {

std::size_t window_samples(double seconds, double dt) {
    // Guard against 60/0.1 evaluating to 600.0000000001.
    return static_cast<std::size_t>(std::ceil(seconds / dt - 1e-9));
}

} // namespace

MovingAverages::MovingAverages(double dt, double prefill)
    : short_(window_samples(5.0, dt), prefill), long_(window_samples(60.0, dt), prefill) {
    if (!(dt > 0.0)) throw InvalidParameter("moving averages need dt > 0");
}

void MovingAverages::push(double v) {
    short_.push(v);
    long_.push(v);
}

HybridState initial_state(double dt, double v0) {
    HybridState s;
    s.avgs = MovingAverages(dt, v0);
    return s;
}

void update_averages(MovingAverages& avgs, double v) { avgs.push(v); }

bool cutoff_condition(const TurbineParams& p, double v5, double v60) noexcept {
    return v5 > p.v5_cutoff || v60 > p.v60_cutoff;
}

bool startup_condition(const TurbineParams& p, double v5, double v60, bool latch) noexcept {
    return v60 >= p.v_cut_in && v5 <= p.v5_cutoff && v60 <= p.v60_cutoff &&
           (!latch || v60 <= p.v_restart);
}

bool transition(const TurbineParams& p, HybridState& s) {
    const double v5 = s.avgs.v5();
    const double v60 = s.avgs.v60();
    auto stop = [&](bool high_wind) {
        s.mode = Mode::NoLoad;
        s.mech.reset();
        if (high_wind) s.cutoff_latch = true;
        return true;
    };

    switch (s.mode) {
    case Mode::NoLoad:
        if (startup_condition(p, v5, v60, s.cutoff_latch)) {
            s.mode = Mode::PartialLoad;
            s.mech = MechState{p.omega_min, 0.0};
            s.cutoff_latch = false;
            return true;
        }
        return false;
    case Mode::PartialLoad:
        if (cutoff_condition(p, v5, v60)) return stop(true);
        if (s.mech->omega < 0.95 * p.omega_min) return stop(false);
        if (s.mech->omega > p.omega_nom) {
            s.mode = Mode::FullLoad;
            return true;
        }
        return false;
    case Mode::FullLoad:
        if (cutoff_condition(p, v5, v60)) return stop(true);
        if (s.mech->omega < 0.95 * p.omega_nom) {
            s.mode = Mode::PartialLoad;
            return true;
        }
        return false;
    }
    return false;
}

StepResult step(const TurbineParams& p, HybridState& s, double v, double dt) {
    update_averages(s.avgs, v);
    StepResult r;
    r.transitioned = transition(p, s);
    if (s.mode == Mode::NoLoad) return r;

    MechState& mech = *s.mech;
    r.p_g = s.mode == Mode::PartialLoad ? mode1_power_ref(p, mech.omega)
                                         : mode2_power_ref(p, mech.omega);
    r.p_m = aero_power(p, v, mech.omega, mech.theta);
    mech = drivetrain_step(p, mech, r.p_m, r.p_g, dt);
    r.p_out = grid_power(p, r.p_g);
    return r;
}

} // namespace windsim
