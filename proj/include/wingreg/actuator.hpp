#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "wingreg/actuator_spec.hpp"
#include "wingreg/errors.hpp"

namespace wingreg {

struct DriveCommand {
    int direction = +1;        // +1 extend, -1 retract
    std::int64_t pulse_count = 0;
    double load_gf = 0.0;      // opposing axial load during the burst

    void validate() const {
        if (direction != +1 && direction != -1) throw ValidationError("direction must be +1 or -1");
        if (pulse_count < 0) throw ValidationError("pulse_count must be >= 0");
        if (load_gf < 0.0) throw ValidationError("load must be >= 0");
    }
};

struct StepResult {
    std::int64_t pulses_applied = 0;  // pulses that produced displacement
    double displacement_um = 0.0;
    bool stalled = false;
    double end_position_um = 0.0;
};

struct HoldResult {
    bool held = true;
    double slip_um = 0.0;
    double end_position_um = 0.0;
};

struct SeekResult {
    bool arrived = false;
    std::int64_t pulses_used = 0;
    double end_position_um = 0.0;
    std::vector<std::pair<std::int64_t, double>> trace;  // (pulse index, position um)
};

// Quasi-static slip-stick actuator model: pulse-indexed stepping with linear
// load derating, hard clamp at the stroke ends, and static-friction holding.
// Position is kept in integer femtometers so that burst splitting, reversal,
// and idle holding are bit-exact; sub-femtometer motion is modeled as zero.
class SlipStickActuator {
public:
    static constexpr double kQuantaPerUm = 1e9;  // 1 fm

    explicit SlipStickActuator(ActuatorSpec spec, double step_size_um = 0.0,
                               double start_position_um = 0.0)
        : spec_(std::move(spec)) {
        spec_.validate();
        step_size_um_ = step_size_um == 0.0 ? spec_.step_size_um_default : step_size_um;
        if (step_size_um_ < spec_.step_size_um_min || step_size_um_ > spec_.step_size_um_max)
            throw ValidationError("step size outside the spec range");
        stroke_q_ = to_quanta(spec_.stroke_mm * 1000.0);
        position_q_ = to_quanta(start_position_um);
        if (position_q_ < 0 || position_q_ > stroke_q_)
            throw ValidationError("start position outside [0, stroke]");
    }

    const ActuatorSpec& spec() const { return spec_; }
    double step_size_um() const { return step_size_um_; }
    double position_um() const { return static_cast<double>(position_q_) / kQuantaPerUm; }

    // Back-driven slip rate once the holding force is exceeded; 0 = hard hold.
    void set_slip_rate_um_per_s(double rate) {
        if (rate < 0.0) throw ValidationError("slip rate must be >= 0");
        slip_rate_um_per_s_ = rate;
    }

    StepResult apply_burst(const DriveCommand& cmd) {
        cmd.validate();
        StepResult res;
        const std::int64_t start = position_q_;
        if (cmd.load_gf > spec_.dynamic_force_gf) {
            res.stalled = true;
            res.end_position_um = position_um();
            return res;
        }
        const std::int64_t step = derated_step_q(cmd.load_gf);
        for (std::int64_t p = 0; p < cmd.pulse_count; ++p) {
            std::int64_t next = position_q_ + cmd.direction * step;
            if (next < 0) next = 0;
            if (next > stroke_q_) next = stroke_q_;
            if (next == position_q_) continue;  // clamped or zero step: no displacement
            position_q_ = next;
            ++res.pulses_applied;
        }
        res.displacement_um = static_cast<double>(position_q_ - start) / kQuantaPerUm;
        res.end_position_um = position_um();
        return res;
    }

    // True iff static friction holds the commanded position under this load.
    // Checking never moves the actuator.
    bool hold_check(double load_gf) const { return load_gf <= spec_.holding_force_gf; }

    // Idle under load for a duration. Exceeding the holding force back-drives
    // the output toward the retracted end at the configured slip rate.
    HoldResult hold(double load_gf, double duration_s) {
        HoldResult res;
        res.held = hold_check(load_gf);
        if (!res.held && slip_rate_um_per_s_ > 0.0) {
            const std::int64_t start = position_q_;
            // slip saturates at the retracted end, so clamp before quantizing
            const double slip_um = std::min(slip_rate_um_per_s_ * duration_s,
                                            spec_.stroke_mm * 1000.0);
            position_q_ = std::max<std::int64_t>(0, position_q_ - to_quanta(slip_um));
            res.slip_um = static_cast<double>(start - position_q_) / kQuantaPerUm;
        }
        res.end_position_um = position_um();
        return res;
    }

    // Pulses toward the target until within one nominal step or the pulse
    // budget runs out. The load profile is sampled at the current position
    // before every pulse; a load above the dynamic force aborts the seek.
    SeekResult seek(double target_um, const std::function<double(double)>& load_profile_gf,
                    std::int64_t max_pulses) {
        if (target_um < 0.0 || target_um > spec_.stroke_mm * 1000.0)
            throw ValidationError("target outside [0, stroke]");
        if (max_pulses < 0) throw ValidationError("max_pulses must be >= 0");
        SeekResult res;
        const std::int64_t target_q = to_quanta(target_um);
        const std::int64_t tol_q = to_quanta(step_size_um_);
        res.trace.emplace_back(0, position_um());
        while (res.pulses_used < max_pulses) {
            if (std::llabs(position_q_ - target_q) < tol_q) {
                res.arrived = true;
                break;
            }
            const double load = load_profile_gf(position_um());
            if (load < 0.0) throw ValidationError("load profile returned a negative load");
            if (load > spec_.dynamic_force_gf)
                throw TargetUnreachable("stalled by load " + std::to_string(load) + " gf at " +
                                            std::to_string(position_um()) + " um",
                                        position_um());
            const int dir = position_q_ < target_q ? +1 : -1;
            const std::int64_t step = derated_step_q(load);
            if (step == 0)
                throw TargetUnreachable("load " + std::to_string(load) +
                                            " gf leaves no usable step at " +
                                            std::to_string(position_um()) + " um",
                                        position_um());
            std::int64_t next = position_q_ + dir * step;
            if (next < 0) next = 0;
            if (next > stroke_q_) next = stroke_q_;
            position_q_ = next;
            ++res.pulses_used;
            res.trace.emplace_back(res.pulses_used, position_um());
        }
        if (!res.arrived && std::llabs(position_q_ - target_q) < tol_q) res.arrived = true;
        res.end_position_um = position_um();
        return res;
    }

private:
    static std::int64_t to_quanta(double um) {
        return static_cast<std::int64_t>(std::llround(um * kQuantaPerUm));
    }

    // Linear derating: full step at zero load, zero step at the rated dynamic
    // force. No force-velocity curve is available for these actuators; this
    // is the simplest law consistent with both endpoints.
    std::int64_t derated_step_q(double load_gf) const {
        const double factor = 1.0 - load_gf / spec_.dynamic_force_gf;
        return to_quanta(step_size_um_ * factor);
    }

    ActuatorSpec spec_;
    double step_size_um_ = 0.0;
    double slip_rate_um_per_s_ = 0.0;
    std::int64_t position_q_ = 0;
    std::int64_t stroke_q_ = 0;
};

}  // namespace wingreg
