#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "wingreg/flap_data.hpp"

namespace wingreg {

// Parameters of one synthetic flap-test trial. The waveform model is a
// cosine shoulder angle (downstroke first), a Gaussian lift bump at a chosen
// fraction of the downstroke, a smaller upstroke trough, and an oscillatory
// force transient at every stroke reversal (the wing jolts the load cell when
// it turns around). The two sensor streams run on independent clocks; the
// angle clock leads by clock_offset_s.
struct SyntheticTrialSpec {
    double frequency_hz = 5.0;
    double duration_s = 3.0;
    double force_rate_hz = 7000.0;
    double angle_rate_hz = 1000.0;

    double angle_mid_rad = 0.15;
    double angle_amplitude_rad = 0.35;

    double lift_peak_N = 1.0;        // bump height above baseline
    double peak_fraction = 0.23;     // position of the bump within the downstroke
    double baseline_N = 0.3;         // static load-cell offset (removed downstream)
    double bump_width_cycles = 0.06; // Gaussian sigma as a fraction of the period
    double trough_ratio = 0.35;      // upstroke trough depth relative to the bump

    double reversal_amp_down_N = 0.3;
    double reversal_amp_up_N = 0.15;
    double reversal_decay_s = 0.004;
    double reversal_freq_hz = 150.0;

    double clock_offset_s = 0.0;     // added to the angle timestamps
    double force_noise_N = 0.005;
    double angle_noise_rad = 0.004;
    unsigned seed = 1337;
};

struct SyntheticTrial {
    ForceRecord force;
    AngleRecord angle;
};

namespace detail {

inline double reversal_burst(double dt, double amp, double decay_s, double freq_hz) {
    return amp * std::exp(-(dt * dt) / (decay_s * decay_s)) * std::sin(2.0 * M_PI * freq_hz * dt);
}

}  // namespace detail

inline SyntheticTrial generate_trial(const SyntheticTrialSpec& spec) {
    const double T = 1.0 / spec.frequency_hz;
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    SyntheticTrial trial;
    trial.force.nominal_rate_hz = spec.force_rate_hz;

    const auto lift_at = [&](double t) {
        double v = spec.baseline_N;
        const double k = std::floor(t / T);
        for (double cycle = k - 1.0; cycle <= k + 1.0; cycle += 1.0) {
            const double t_down = cycle * T;
            const double t_bump = t_down + spec.peak_fraction * 0.5 * T;
            const double t_trough = t_down + 0.75 * T;
            const double sigma = spec.bump_width_cycles * T;
            const double db = (t - t_bump) / sigma;
            const double dtr = (t - t_trough) / sigma;
            v += spec.lift_peak_N * std::exp(-db * db);
            v -= spec.trough_ratio * spec.lift_peak_N * std::exp(-dtr * dtr);
            v += detail::reversal_burst(t - t_down, spec.reversal_amp_down_N, spec.reversal_decay_s,
                                        spec.reversal_freq_hz);
            v += detail::reversal_burst(t - (t_down + 0.5 * T), spec.reversal_amp_up_N,
                                        spec.reversal_decay_s, spec.reversal_freq_hz);
        }
        return v;
    };

    const std::size_t nf = static_cast<std::size_t>(std::floor(spec.duration_s * spec.force_rate_hz)) + 1;
    trial.force.samples.reserve(nf);
    for (std::size_t i = 0; i < nf; ++i) {
        const double t = static_cast<double>(i) / spec.force_rate_hz;
        ForceSample s{};
        s.t_s = t;
        s.ch[0] = 0.02 * gauss(rng);
        s.ch[1] = 0.02 * gauss(rng);
        s.ch[2] = lift_at(t) + spec.force_noise_N * gauss(rng);
        s.ch[3] = 0.5 * gauss(rng);
        s.ch[4] = 0.5 * gauss(rng);
        s.ch[5] = 0.5 * gauss(rng);
        trial.force.samples.push_back(s);
    }

    const std::size_t na = static_cast<std::size_t>(std::floor(spec.duration_s * spec.angle_rate_hz)) + 1;
    std::vector<AngleSample> angle_samples;
    angle_samples.reserve(na);
    for (std::size_t i = 0; i < na; ++i) {
        const double t = static_cast<double>(i) / spec.angle_rate_hz;
        const double angle = spec.angle_mid_rad +
                             spec.angle_amplitude_rad * std::cos(2.0 * M_PI * spec.frequency_hz * t) +
                             spec.angle_noise_rad * gauss(rng);
        angle_samples.push_back({t + spec.clock_offset_s, angle});
    }
    trial.angle = AngleRecord::from_samples(std::move(angle_samples));
    return trial;
}

// Effect sizes per regulator length for the packaged 3x3x3 synthetic matrix.
// The headline ratio and timing shift are encoded at 5 Hz; the other
// frequencies carry milder, monotone variants.
struct SyntheticEffect {
    double length_mm;
    double peak_N;
    double fraction;
};

inline std::vector<SyntheticEffect> synthetic_effects(double frequency_hz) {
    if (frequency_hz >= 4.5)
        return {{28.58, 1.00, 0.23}, {29.33, 1.18, 0.31}, {30.08, 1.37, 0.40}};
    if (frequency_hz >= 3.5)
        return {{28.58, 0.90, 0.23}, {29.33, 1.02, 0.28}, {30.08, 1.15, 0.33}};
    return {{28.58, 0.80, 0.23}, {29.33, 0.88, 0.26}, {30.08, 0.96, 0.30}};
}

// The full Static Radius R1 test matrix: three lengths x three frequencies x
// three trials, with an optional common angle-clock offset.
inline std::vector<MatrixEntry> generate_matrix(double clock_offset_s = 0.0, unsigned base_seed = 20,
                                                double duration_s = 3.0) {
    std::vector<MatrixEntry> entries;
    unsigned seed = base_seed;
    for (double freq : {3.0, 4.0, 5.0}) {
        for (const SyntheticEffect& eff : synthetic_effects(freq)) {
            for (int trialno = 1; trialno <= 3; ++trialno) {
                SyntheticTrialSpec spec;
                spec.frequency_hz = freq;
                spec.duration_s = duration_s;
                spec.lift_peak_N = eff.peak_N;
                spec.peak_fraction = eff.fraction;
                spec.clock_offset_s = clock_offset_s;
                spec.seed = seed++;
                SyntheticTrial trial = generate_trial(spec);
                entries.push_back({eff.length_mm, freq, trialno, std::move(trial.force),
                                   std::move(trial.angle), std::nullopt});
            }
        }
    }
    return entries;
}

}  // namespace wingreg
