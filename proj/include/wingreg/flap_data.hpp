#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wingreg/errors.hpp"
#include "wingreg/parallel.hpp"

namespace wingreg {

enum class LiftAxis { Fx = 0, Fy = 1, Fz = 2, Tx = 3, Ty = 4, Tz = 5 };

inline LiftAxis lift_axis_from_name(const std::string& name) {
    if (name == "fx") return LiftAxis::Fx;
    if (name == "fy") return LiftAxis::Fy;
    if (name == "fz") return LiftAxis::Fz;
    if (name == "tx") return LiftAxis::Tx;
    if (name == "ty") return LiftAxis::Ty;
    if (name == "tz") return LiftAxis::Tz;
    throw ValidationError("unknown lift axis '" + name + "' (expected fx|fy|fz|tx|ty|tz)");
}

struct ForceSample {
    double t_s;
    double ch[6];  // fx, fy, fz [N], tx, ty, tz [N mm]
};

struct ForceRecord {
    std::vector<ForceSample> samples;
    double nominal_rate_hz = 7000.0;

    void validate() const {
        if (samples.size() < 2) throw ValidationError("force record needs at least 2 samples");
        for (std::size_t i = 1; i < samples.size(); ++i)
            if (!(samples[i].t_s > samples[i - 1].t_s))
                throw ValidationError("force timestamps must be strictly increasing");
    }

    double channel(LiftAxis axis, std::size_t i) const {
        return samples[i].ch[static_cast<int>(axis)];
    }
    double span_s() const { return samples.back().t_s - samples.front().t_s; }
    double median_dt() const {
        std::vector<double> dts;
        dts.reserve(samples.size() - 1);
        for (std::size_t i = 1; i < samples.size(); ++i)
            dts.push_back(samples[i].t_s - samples[i - 1].t_s);
        std::nth_element(dts.begin(), dts.begin() + dts.size() / 2, dts.end());
        return dts[dts.size() / 2];
    }
};

struct AngleSample {
    double t_s;
    double angle_rad;
};

struct AngleRecord {
    std::vector<AngleSample> samples;
    double calibration_min_rad = 0.0;  // pre-test range-of-motion sweep
    double calibration_max_rad = 0.0;

    void validate() const {
        if (samples.size() < 2) throw ValidationError("angle record needs at least 2 samples");
        for (std::size_t i = 1; i < samples.size(); ++i)
            if (!(samples[i].t_s > samples[i - 1].t_s))
                throw ValidationError("angle timestamps must be strictly increasing");
        if (!(calibration_min_rad < calibration_max_rad))
            throw ValidationError("calibration min must be < max");
    }

    // Calibration taken from the record itself when no sweep data exists.
    static AngleRecord from_samples(std::vector<AngleSample> samples) {
        AngleRecord rec;
        rec.samples = std::move(samples);
        if (rec.samples.size() >= 2) {
            auto [lo, hi] = std::minmax_element(
                rec.samples.begin(), rec.samples.end(),
                [](const AngleSample& a, const AngleSample& b) { return a.angle_rad < b.angle_rad; });
            rec.calibration_min_rad = lo->angle_rad;
            rec.calibration_max_rad = hi->angle_rad;
            if (!(rec.calibration_min_rad < rec.calibration_max_rad))
                rec.calibration_max_rad = rec.calibration_min_rad + 1e-9;
        }
        return rec;
    }
};

// One flap: downstroke (max angle -> min) then upstroke, delimited by
// angular-velocity sign inversions. Times are in the record's own timebase;
// after align() that is seconds since the first force sample.
struct FlapCycle {
    double t_downstroke_start;
    double t_upstroke_start;
    double t_end;
};

struct CycleMetrics {
    double peak_lift_N = 0.0;             // whole-cycle max on the lift axis
    double peak_timing_fraction = 0.0;    // position of that peak within the downstroke
    double mean_lift_N = 0.0;
    double cycle_duration_s = 0.0;
    double peak_lift_downstroke_N = 0.0;  // downstroke-window max (secondary reading)
    bool peak_in_upstroke = false;        // fraction was clamped
    bool ambiguous_peak = false;          // equal peaks; earliest reported
};

namespace detail {

// Zero-phase smoothing: symmetric moving average, window shrinking near the
// record edges to stay centered.
inline std::vector<double> moving_average(const std::vector<double>& x, int window) {
    const int n = static_cast<int>(x.size());
    if (window <= 1 || n == 0) return x;
    const int half = window / 2;
    std::vector<double> out(x.size());
    for (int i = 0; i < n; ++i) {
        const int h = std::min({half, i, n - 1 - i});
        double acc = 0.0;
        for (int j = i - h; j <= i + h; ++j) acc += x[j];
        out[i] = acc / (2 * h + 1);
    }
    return out;
}

inline std::vector<double> central_velocity(const std::vector<double>& t,
                                            const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<double> v(n, 0.0);
    if (n < 2) return v;
    v[0] = (x[1] - x[0]) / (t[1] - t[0]);
    v[n - 1] = (x[n - 1] - x[n - 2]) / (t[n - 1] - t[n - 2]);
    for (std::size_t i = 1; i + 1 < n; ++i) v[i] = (x[i + 1] - x[i - 1]) / (t[i + 1] - t[i - 1]);
    return v;
}

struct Crossing {
    double t;
    bool downstroke_start;  // velocity + -> - (angle at its maximum)
};

// Sign inversions of the velocity, interpolated to sub-sample times, filtered
// to alternate and to respect a minimum spacing (noise debounce). Crossings
// inside the edge guard are discarded: the one-sided differences and shrunken
// smoothing windows there are not trustworthy.
inline std::vector<Crossing> velocity_crossings(const std::vector<double>& t,
                                                const std::vector<double>& v, double min_sep_s,
                                                double edge_guard_s) {
    std::vector<Crossing> raw;
    std::size_t i = 0;
    const std::size_t n = v.size();
    while (i < n && v[i] == 0.0) ++i;
    for (std::size_t j = i + 1; j < n; ++j) {
        if (v[j] == 0.0) continue;
        if ((v[i] > 0.0) != (v[j] > 0.0)) {
            const double w = v[i] / (v[i] - v[j]);
            raw.push_back({t[i] + w * (t[j] - t[i]), v[i] > 0.0});
        }
        i = j;
    }
    std::vector<Crossing> out;
    for (const Crossing& c : raw) {
        if (c.t < t.front() + edge_guard_s || c.t > t.back() - edge_guard_s) continue;
        if (!out.empty() &&
            (c.downstroke_start == out.back().downstroke_start || c.t - out.back().t < min_sep_s))
            continue;
        out.push_back(c);
    }
    return out;
}

struct SpectralPeak {
    double freq_hz = 0.0;
    double amplitude = 0.0;  // ~ sinusoid amplitude at the peak
    double rms = 0.0;        // of the mean-removed signal
};

// Brute-force DFT amplitude scan on the (possibly non-uniform) timestamps.
inline SpectralPeak dominant_frequency(const std::vector<double>& t, const std::vector<double>& x,
                                       double fmin_hz, double fmax_hz, double df_hz = 0.01) {
    const std::size_t n = x.size();
    SpectralPeak peak;
    if (n < 4) return peak;
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    peak.rms = std::sqrt(ss / static_cast<double>(n));

    const double t0 = t.front();
    for (double f = fmin_hz; f <= fmax_hz + 1e-12; f += df_hz) {
        const double w = 2.0 * M_PI * f;
        double re = 0.0, im = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double ph = w * (t[i] - t0);
            const double v = x[i] - mean;
            re += v * std::cos(ph);
            im -= v * std::sin(ph);
        }
        const double amp = 2.0 * std::hypot(re, im) / static_cast<double>(n);
        if (amp > peak.amplitude) {
            peak.amplitude = amp;
            peak.freq_hz = f;
        }
    }
    return peak;
}

inline double interp_at(const std::vector<double>& t, const std::vector<double>& x, double query) {
    if (query < t.front() || query > t.back()) return 0.0;
    auto it = std::upper_bound(t.begin(), t.end(), query);
    if (it == t.begin()) return x.front();
    const std::size_t j = static_cast<std::size_t>(it - t.begin());
    if (j >= t.size()) return x.back();
    const double w = (query - t[j - 1]) / (t[j] - t[j - 1]);
    return x[j - 1] + w * (x[j] - x[j - 1]);
}

inline int odd_window(double samples) {
    int w = static_cast<int>(std::lround(samples));
    if (w < 1) w = 1;
    if (w % 2 == 0) ++w;
    return w;
}

// Least-squares parabola vertex of (t, x) over [t_center - half, t_center + half].
// Returns t_center when the fit is degenerate (too few points, flat curvature).
inline double parabola_vertex(const std::vector<double>& t, const std::vector<double>& x,
                              double t_center, double half_span) {
    double s0 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0, y0 = 0, y1 = 0, y2 = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double u = t[i] - t_center;
        if (u < -half_span || u > half_span) continue;
        const double u2 = u * u;
        s0 += 1;
        s1 += u;
        s2 += u2;
        s3 += u2 * u;
        s4 += u2 * u2;
        y0 += x[i];
        y1 += x[i] * u;
        y2 += x[i] * u2;
    }
    if (s0 < 5) return t_center;
    // Solve the 3x3 normal equations for c + b u + a u^2 by Cramer's rule.
    const double det = s0 * (s2 * s4 - s3 * s3) - s1 * (s1 * s4 - s2 * s3) + s2 * (s1 * s3 - s2 * s2);
    if (std::abs(det) < 1e-30) return t_center;
    const double db = s0 * (y1 * s4 - y2 * s3) - y0 * (s1 * s4 - s2 * s3) + s2 * (s1 * y2 - s2 * y1);
    const double da = s0 * (s2 * y2 - s3 * y1) - s1 * (s1 * y2 - s3 * y0) + y0 * (s1 * s3 - s2 * s2);
    const double a = da / det;
    const double b = db / det;
    if (std::abs(a) < 1e-30) return t_center;
    const double vertex = -b / (2.0 * a);
    if (vertex < -half_span || vertex > half_span) return t_center;
    return t_center + vertex;
}

inline double median(std::vector<double> v) {
    if (v.empty()) throw ValidationError("median of empty range");
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    double hi = v[mid];
    if (v.size() % 2 == 1) return hi;
    std::nth_element(v.begin(), v.begin() + mid - 1, v.begin() + mid);
    return 0.5 * (v[mid - 1] + hi);
}

}  // namespace detail

struct SegmentOptions {
    double nominal_freq_hz = 0.0;     // 0 = estimate from the signal
    double smooth_window_frac = 0.05; // of the nominal cycle period
};

// Splits the angle record into full flap cycles at angular-velocity zero
// crossings. Partial cycles at the record edges are discarded.
inline std::vector<FlapCycle> segment_cycles(const AngleRecord& angle,
                                             const SegmentOptions& opts = {}) {
    angle.validate();
    const std::size_t n = angle.samples.size();
    std::vector<double> t(n), a(n);
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = angle.samples[i].t_s;
        a[i] = angle.samples[i].angle_rad;
    }

    double f0 = opts.nominal_freq_hz;
    if (f0 <= 0.0) {
        auto peak = detail::dominant_frequency(t, a, 0.5, 20.0);
        f0 = (peak.amplitude > 0.1 * peak.rms && peak.rms > 1e-12) ? peak.freq_hz
                                                                   : 2.0 / (t.back() - t.front());
    }

    const double dt = (t.back() - t.front()) / static_cast<double>(n - 1);
    int window = detail::odd_window(opts.smooth_window_frac / f0 / dt);
    window = std::min(window, detail::odd_window(static_cast<double>(n) / 4.0));
    const std::vector<double> smoothed = detail::moving_average(a, window);
    const std::vector<double> velocity = detail::central_velocity(t, smoothed);
    const double edge_guard = (window / 2 + 1) * dt;
    auto crossings = detail::velocity_crossings(t, velocity, 0.2 / f0, edge_guard);

    // The interpolated crossing carries the noise of two samples; the angle
    // extremum it marks is far better conditioned. Refine each boundary to
    // the parabola vertex of the smoothed angle around the coarse time; the
    // second pass re-centers the fit window, removing the skew bias a
    // off-center bracket picks up from the waveform's higher terms.
    for (auto& c : crossings) {
        c.t = detail::parabola_vertex(t, smoothed, c.t, 0.15 / f0);
        c.t = detail::parabola_vertex(t, smoothed, c.t, 0.15 / f0);
    }

    std::vector<FlapCycle> cycles;
    for (std::size_t k = 0; k + 2 < crossings.size(); ++k) {
        if (crossings[k].downstroke_start && !crossings[k + 1].downstroke_start &&
            crossings[k + 2].downstroke_start &&
            crossings[k].t < crossings[k + 1].t && crossings[k + 1].t < crossings[k + 2].t) {
            cycles.push_back({crossings[k].t, crossings[k + 1].t, crossings[k + 2].t});
            ++k;  // next cycle shares this one's end boundary
        }
    }
    if (cycles.empty()) throw NoCyclesFound("no angular-velocity inversions delimit a full cycle");
    return cycles;
}

// Per-channel offset removal: mean over the operator-marked quiet window when
// given, whole-record median otherwise.
inline ForceRecord remove_baseline(const ForceRecord& force,
                                   std::optional<std::pair<double, double>> quiet_window_s = {}) {
    force.validate();
    ForceRecord out = force;
    double offset[6] = {};
    if (quiet_window_s) {
        const auto [w0, w1] = *quiet_window_s;
        std::size_t count = 0;
        for (const auto& s : force.samples) {
            if (s.t_s < w0 || s.t_s > w1) continue;
            for (int c = 0; c < 6; ++c) offset[c] += s.ch[c];
            ++count;
        }
        if (count == 0) throw ValidationError("quiet window contains no samples");
        for (int c = 0; c < 6; ++c) offset[c] /= static_cast<double>(count);
    } else {
        std::vector<double> col(force.samples.size());
        for (int c = 0; c < 6; ++c) {
            for (std::size_t i = 0; i < force.samples.size(); ++i) col[i] = force.samples[i].ch[c];
            offset[c] = detail::median(col);
        }
    }
    for (auto& s : out.samples)
        for (int c = 0; c < 6; ++c) s.ch[c] -= offset[c];
    return out;
}

struct AlignOptions {
    LiftAxis axis = LiftAxis::Fz;
    double max_offset_s = 0.0;  // 0 = auto (just under half a flap period)
};

struct AlignedPair {
    ForceRecord force;   // timebase: seconds since the first force sample
    AngleRecord angle;   // same timebase, clock offset removed
    double offset_s = 0.0;       // estimated angle-clock lead
    double uncertainty_s = 0.0;  // documented synchronization budget
    double flap_freq_hz = 0.0;
};

// Estimates the angle record's clock offset by scoring the angle-derived
// downstroke-start times against the transient-energy envelope of the
// vertical force channel (wing reversals mark both streams), then rebases
// both records onto the force clock.
inline AlignedPair align(const ForceRecord& force, const AngleRecord& angle,
                         const AlignOptions& opts = {}) {
    force.validate();
    angle.validate();

    const double epoch = force.samples.front().t_s;
    const std::size_t nf = force.samples.size();
    std::vector<double> ft(nf), fx(nf);
    for (std::size_t i = 0; i < nf; ++i) {
        ft[i] = force.samples[i].t_s - epoch;
        fx[i] = force.channel(opts.axis, i);
    }

    const auto peak = detail::dominant_frequency(ft, fx, 1.0, 10.0);
    if (!(peak.rms > 1e-12) || peak.amplitude < 0.2 * peak.rms)
        throw NoPeriodicity("no detectable flapping fundamental in 1-10 Hz on the force channel");
    const double f0 = peak.freq_hz;
    if (ft.back() - ft.front() < 2.0 / f0)
        throw InsufficientCycles("force record spans fewer than 2 flap cycles");

    AngleRecord angle_rel = angle;
    for (auto& s : angle_rel.samples) s.t_s -= epoch;
    std::vector<FlapCycle> angle_cycles;
    try {
        angle_cycles = segment_cycles(angle_rel, {f0, 0.05});
    } catch (const NoCyclesFound&) {
        throw InsufficientCycles("angle record spans fewer than 2 flap cycles");
    }
    if (angle_cycles.size() < 2)
        throw InsufficientCycles("angle record spans fewer than 2 flap cycles");

    // Transient-energy envelope: wing reversals put sharp slope bursts into
    // the force channel while the lift waveform itself is slow, so the
    // smoothed |derivative| peaks at the stroke transitions.
    const double dtf = force.median_dt();
    const int w_env = detail::odd_window(0.002 / dtf);
    std::vector<double> mid_t(nf - 1), env(nf - 1);
    for (std::size_t i = 0; i + 1 < nf; ++i) {
        mid_t[i] = 0.5 * (ft[i] + ft[i + 1]);
        env[i] = std::abs((fx[i + 1] - fx[i]) / (ft[i + 1] - ft[i]));
    }
    env = detail::moving_average(env, w_env);

    const double max_off = opts.max_offset_s > 0.0 ? opts.max_offset_s : 0.45 / f0;
    const long half_grid = std::lround(std::ceil(max_off / dtf));
    double best_tau = 0.0, best_score = -1.0;
    for (long j = -half_grid; j <= half_grid; ++j) {
        const double tau = static_cast<double>(j) * dtf;
        double score = 0.0;
        for (const FlapCycle& c : angle_cycles)
            score += detail::interp_at(mid_t, env, c.t_downstroke_start - tau);
        if (score > best_score) {
            best_score = score;
            best_tau = tau;
        }
    }
    if (!(best_score > 0.0))
        throw InsufficientCycles(
            "angle cycles do not overlap the force record within the offset search range");

    AlignedPair out;
    out.offset_s = best_tau;
    out.uncertainty_s = 0.002;  // timing budget of zero-crossing synchronization
    out.flap_freq_hz = f0;
    out.force = force;
    for (auto& s : out.force.samples) s.t_s -= epoch;
    out.angle = std::move(angle_rel);
    for (auto& s : out.angle.samples) s.t_s -= best_tau;
    return out;
}

// Peak and timing of one cycle on the (aligned, baseline-corrected) force
// record. Equal peaks report the earliest and set the ambiguity flag.
inline CycleMetrics cycle_metrics(const ForceRecord& force, const FlapCycle& cycle,
                                  LiftAxis axis = LiftAxis::Fz) {
    force.validate();
    if (!(cycle.t_downstroke_start < cycle.t_upstroke_start && cycle.t_upstroke_start < cycle.t_end))
        throw ValidationError("cycle boundaries out of order");

    CycleMetrics m;
    m.cycle_duration_s = cycle.t_end - cycle.t_downstroke_start;

    double peak = -std::numeric_limits<double>::infinity();
    double peak_down = -std::numeric_limits<double>::infinity();
    double t_peak = cycle.t_downstroke_start;
    bool ambiguous = false;
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < force.samples.size(); ++i) {
        const double t = force.samples[i].t_s;
        if (t < cycle.t_downstroke_start || t >= cycle.t_end) continue;
        const double v = force.channel(axis, i);
        sum += v;
        ++count;
        if (v > peak) {
            peak = v;
            t_peak = t;
            ambiguous = false;
        } else if (v == peak) {
            ambiguous = true;
        }
        if (t < cycle.t_upstroke_start) peak_down = std::max(peak_down, v);
    }
    if (count == 0) throw EmptyWindow("no force samples inside the cycle window");

    m.peak_lift_N = peak;
    if (peak_down == -std::numeric_limits<double>::infinity())
        peak_down = std::numeric_limits<double>::quiet_NaN();  // no downstroke samples
    m.peak_lift_downstroke_N = peak_down;
    m.mean_lift_N = sum / static_cast<double>(count);
    m.ambiguous_peak = ambiguous;

    const double down_span = cycle.t_upstroke_start - cycle.t_downstroke_start;
    double fraction = (t_peak - cycle.t_downstroke_start) / down_span;
    if (fraction > 1.0) {
        fraction = 1.0;
        m.peak_in_upstroke = true;
    }
    if (fraction < 0.0) fraction = 0.0;
    m.peak_timing_fraction = fraction;
    return m;
}

struct MatrixEntry {
    double r1_length_mm;
    double frequency_hz;
    int trial;
    ForceRecord force;
    AngleRecord angle;
    std::optional<std::pair<double, double>> quiet_window_s;
};

struct TrialResult {
    int trial = 0;
    bool failed = false;
    std::string error_id;
    double offset_s = 0.0;
    std::vector<CycleMetrics> cycles;
};

struct Aggregate {
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 0;
};

struct ConditionSummary {
    double r1_length_mm;
    double frequency_hz;
    std::vector<TrialResult> trials;
    Aggregate peak_lift_N;
    Aggregate peak_timing_fraction;
};

struct ConditionComparison {
    double frequency_hz;
    double r1_length_mm;
    double shortest_length_mm;
    double peak_force_ratio;   // mean peak vs. the shortest length at this frequency
    double peak_timing_shift;  // mean timing fraction difference
};

struct SummaryReport {
    std::vector<ConditionSummary> conditions;
    std::vector<ConditionComparison> comparisons;
};

struct AnalysisOptions {
    LiftAxis axis = LiftAxis::Fz;
    SegmentOptions segmentation;
};

namespace detail {

inline Aggregate aggregate(const std::vector<double>& values) {
    Aggregate a;
    if (values.empty()) {
        a.mean = a.min = a.max = std::numeric_limits<double>::quiet_NaN();
        return a;
    }
    a.min = a.max = values.front();
    for (double v : values) {
        a.mean += v;
        a.min = std::min(a.min, v);
        a.max = std::max(a.max, v);
    }
    a.mean /= static_cast<double>(values.size());
    a.count = values.size();
    return a;
}

}  // namespace detail

// Full reduction of a test matrix: per-trial baseline removal, clock
// alignment, segmentation and cycle metrics, then per-condition aggregation
// and the cross-condition comparison against the shortest length. Failing
// trials are flagged in place, never dropped.
inline SummaryReport summarize(const std::vector<MatrixEntry>& entries,
                               const AnalysisOptions& opts = {}, unsigned threads = 1) {
    if (entries.empty()) throw ValidationError("empty test matrix");

    std::vector<TrialResult> results(entries.size());
    parallel_for(entries.size(), threads, [&](std::size_t i) {
        const MatrixEntry& e = entries[i];
        TrialResult r;
        r.trial = e.trial;
        try {
            ForceRecord corrected = remove_baseline(e.force, e.quiet_window_s);
            AlignedPair aligned = align(corrected, e.angle, {opts.axis, 0.0});
            SegmentOptions seg = opts.segmentation;
            if (seg.nominal_freq_hz <= 0.0) seg.nominal_freq_hz = aligned.flap_freq_hz;
            r.offset_s = aligned.offset_s;
            for (const FlapCycle& c : segment_cycles(aligned.angle, seg))
                r.cycles.push_back(cycle_metrics(aligned.force, c, opts.axis));
        } catch (const Error& err) {
            r.failed = true;
            r.error_id = err.id();
            r.cycles.clear();
        }
        results[i] = std::move(r);
    });

    std::map<std::pair<double, double>, ConditionSummary> grouped;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto key = std::make_pair(entries[i].frequency_hz, entries[i].r1_length_mm);
        auto [it, fresh] = grouped.try_emplace(key);
        if (fresh) {
            it->second.r1_length_mm = entries[i].r1_length_mm;
            it->second.frequency_hz = entries[i].frequency_hz;
        }
        it->second.trials.push_back(results[i]);
    }

    // Aggregation is over per-trial means (a trial is the repeatability unit:
    // identical trials collapse to min = max = mean).
    SummaryReport report;
    for (auto& [key, cond] : grouped) {
        std::vector<double> peaks, timings;
        for (const TrialResult& tr : cond.trials) {
            if (tr.failed || tr.cycles.empty()) continue;
            double p = 0.0, f = 0.0;
            for (const CycleMetrics& c : tr.cycles) {
                p += c.peak_lift_N;
                f += c.peak_timing_fraction;
            }
            peaks.push_back(p / static_cast<double>(tr.cycles.size()));
            timings.push_back(f / static_cast<double>(tr.cycles.size()));
        }
        cond.peak_lift_N = detail::aggregate(peaks);
        cond.peak_timing_fraction = detail::aggregate(timings);
        report.conditions.push_back(cond);
    }

    // Compare every condition against the shortest length with data at the
    // same frequency (the baseline for the peak-force ratio).
    std::map<double, const ConditionSummary*> shortest;
    for (const auto& cond : report.conditions) {
        if (cond.peak_lift_N.count == 0) continue;
        auto [it, fresh] = shortest.try_emplace(cond.frequency_hz, &cond);
        if (!fresh && cond.r1_length_mm < it->second->r1_length_mm) it->second = &cond;
    }
    for (const auto& cond : report.conditions) {
        auto it = shortest.find(cond.frequency_hz);
        if (it == shortest.end() || cond.peak_lift_N.count == 0) continue;
        const ConditionSummary& ref = *it->second;
        report.comparisons.push_back({cond.frequency_hz, cond.r1_length_mm, ref.r1_length_mm,
                                      cond.peak_lift_N.mean / ref.peak_lift_N.mean,
                                      cond.peak_timing_fraction.mean - ref.peak_timing_fraction.mean});
    }
    return report;
}

}  // namespace wingreg
