#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "wingreg/actuator_spec.hpp"
#include "wingreg/errors.hpp"
#include "wingreg/force_budget.hpp"

namespace wingreg {

// Single-triangle amplifier: the actuator pushes the triangle's base apart,
// the apex rises. d_initial is the input offset already present at rest,
// base_mm the fixed offset, hyp_mm the hypotenuse link.
struct TriangleMechanism {
    double d_initial_mm;
    double base_mm;
    double hyp_mm;
    double stroke_mm;  // usable input range of d_input

    TriangleMechanism(double d_initial, double base, double hyp, double stroke)
        : d_initial_mm(d_initial), base_mm(base), hyp_mm(hyp), stroke_mm(stroke) {
        if (!(hyp_mm > 0.0)) throw ValidationError("hypotenuse must be > 0");
        if (!(stroke_mm > 0.0)) throw ValidationError("stroke must be > 0");
        // Half-span is linear in d_input, so validity at both ends covers the range.
        for (double d : {0.0, stroke_mm}) {
            if (std::abs(0.5 * (d + d_initial_mm - base_mm)) >= hyp_mm)
                throw ValidationError("triangle degenerates within the stroke");
        }
    }
};

// Output displacement for a given input displacement (both mm).
inline double triangle_output(const TriangleMechanism& mech, double d_input_mm) {
    const double span = d_input_mm + mech.d_initial_mm - mech.base_mm;
    const double radicand = mech.hyp_mm * mech.hyp_mm - 0.25 * span * span;
    if (radicand <= 0.0)
        throw TriangleDegenerate("triangle flattens at d_input = " + std::to_string(d_input_mm) +
                                 " mm");
    return 0.5 * span / std::sqrt(radicand) * d_input_mm;
}

// d(output)/d(input); reciprocal is the instantaneous mechanical advantage.
inline double triangle_output_derivative(const TriangleMechanism& mech, double d_input_mm) {
    const double s = d_input_mm + mech.d_initial_mm - mech.base_mm;
    const double g2 = mech.hyp_mm * mech.hyp_mm - 0.25 * s * s;
    if (g2 <= 0.0)
        throw TriangleDegenerate("triangle flattens at d_input = " + std::to_string(d_input_mm) +
                                 " mm");
    const double g = std::sqrt(g2);
    return ((d_input_mm + s) * g + 0.25 * s * s * d_input_mm / g) / (2.0 * g2);
}

// Small-input limit of d_input/d_output (only meaningful when d_initial > base).
inline double triangle_ma_limit(const TriangleMechanism& mech) {
    const double c = mech.d_initial_mm - mech.base_mm;
    if (!(c > 0.0)) throw ValidationError("MA limit requires d_initial > base");
    return std::sqrt(mech.hyp_mm * mech.hyp_mm - 0.25 * c * c) / (0.5 * c);
}

struct CurveSample {
    double d_input_mm;
    double d_output_mm;
    double ma_effective;      // cumulative d_input / d_output
    double ma_instantaneous;  // 1 / (d out/d in)
};

struct MechanismCurve {
    std::vector<CurveSample> samples;
};

// Samples d_input uniformly over (0, stroke]. ma_effective is the
// figure-consistent cumulative ratio (the printed equation's reciprocal);
// the derivative-based instantaneous MA rides along as a secondary column.
inline MechanismCurve ma_curve(const TriangleMechanism& mech, int n_samples) {
    if (n_samples < 2) throw ValidationError("need at least 2 curve samples");
    MechanismCurve curve;
    curve.samples.reserve(n_samples);
    for (int i = 1; i <= n_samples; ++i) {
        const double d = mech.stroke_mm * static_cast<double>(i) / n_samples;
        const double out = triangle_output(mech, d);
        const double slope = triangle_output_derivative(mech, d);
        curve.samples.push_back({d, out, out > 0.0 ? d / out : std::numeric_limits<double>::quiet_NaN(),
                                 slope != 0.0 ? 1.0 / slope : std::numeric_limits<double>::infinity()});
    }
    return curve;
}

// Ideal lever: displacement scales by arm_out/arm_in, force by the reciprocal.
inline double lever_output(double arm_in_mm, double arm_out_mm, double d_input_mm) {
    if (!(arm_in_mm > 0.0) || !(arm_out_mm > 0.0)) throw ValidationError("lever arms must be > 0");
    return d_input_mm * (arm_out_mm / arm_in_mm);  // ratio first: equal arms are exact
}

inline MechanismCurve lever_curve(double arm_in_mm, double arm_out_mm, double stroke_mm,
                                  int n_samples) {
    if (n_samples < 2) throw ValidationError("need at least 2 curve samples");
    if (!(stroke_mm > 0.0)) throw ValidationError("stroke must be > 0");
    MechanismCurve curve;
    const double ma = arm_in_mm / arm_out_mm;
    for (int i = 1; i <= n_samples; ++i) {
        const double d = stroke_mm * static_cast<double>(i) / n_samples;
        curve.samples.push_back({d, lever_output(arm_in_mm, arm_out_mm, d), ma, ma});
    }
    return curve;
}

inline double direct_drive_output(double d_input_mm) { return d_input_mm; }

inline MechanismCurve direct_drive_curve(double stroke_mm, int n_samples) {
    return lever_curve(1.0, 1.0, stroke_mm, n_samples);
}

struct FeasibilityReport {
    double output_stroke_mm = 0.0;      // achievable output over the actuator stroke
    double min_force_ma = 0.0;          // over the used input range
    double deliverable_force_gf = 0.0;  // dynamic force * min force MA
    double used_input_mm = 0.0;
    bool displacement_pass = false;
    bool force_pass = false;
    bool pass = false;
};

// Checks a mechanism curve against the regulator requirement for a given
// actuator. The "used" input range ends where the requirement displacement is
// first reached (or at the actuator stroke if it never is); the force margin
// is evaluated over that range only, since the input beyond it is never
// commanded.
inline FeasibilityReport feasibility(const MechanismCurve& curve, const ActuatorSpec& act,
                                     const RegulatorRequirement& req) {
    act.validate();
    FeasibilityReport rep;
    double used_end = act.stroke_mm;
    bool reached = false;
    for (const CurveSample& s : curve.samples) {
        if (s.d_input_mm > act.stroke_mm * (1.0 + 1e-12)) break;
        rep.output_stroke_mm = std::max(rep.output_stroke_mm, s.d_output_mm);
        if (!reached && s.d_output_mm >= req.displacement_mm) {
            used_end = s.d_input_mm;
            reached = true;
        }
    }
    rep.used_input_mm = used_end;

    bool any = false;
    rep.min_force_ma = std::numeric_limits<double>::infinity();
    for (const CurveSample& s : curve.samples) {
        if (s.d_input_mm > used_end * (1.0 + 1e-12)) break;
        if (s.d_output_mm > 0.0) {
            rep.min_force_ma = std::min(rep.min_force_ma, s.ma_effective);
            any = true;
        } else {
            any = false;  // a non-transmitting sample inside the used range
            break;
        }
    }
    if (!any) rep.min_force_ma = 0.0;
    rep.deliverable_force_gf = act.dynamic_force_gf * rep.min_force_ma;
    rep.displacement_pass = rep.output_stroke_mm >= req.displacement_mm;
    rep.force_pass = rep.deliverable_force_gf >= req.actuation_force_gf;
    rep.pass = rep.displacement_pass && rep.force_pass;
    return rep;
}

struct TriangleBounds {
    double d_initial_min, d_initial_max;
    double base_min, base_max;
    double hyp_min, hyp_max;

    void validate() const {
        for (auto [lo, hi] : {std::pair{d_initial_min, d_initial_max},
                              std::pair{base_min, base_max}, std::pair{hyp_min, hyp_max}}) {
            if (!(lo > 0.0)) throw ValidationError("bounds must be positive");
            if (!(hi >= lo)) throw ValidationError("bound max must be >= min");
        }
    }
};

namespace detail {

inline std::vector<double> grid_axis(double lo, double hi, int n) {
    if (hi <= lo || n <= 1) return {lo};
    std::vector<double> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i)
        out.push_back(lo + (hi - lo) * static_cast<double>(i) / (n - 1));
    return out;
}

}  // namespace detail

// Deterministic grid search minimizing hyp_mm subject to the feasibility
// constraints, followed by one +-1-cell refinement pass at 10x resolution.
// Ties break on (hyp, d_initial, base) in that order.
inline TriangleMechanism optimize_triangle(const RegulatorRequirement& req, const ActuatorSpec& act,
                                           const TriangleBounds& bounds, int grid_n = 50,
                                           int curve_samples = 128) {
    bounds.validate();
    act.validate();
    if (grid_n < 1) throw ValidationError("grid resolution must be >= 1");

    struct Best {
        double hyp, d_initial, base;
        bool valid = false;
    } best;

    auto consider = [&](double di, double b, double h) {
        std::optional<TriangleMechanism> mech;
        try {
            mech.emplace(di, b, h, act.stroke_mm);
        } catch (const ValidationError&) {
            return;  // degenerate within the stroke
        }
        FeasibilityReport rep = feasibility(ma_curve(*mech, curve_samples), act, req);
        if (!rep.pass) return;
        if (!best.valid || h < best.hyp || (h == best.hyp && di < best.d_initial) ||
            (h == best.hyp && di == best.d_initial && b < best.base)) {
            best = {h, di, b, true};
        }
    };

    auto scan = [&](const TriangleBounds& bb, int n) {
        for (double h : detail::grid_axis(bb.hyp_min, bb.hyp_max, n))
            for (double di : detail::grid_axis(bb.d_initial_min, bb.d_initial_max, n))
                for (double b : detail::grid_axis(bb.base_min, bb.base_max, n))
                    consider(di, b, h);
    };

    scan(bounds, grid_n);
    if (!best.valid)
        throw Infeasible("no triangle geometry in bounds satisfies displacement " +
                         std::to_string(req.displacement_mm) + " mm and force " +
                         std::to_string(req.actuation_force_gf) + " gf with this actuator");

    // Refine around the best cell (one cell each way, 10x finer).
    auto cell = [&](double lo, double hi) {
        return grid_n > 1 && hi > lo ? (hi - lo) / (grid_n - 1) : 0.0;
    };
    TriangleBounds fine{
        std::max(bounds.d_initial_min, best.d_initial - cell(bounds.d_initial_min, bounds.d_initial_max)),
        std::min(bounds.d_initial_max, best.d_initial + cell(bounds.d_initial_min, bounds.d_initial_max)),
        std::max(bounds.base_min, best.base - cell(bounds.base_min, bounds.base_max)),
        std::min(bounds.base_max, best.base + cell(bounds.base_min, bounds.base_max)),
        std::max(bounds.hyp_min, best.hyp - cell(bounds.hyp_min, bounds.hyp_max)),
        std::min(bounds.hyp_max, best.hyp + cell(bounds.hyp_min, bounds.hyp_max))};
    scan(fine, 21);

    return TriangleMechanism(best.d_initial, best.base, best.hyp, act.stroke_mm);
}

}  // namespace wingreg
