#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "wingreg/errors.hpp"
#include "wingreg/geometry.hpp"
#include "wingreg/linkage.hpp"
#include "wingreg/parallel.hpp"

namespace wingreg {

// Solved poses over one crank revolution for one regulator length, with the
// marker point's path extracted for envelope analysis.
struct GaitTrajectory {
    double length_mm = 0.0;
    std::vector<Pose> poses;
    std::vector<Vec2> marker_path;
};

struct GaitMetrics {
    double sweep_amplitude_deg = 0.0;  // peak-to-peak shoulder angle
    double envelope_area_mm2 = 0.0;    // |shoelace| of the marker path
    double marker_extent_mm = 0.0;     // bounding-box diagonal
};

struct LengthSweepSpec {
    LinkageDef base_def;
    std::string target_bar;
    std::vector<double> lengths;
    std::string marker_point;
    // Shoulder-angle proxy: orientation of the pivot->ray segment in the
    // ground frame (the encoder's view of the wing angle).
    std::string shoulder_pivot;
    std::string shoulder_ray;

    void validate() const {
        if (lengths.empty()) throw ValidationError("sweep needs at least one length");
        for (std::size_t i = 0; i < lengths.size(); ++i) {
            if (!(lengths[i] > 0.0)) throw ValidationError("sweep lengths must be > 0");
            // Duplicates are legal (repeat runs); the order must not decrease.
            if (i > 0 && lengths[i] < lengths[i - 1])
                throw ValidationError("sweep lengths must be in ascending order");
        }
        if (base_def.named_lengths().find(target_bar) == base_def.named_lengths().end())
            throw ValidationError("no bar named '" + target_bar + "' in linkage");
        for (const std::string* id : {&marker_point, &shoulder_pivot, &shoulder_ray})
            if (!base_def.has_point(*id)) throw ValidationError("unknown point '" + *id + "'");
    }
};

inline GaitTrajectory make_trajectory(const LinkageDef& def, const std::string& marker_point,
                                      double length_mm, const SolverConfig& cfg = {}) {
    if (!def.has_point(marker_point))
        throw ValidationError("unknown marker point '" + marker_point + "'");
    GaitTrajectory traj;
    traj.length_mm = length_mm;
    traj.poses = sweep_trajectory(def, cfg);
    traj.marker_path.reserve(traj.poses.size());
    for (const Pose& p : traj.poses) traj.marker_path.push_back(p.at(marker_point));
    return traj;
}

inline GaitMetrics compute_metrics(const GaitTrajectory& traj, const std::string& shoulder_pivot,
                                   const std::string& shoulder_ray) {
    if (traj.poses.empty()) throw ValidationError("trajectory has no poses");

    // A marker that never moves (zero-length crank, marker on ground) has no
    // envelope to measure.
    double spread = 0.0;
    for (const Vec2& p : traj.marker_path)
        spread = std::max(spread, distance(p, traj.marker_path.front()));
    if (spread <= 1e-9) throw DegeneratePath("marker path collapses to a single point");

    std::vector<double> shoulder;
    shoulder.reserve(traj.poses.size());
    for (const Pose& pose : traj.poses) {
        Vec2 v = pose.at(shoulder_ray) - pose.at(shoulder_pivot);
        shoulder.push_back(std::atan2(v.y, v.x));
    }
    std::vector<double> unwrapped = unwrap_angles(shoulder);
    double lo = unwrapped[0], hi = unwrapped[0];
    for (double a : unwrapped) {
        lo = std::min(lo, a);
        hi = std::max(hi, a);
    }

    GaitMetrics m;
    m.sweep_amplitude_deg = (hi - lo) * 180.0 / M_PI;
    m.envelope_area_mm2 = std::abs(shoelace_area(traj.marker_path));
    m.marker_extent_mm = bbox_diagonal(traj.marker_path);
    return m;
}

// Solves one trajectory per requested length (independently, optionally in
// parallel) and pairs it with its envelope metrics. Output order follows the
// input length order regardless of scheduling.
inline std::vector<std::pair<GaitTrajectory, GaitMetrics>> run_length_sweep(
    const LengthSweepSpec& spec, const SolverConfig& cfg = {}, unsigned threads = 1) {
    spec.validate();
    cfg.validate();
    std::vector<std::pair<GaitTrajectory, GaitMetrics>> out(spec.lengths.size());
    parallel_for(spec.lengths.size(), threads, [&](std::size_t i) {
        const double length = spec.lengths[i];
        LinkageDef def = spec.base_def.with_length(spec.target_bar, length);
        GaitTrajectory traj;
        try {
            traj = make_trajectory(def, spec.marker_point, length, cfg);
        } catch (const NonConvergence& e) {
            throw NonConvergence("length " + std::to_string(length) + " mm: " + e.what(),
                                 e.crank_angle_rad());
        }
        GaitMetrics metrics = compute_metrics(traj, spec.shoulder_pivot, spec.shoulder_ray);
        out[i] = {std::move(traj), std::move(metrics)};
    });
    return out;
}

}  // namespace wingreg
