#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "wingreg/errors.hpp"
#include "wingreg/geometry.hpp"

namespace wingreg {

// A joint of the planar mechanism. Ground points carry fixed coordinates;
// free points carry an initial-guess position used to select the assembly
// branch.
struct PointDef {
    std::string id;
    bool ground = false;
    Vec2 coords;  // fixed position (ground) or reference guess (free)
};

// Rigid distance constraint between two joints, in millimeters.
struct BarDef {
    std::string a;
    std::string b;
    double length_mm = 0.0;
    std::string name;  // optional symbolic name ("R1", ...)
};

// The single rotary input: the bar `name` (pivot->point) whose orientation
// is the crank angle, measured counterclockwise from +x of the ground frame.
struct DriverDef {
    std::string pivot;
    std::string point;
    std::string name;
};

struct SolverConfig {
    double tolerance = 1e-9;            // mm
    int max_iterations = 50;
    double continuation_step = M_PI / 180.0;  // rad

    void validate() const {
        if (!(tolerance > 0.0)) throw ValidationError("tolerance must be > 0");
        if (max_iterations < 1) throw ValidationError("max_iterations must be >= 1");
        if (!(continuation_step > 0.0) || continuation_step > M_PI / 8.0 + 1e-15)
            throw ValidationError("continuation_step must be in (0, pi/8]");
    }
};

struct Pose {
    double crank_angle = 0.0;                 // rad
    std::map<std::string, Vec2> coordinates;  // point id -> position, mm
    double residual = 0.0;                    // max abs constraint violation, mm

    const Vec2& at(const std::string& id) const {
        auto it = coordinates.find(id);
        if (it == coordinates.end()) throw ValidationError("pose has no point '" + id + "'");
        return it->second;
    }
};

class LinkageDef {
public:
    LinkageDef(std::vector<PointDef> points, std::vector<BarDef> bars, DriverDef driver)
        : points_(std::move(points)), bars_(std::move(bars)), driver_(std::move(driver)) {
        validate();
    }

    const std::vector<PointDef>& points() const { return points_; }
    const std::vector<BarDef>& bars() const { return bars_; }
    const DriverDef& driver() const { return driver_; }
    std::size_t driver_bar_index() const { return driver_bar_; }
    double driver_length() const { return bars_[driver_bar_].length_mm; }

    const std::map<std::string, std::size_t>& named_lengths() const { return named_lengths_; }

    bool has_point(const std::string& id) const { return point_index_.count(id) != 0; }

    const PointDef& point(const std::string& id) const {
        auto it = point_index_.find(id);
        if (it == point_index_.end()) throw ValidationError("unknown point '" + id + "'");
        return points_[it->second];
    }

    // Pose assembled from the packaged guess coordinates (branch selector).
    Pose reference_guess() const {
        Pose p;
        for (const auto& pt : points_) p.coordinates[pt.id] = pt.coords;
        return p;
    }

    // Copy of this definition with the named bar set to `length_mm`.
    LinkageDef with_length(const std::string& bar_name, double length_mm) const {
        auto it = named_lengths_.find(bar_name);
        if (it == named_lengths_.end())
            throw ValidationError("no bar named '" + bar_name + "'");
        std::vector<BarDef> bars = bars_;
        bars[it->second].length_mm = length_mm;
        return LinkageDef(points_, std::move(bars), driver_);
    }

private:
    void validate() {
        if (points_.empty()) throw ValidationError("linkage has no points");
        for (std::size_t i = 0; i < points_.size(); ++i) {
            if (points_[i].id.empty()) throw ValidationError("point with empty id");
            if (!point_index_.emplace(points_[i].id, i).second)
                throw ValidationError("duplicate point id '" + points_[i].id + "'");
        }

        driver_bar_ = bars_.size();
        std::set<std::pair<std::string, std::string>> seen;
        for (std::size_t i = 0; i < bars_.size(); ++i) {
            const BarDef& bar = bars_[i];
            if (!has_point(bar.a) || !has_point(bar.b))
                throw ValidationError("bar '" + bar.a + "'-'" + bar.b + "' references unknown point");
            if (bar.a == bar.b) throw ValidationError("bar connects point '" + bar.a + "' to itself");
            if (point(bar.a).ground && point(bar.b).ground)
                throw ValidationError("bar '" + bar.a + "'-'" + bar.b +
                                      "' connects two ground points (ground geometry is fixed)");
            std::pair<std::string, std::string> key = std::minmax(bar.a, bar.b);
            if (!seen.insert(key).second)
                throw ValidationError("duplicate bar between '" + bar.a + "' and '" + bar.b + "'");
            if (!bar.name.empty() && !named_lengths_.emplace(bar.name, i).second)
                throw ValidationError("duplicate bar name '" + bar.name + "'");
            if (bar.name == driver_.name && !driver_.name.empty()) driver_bar_ = i;
        }

        if (driver_.name.empty()) throw ValidationError("driver has no bar name");
        if (driver_bar_ == bars_.size())
            throw ValidationError("driver bar '" + driver_.name + "' not found");
        const BarDef& crank = bars_[driver_bar_];
        const bool crank_matches = (crank.a == driver_.pivot && crank.b == driver_.point) ||
                                   (crank.a == driver_.point && crank.b == driver_.pivot);
        if (!crank_matches)
            throw ValidationError("driver bar '" + driver_.name + "' does not connect pivot '" +
                                  driver_.pivot + "' to point '" + driver_.point + "'");
        if (point(driver_.point).ground)
            throw ValidationError("driver point '" + driver_.point + "' must be free");

        // All bars must have positive length; the crank alone may be zero
        // (degenerate driver, which pins its point onto the pivot).
        for (std::size_t i = 0; i < bars_.size(); ++i) {
            if (i == driver_bar_) {
                if (bars_[i].length_mm < 0.0) throw ValidationError("crank length must be >= 0");
            } else if (!(bars_[i].length_mm > 0.0)) {
                throw ValidationError("bar '" + bars_[i].a + "'-'" + bars_[i].b +
                                      "' must have length > 0");
            }
        }

        std::size_t free_count = 0;
        for (const auto& pt : points_) free_count += pt.ground ? 0 : 1;
        // Driver contributes two equations and replaces the crank bar's one.
        const std::size_t equations = (bars_.size() - 1) + 2;
        if (equations != 2 * free_count)
            throw ValidationError("constraint system is not square: " + std::to_string(equations) +
                                  " equations for " + std::to_string(2 * free_count) +
                                  " unknowns");
        free_points_.clear();
        for (std::size_t i = 0; i < points_.size(); ++i)
            if (!points_[i].ground) free_points_.push_back(i);
    }

    friend class ConstraintSystem;

    std::vector<PointDef> points_;
    std::vector<BarDef> bars_;
    DriverDef driver_;
    std::size_t driver_bar_ = 0;
    std::map<std::string, std::size_t> point_index_;
    std::map<std::string, std::size_t> named_lengths_;
    std::vector<std::size_t> free_points_;
};

// Stacked distance-constraint residual and Jacobian for one crank angle.
class ConstraintSystem {
public:
    ConstraintSystem(const LinkageDef& def, double crank_angle)
        : def_(def), crank_angle_(crank_angle) {
        for (std::size_t k = 0; k < def.free_points_.size(); ++k)
            unknown_of_point_[def.free_points_[k]] = k;
    }

    std::size_t size() const { return 2 * def_.free_points_.size(); }

    Eigen::VectorXd pack(const Pose& pose) const {
        Eigen::VectorXd x(size());
        for (std::size_t k = 0; k < def_.free_points_.size(); ++k) {
            const auto& id = def_.points_[def_.free_points_[k]].id;
            auto it = pose.coordinates.find(id);
            if (it == pose.coordinates.end())
                throw ValidationError("initial guess missing free point '" + id + "'");
            x[2 * k] = it->second.x;
            x[2 * k + 1] = it->second.y;
        }
        return x;
    }

    Pose unpack(const Eigen::VectorXd& x, double residual) const {
        Pose pose;
        pose.crank_angle = crank_angle_;
        pose.residual = residual;
        for (const auto& pt : def_.points_)
            if (pt.ground) pose.coordinates[pt.id] = pt.coords;
        for (std::size_t k = 0; k < def_.free_points_.size(); ++k)
            pose.coordinates[def_.points_[def_.free_points_[k]].id] = {x[2 * k], x[2 * k + 1]};
        return pose;
    }

    Vec2 position(std::size_t point_idx, const Eigen::VectorXd& x) const {
        const PointDef& pt = def_.points_[point_idx];
        if (pt.ground) return pt.coords;
        std::size_t k = unknown_of_point_.at(point_idx);
        return {x[2 * k], x[2 * k + 1]};
    }

    Eigen::VectorXd residual(const Eigen::VectorXd& x) const {
        Eigen::VectorXd r(size());
        std::size_t row = 0;
        for (std::size_t i = 0; i < def_.bars_.size(); ++i) {
            if (i == def_.driver_bar_) continue;
            const BarDef& bar = def_.bars_[i];
            Vec2 pa = position(def_.point_index_.at(bar.a), x);
            Vec2 pb = position(def_.point_index_.at(bar.b), x);
            r[row++] = distance(pa, pb) - bar.length_mm;
        }
        const double L = def_.driver_length();
        Vec2 pivot = position(def_.point_index_.at(def_.driver_.pivot), x);
        Vec2 driven = position(def_.point_index_.at(def_.driver_.point), x);
        r[row++] = driven.x - (pivot.x + L * std::cos(crank_angle_));
        r[row++] = driven.y - (pivot.y + L * std::sin(crank_angle_));
        return r;
    }

    Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const {
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(size(), size());
        std::size_t row = 0;
        for (std::size_t i = 0; i < def_.bars_.size(); ++i) {
            if (i == def_.driver_bar_) continue;
            const BarDef& bar = def_.bars_[i];
            std::size_t ia = def_.point_index_.at(bar.a);
            std::size_t ib = def_.point_index_.at(bar.b);
            Vec2 d = position(ia, x) - position(ib, x);
            double n = d.norm();
            if (n > 1e-300) {
                Vec2 u{d.x / n, d.y / n};
                if (auto it = unknown_of_point_.find(ia); it != unknown_of_point_.end()) {
                    J(row, 2 * it->second) = u.x;
                    J(row, 2 * it->second + 1) = u.y;
                }
                if (auto it = unknown_of_point_.find(ib); it != unknown_of_point_.end()) {
                    J(row, 2 * it->second) = -u.x;
                    J(row, 2 * it->second + 1) = -u.y;
                }
            }
            ++row;
        }
        if (auto it = unknown_of_point_.find(def_.point_index_.at(def_.driver_.point));
            it != unknown_of_point_.end()) {
            J(row, 2 * it->second) = 1.0;
            J(row + 1, 2 * it->second + 1) = 1.0;
        }
        if (auto it = unknown_of_point_.find(def_.point_index_.at(def_.driver_.pivot));
            it != unknown_of_point_.end()) {
            J(row, 2 * it->second) = -1.0;
            J(row + 1, 2 * it->second + 1) = -1.0;
        }
        return J;
    }

private:
    const LinkageDef& def_;
    double crank_angle_;
    std::map<std::size_t, std::size_t> unknown_of_point_;
};

// Damped Newton iteration on the stacked residual. Steps are halved (up to 8
// times) whenever the residual norm would increase. A rank-deficient Jacobian
// falls back to the minimum-norm least-squares step, so grazing a flat
// (toggle) configuration does not abort the solve; the hard SingularJacobian
// error fires only when a deficient system also stops making progress.
namespace detail {

// One best-effort extra Newton step once inside tolerance. Drives the
// residual toward the floating-point floor so that downstream coordinate
// comparisons are not limited by an early exit at exactly the tolerance.
inline void polish_step(const ConstraintSystem& sys, Eigen::VectorXd& x, Eigen::VectorXd& r,
                        double& rnorm) {
    Eigen::MatrixXd J = sys.jacobian(x);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
    Eigen::VectorXd step = lu.isInvertible()
                               ? Eigen::VectorXd(lu.solve(-r))
                               : Eigen::VectorXd(J.completeOrthogonalDecomposition().solve(-r));
    Eigen::VectorXd x2 = x + step;
    Eigen::VectorXd r2 = sys.residual(x2);
    const double r2norm = r2.lpNorm<Eigen::Infinity>();
    if (r2norm < rnorm) {
        x = std::move(x2);
        r = std::move(r2);
        rnorm = r2norm;
    }
}

}  // namespace detail

inline Pose solve_pose(const LinkageDef& def, double crank_angle, const Pose& initial_guess,
                       const SolverConfig& cfg = {}) {
    cfg.validate();
    ConstraintSystem sys(def, crank_angle);
    Eigen::VectorXd x = sys.pack(initial_guess);
    Eigen::VectorXd r = sys.residual(x);
    double rnorm = r.lpNorm<Eigen::Infinity>();

    for (int it = 0; it < cfg.max_iterations; ++it) {
        if (rnorm <= cfg.tolerance) {
            detail::polish_step(sys, x, r, rnorm);
            return sys.unpack(x, rnorm);
        }

        Eigen::MatrixXd J = sys.jacobian(x);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
        const bool deficient = !lu.isInvertible();
        Eigen::VectorXd step;
        if (deficient) {
            step = J.completeOrthogonalDecomposition().solve(-r);
        } else {
            step = lu.solve(-r);
        }

        double alpha = 1.0;
        bool reduced = false;
        Eigen::VectorXd x_new, r_new;
        double rnorm_new = 0.0;
        for (int h = 0; h <= 8; ++h) {
            x_new = x + alpha * step;
            r_new = sys.residual(x_new);
            rnorm_new = r_new.lpNorm<Eigen::Infinity>();
            if (rnorm_new < rnorm) {
                reduced = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!reduced) {
            if (deficient)
                throw SingularJacobian("rank-deficient constraint system at crank angle " +
                                       std::to_string(crank_angle) + " rad (toggle or locked)");
            throw NonConvergence("stalled at residual " + std::to_string(rnorm) +
                                     " mm at crank angle " + std::to_string(crank_angle) + " rad",
                                 crank_angle);
        }
        x = x_new;
        r = r_new;
        rnorm = rnorm_new;
    }
    if (rnorm <= cfg.tolerance) {
        detail::polish_step(sys, x, r, rnorm);
        return sys.unpack(x, rnorm);
    }
    throw NonConvergence("residual " + std::to_string(rnorm) + " mm after " +
                             std::to_string(cfg.max_iterations) + " iterations at crank angle " +
                             std::to_string(crank_angle) + " rad",
                         crank_angle);
}

// Raised when a trajectory sweep loses the branch mid-cycle; carries the last
// successfully solved pose.
class SweepNonConvergence : public NonConvergence {
public:
    SweepNonConvergence(const std::string& msg, double crank_angle_rad, Pose last_good)
        : NonConvergence(msg, crank_angle_rad), last_good_pose_(std::move(last_good)) {}

    const Pose& last_good_pose() const noexcept { return last_good_pose_; }

private:
    Pose last_good_pose_;
};

namespace detail {

// Per-step displacement beyond this signals a silent branch hop.
inline constexpr double kBranchHopCap_mm = 5.0;

inline std::vector<double> sweep_angles(double step) {
    std::vector<double> angles;
    const double two_pi = 2.0 * M_PI;
    for (double a = 0.0; a < two_pi - 1e-12; ) {
        angles.push_back(a);
        a = static_cast<double>(angles.size()) * step;
    }
    angles.push_back(two_pi);
    return angles;
}

}  // namespace detail

// Sweeps one full crank revolution with continuation (each pose seeds the
// next solve). The returned poses are sampled at 0, step, 2*step, ..., 2*pi.
inline std::vector<Pose> sweep_trajectory(const LinkageDef& def, const SolverConfig& cfg = {}) {
    cfg.validate();
    const std::vector<double> angles = detail::sweep_angles(cfg.continuation_step);
    std::vector<Pose> poses;
    poses.reserve(angles.size());
    for (double angle : angles) {
        // Secant predictor: extrapolating the last two poses keeps the
        // continuation on its branch through fold (flat) configurations,
        // where the nearest root alone would switch branches.
        Pose guess;
        if (poses.size() >= 2) {
            guess = poses.back();
            const Pose& prev = poses[poses.size() - 2];
            for (auto& [id, p] : guess.coordinates) {
                const Vec2& q = prev.coordinates.at(id);
                p = {2.0 * p.x - q.x, 2.0 * p.y - q.y};
            }
        } else if (poses.size() == 1) {
            guess = poses.back();
        } else {
            guess = def.reference_guess();
        }
        Pose pose;
        try {
            pose = solve_pose(def, angle, guess, cfg);
        } catch (const NonConvergence& e) {
            if (poses.empty()) throw;
            throw SweepNonConvergence(std::string(e.what()) + " (branch lost mid-cycle)", angle,
                                      poses.back());
        }
        if (!poses.empty()) {
            double moved = 0.0;
            for (const auto& [id, p] : pose.coordinates)
                moved = std::max(moved, distance(p, poses.back().coordinates.at(id)));
            if (moved > detail::kBranchHopCap_mm)
                throw SweepNonConvergence(
                    "pose jumped " + std::to_string(moved) + " mm in one continuation step at crank angle " +
                        std::to_string(angle) + " rad (branch hop)",
                    angle, poses.back());
        }
        poses.push_back(std::move(pose));
    }

    // Cyclic closure: the 2*pi pose must return to the 0 pose.
    double gap = 0.0;
    for (const auto& [id, p] : poses.front().coordinates)
        gap = std::max(gap, distance(p, poses.back().coordinates.at(id)));
    if (gap > 10.0 * cfg.tolerance)
        throw SweepNonConvergence("trajectory failed to close (gap " + std::to_string(gap) + " mm)",
                                  2.0 * M_PI, poses.back());
    return poses;
}

}  // namespace wingreg
