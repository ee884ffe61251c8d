#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace wingreg {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const Vec2& o) const = default;

    double norm() const { return std::hypot(x, y); }
};

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

// Signed shoelace area of a polyline treated as a closed polygon.
inline double shoelace_area(std::span<const Vec2> path) {
    if (path.size() < 3) return 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < path.size(); ++i) {
        const Vec2& p = path[i];
        const Vec2& q = path[(i + 1) % path.size()];
        acc += p.x * q.y - q.x * p.y;
    }
    return 0.5 * acc;
}

// Diagonal of the axis-aligned bounding box.
inline double bbox_diagonal(std::span<const Vec2> path) {
    if (path.empty()) return 0.0;
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = xmax;
    for (const Vec2& p : path) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    return std::hypot(xmax - xmin, ymax - ymin);
}

// Removes 2*pi jumps so that consecutive samples differ by less than pi.
inline std::vector<double> unwrap_angles(std::span<const double> wrapped) {
    std::vector<double> out(wrapped.begin(), wrapped.end());
    constexpr double two_pi = 2.0 * M_PI;
    for (std::size_t i = 1; i < out.size(); ++i) {
        double d = out[i] - out[i - 1];
        while (d > M_PI) { out[i] -= two_pi; d = out[i] - out[i - 1]; }
        while (d < -M_PI) { out[i] += two_pi; d = out[i] - out[i - 1]; }
    }
    return out;
}

}  // namespace wingreg
