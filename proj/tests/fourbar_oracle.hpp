#pragma once

// Closed-form planar four-bar position oracle, used to cross-check the
// Newton solver. Implemented directly from circle-circle intersection on
// plain doubles; deliberately does not include any solver header.

#include <cmath>
#include <optional>

namespace fourbar {

struct Point {
    double x, y;
};

struct Geometry {
    Point crank_pivot;     // O2
    Point follower_pivot;  // O4
    double crank;          // r2
    double coupler;        // r3
    double follower;       // r4
};

struct Solution {
    Point crank_pin;     // A = O2 + r2 * e(theta)
    Point follower_pin;  // B, on the chosen assembly branch
};

// branch +1 picks B on the left of the A->O4 ray, -1 the right.
inline std::optional<Solution> solve(const Geometry& g, double theta, int branch) {
    Solution s;
    s.crank_pin = {g.crank_pivot.x + g.crank * std::cos(theta),
                   g.crank_pivot.y + g.crank * std::sin(theta)};
    const double dx = g.follower_pivot.x - s.crank_pin.x;
    const double dy = g.follower_pivot.y - s.crank_pin.y;
    const double d = std::hypot(dx, dy);
    if (d < 1e-12) return std::nullopt;
    const double a = (d * d + g.coupler * g.coupler - g.follower * g.follower) / (2.0 * d);
    const double h2 = g.coupler * g.coupler - a * a;
    if (h2 < 0.0) return std::nullopt;  // not assemblable at this angle
    const double h = std::sqrt(h2);
    const double ux = dx / d, uy = dy / d;
    s.follower_pin = {s.crank_pin.x + a * ux - branch * h * uy,
                      s.crank_pin.y + a * uy + branch * h * ux};
    return s;
}

}  // namespace fourbar
