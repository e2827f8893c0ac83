#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace torwave {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kPi = std::numbers::pi;

/** Wrap a coordinate into [-pi, pi). */
inline double wrap_angle(double t) {
    double w = std::fmod(t + kPi, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    return w - kPi;
}

/** Periodic distance on the flat torus R^2/(2pi Z)^2.
 * Minimizing over the nearest translate ring; valid whenever the
 * true distance is below pi in each coordinate. */
inline double torus_dist(double x1, double y1, double x2, double y2) {
    const double dx = wrap_angle(x1 - x2);
    const double dy = wrap_angle(y1 - y2);
    return std::sqrt(dx * dx + dy * dy);
}

/** C^inf one-sided bump, phi(u) = exp(-1/u) for u > 0, 0 otherwise. */
inline double exp_bump(double u) {
    return u > 0.0 ? std::exp(-1.0 / u) : 0.0;
}

/** C^inf transition: 0 for u <= 0, 1 for u >= 1, strictly monotone between. */
inline double smooth_transition(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    const double a = exp_bump(u);
    const double b = exp_bump(1.0 - u);
    return a / (a + b);
}

/** Quintic smoothstep: C^2 at both ends (s, s', s'' vanish at 0 and 1). */
inline double smoothstep5(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

/** x^p for x >= 0 with pow(0, 0) = 1. */
inline double pos_pow(double x, double p) {
    if (x <= 0.0) return p == 0.0 ? 1.0 : 0.0;
    return std::pow(x, p);
}

inline int int_gcd(int a, int b) {
    a = std::abs(a);
    b = std::abs(b);
    while (b != 0) {
        int t = a % b;
        a = b;
        b = t;
    }
    return a;
}

}  // namespace torwave
