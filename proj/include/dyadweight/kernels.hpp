#pragma once

#include <cmath>
#include <numbers>

namespace dyadweight::kernels {

// Poisson kernel P_t(u) = t / (pi (t^2 + u^2)) and its exact cell masses.
inline double poisson(double u, double t) {
    return t / (std::numbers::pi * (t * t + u * u));
}

// mass of P_t(x - .) over [a, b)
inline double poisson_mass(double x, double a, double b, double t) {
    return (std::atan((x - a) / t) - std::atan((x - b) / t)) / std::numbers::pi;
}

// mass of P_t(x - .) over (-inf, a) and [b, inf)
inline double poisson_left_tail(double x, double a, double t) {
    return (std::numbers::pi / 2 - std::atan((x - a) / t)) / std::numbers::pi;
}
inline double poisson_right_tail(double x, double b, double t) {
    return (std::atan((x - b) / t) + std::numbers::pi / 2) / std::numbers::pi;
}

// heat kernel k_t(u) = (4 pi t)^{-1/2} exp(-u^2 / 4t) and its cell masses
inline double heat(double u, double t) {
    return std::exp(-u * u / (4.0 * t)) / std::sqrt(4.0 * std::numbers::pi * t);
}

inline double heat_mass(double x, double a, double b, double t) {
    const double s = 1.0 / std::sqrt(4.0 * t);
    return 0.5 * (std::erf((x - a) * s) - std::erf((x - b) * s));
}

inline double heat_left_tail(double x, double a, double t) {
    return 0.5 * std::erfc((x - a) / std::sqrt(4.0 * t));
}
inline double heat_right_tail(double x, double b, double t) {
    return 0.5 * std::erfc((b - x) / std::sqrt(4.0 * t));
}

} // namespace dyadweight::kernels
