#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "dyadweight/errors.hpp"
#include "dyadweight/fft.hpp"
#include "dyadweight/kernels.hpp"
#include "dyadweight/weight.hpp"

namespace dyadweight {

enum class CharacteristicKind { DyadicAp, PoissonA2, HeatA2 };

struct Characteristic {
    double value = 1.0; // >= 1
    CharacteristicKind kind = CharacteristicKind::DyadicAp;
    double p = 2.0;     // dyadic kind only
    double delta() const { return value - 1.0; }
};

// sup over all dyadic I (levels 0..N) of  w_I ((w^{1/(1-p)})_I)^{p-1}.
// For p = 2 this is max_I w_I (w^{-1})_I. The supremum over the truncated
// lattice is exact for leaf-step weights.
inline Characteristic a2d_characteristic(const Weight& w, double p = 2.0) {
    if (!(p > 1.0)) throw size_error("a2d_characteristic: need p > 1");
    const auto& cfg = w.lattice();
    std::vector<double> dual(w.leaves().size());
    const double q = 1.0 / (1.0 - p);
    for (std::size_t i = 0; i < dual.size(); ++i) dual[i] = std::pow(w.leaves()[i], q);
    Weight u(std::move(dual), cfg);
    double best = 1.0;
    for (int k = 0; k <= cfg.max_depth; ++k) {
        const auto& wa = w.level_averages(k);
        const auto& ua = u.level_averages(k);
        for (std::size_t j = 0; j < wa.size(); ++j)
            best = std::max(best, wa[j] * std::pow(ua[j], p - 1.0));
    }
    return {best, CharacteristicKind::DyadicAp, p};
}

// Sample grid and extension rule for the half-plane characteristics.
// The weight is continued beyond [0,1) by even reflection (period 2) out to
// the truncation radius and treated as its period average past it; each
// kernel integral over a constant piece is evaluated in closed form, so the
// only quadrature parameter is where to sample, not how to integrate.
struct QuadratureSpec {
    double t_min = 0.0;        // 0 means 2^{-N-2}
    double t_max = 4.0;
    int t_count = 64;
    double truncation_radius = 64.0;
    double mass_tolerance = 1e-6;

    std::vector<double> t_grid(int depth) const {
        double lo = t_min > 0.0 ? t_min : std::ldexp(1.0, -depth - 2);
        std::vector<double> ts(t_count);
        for (int k = 0; k < t_count; ++k)
            ts[k] = (t_count == 1) ? lo : lo * std::pow(t_max / lo, double(k) / (t_count - 1));
        return ts;
    }
};

namespace detail {

// Offset kernel for the even-periodic extension: entry d holds the total
// kernel mass seen by a leaf midpoint from every in-range periodic copy of
// the leaf d steps to its right (mod the period of 2 units = 2^{N+1} leaves).
// Copies with negligible total mass fall through to the constant tail.
// The per-cell sums must reproduce each copy's closed-form total; that
// cross-check guards the kernel primitives and is reported via `covered`.
template <class CellMass>
inline std::vector<double> periodic_offset_kernel(int depth, double t, double radius,
                                                  CellMass cell, double mass_tolerance,
                                                  double& covered) {
    const std::size_t period = std::size_t(2) << depth; // leaves per period of length 2
    const double h = std::ldexp(1.0, -depth);
    const double x = 0.5 * h; // midpoint of leaf 0
    const int copies = std::max(1, int(std::ceil(radius / 2.0)));
    std::vector<double> g(period, 0.0);
    covered = 0.0;
    double cellwise = 0.0;
    for (int m = -copies; m < copies; ++m) {
        const double copy_mass = cell(x, 2.0 * m, 2.0 * (m + 1), t);
        if (copy_mass < 1e-17) continue;
        covered += copy_mass;
        for (std::size_t d = 0; d < period; ++d) {
            double a = double(d) * h + 2.0 * m;
            double mass = cell(x, a, a + h, t);
            g[d] += mass;
            cellwise += mass;
        }
    }
    if (std::fabs(cellwise - covered) > mass_tolerance)
        throw quadrature_error("offset kernel: cell masses drifted from closed-form total by " +
                               std::to_string(cellwise - covered));
    return g;
}

struct ExtendedWeight {
    std::vector<double> periodized;      // leaf values over one period [0,2)
    std::vector<double> periodized_inv;
    double mean = 0.0;                   // period average, used past the truncation radius
    double mean_inv = 0.0;
};

inline ExtendedWeight reflect_weight(const Weight& w) {
    const auto& leaves = w.leaves();
    const std::size_t n = leaves.size();
    ExtendedWeight ext;
    ext.periodized.resize(2 * n);
    ext.periodized_inv.resize(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        ext.periodized[i] = leaves[i];
        ext.periodized[2 * n - 1 - i] = leaves[i];
    }
    for (std::size_t i = 0; i < 2 * n; ++i) ext.periodized_inv[i] = 1.0 / ext.periodized[i];
    for (double v : ext.periodized) ext.mean += v;
    for (double v : ext.periodized_inv) ext.mean_inv += v;
    ext.mean /= double(2 * n);
    ext.mean_inv /= double(2 * n);
    return ext;
}

template <class CellMass>
inline Characteristic halfplane_characteristic(const Weight& w, const QuadratureSpec& quad,
                                               CharacteristicKind kind, CellMass cell) {
    const int depth = w.depth();
    const std::size_t n = w.leaves().size();
    const auto ext = reflect_weight(w);
    double best = 1.0;
    for (double t : quad.t_grid(depth)) {
        double covered = 0.0;
        auto g = periodic_offset_kernel(depth, t, quad.truncation_radius, cell,
                                        quad.mass_tolerance, covered);
        const double tail = 1.0 - covered;
        if (tail < -quad.mass_tolerance || tail > 1.0 + quad.mass_tolerance)
            throw quadrature_error("halfplane characteristic: kernel mass off by " +
                                   std::to_string(tail));
        auto uw = circular_correlate(ext.periodized, g);
        auto uv = circular_correlate(ext.periodized_inv, g);
        // x-grid: leaf midpoints of the base interval [0,1)
        for (std::size_t i = 0; i < n; ++i) {
            double a = uw[i] + ext.mean * tail;
            double b = uv[i] + ext.mean_inv * tail;
            best = std::max(best, a * b);
        }
    }
    return {best, kind, 2.0};
}

} // namespace detail

// Lower estimate of sup_{(x,t)} w^H (w^{-1})^H over the sampled grid.
inline Characteristic poisson_characteristic(const Weight& w, const QuadratureSpec& quad = {}) {
    return detail::halfplane_characteristic(w, quad, CharacteristicKind::PoissonA2,
                                            kernels::poisson_mass);
}

// Lower estimate of sup_{(x,t)} w^h (w^{-1})^h over the sampled grid.
inline Characteristic heat_characteristic(const Weight& w, const QuadratureSpec& quad = {}) {
    return detail::halfplane_characteristic(w, quad, CharacteristicKind::HeatA2,
                                            kernels::heat_mass);
}

// Pointwise extension values of a weight at (x, t), same extension rule.
// Used for spot checks; the grid scans above share the kernels.
inline double poisson_extension_value(const Weight& w, double x, double t,
                                      double radius = 64.0) {
    const auto ext = detail::reflect_weight(w);
    const std::size_t period = ext.periodized.size();
    const double h = 2.0 / double(period);
    const int copies = std::max(1, int(std::ceil(radius / 2.0)));
    double sum = 0.0, covered = 0.0;
    for (int m = -copies; m < copies; ++m)
        for (std::size_t j = 0; j < period; ++j) {
            double a = 2.0 * m + double(j) * h;
            double mass = kernels::poisson_mass(x, a, a + h, t);
            sum += ext.periodized[j] * mass;
            covered += mass;
        }
    return sum + ext.mean * (1.0 - covered);
}

} // namespace dyadweight
