#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "dyadweight/errors.hpp"
#include "dyadweight/fft.hpp"
#include "dyadweight/kernels.hpp"
#include "dyadweight/linalg.hpp"
#include "dyadweight/rng.hpp"
#include "dyadweight/weight.hpp"

namespace dyadweight {

// Samples of a function on [-L, L): n = 2^m values at x_j = -L + j h,
// h = 2L/n. Quadrature treats the function as constant on the cells
// [x_j - h/2, x_j + h/2) centered at the samples.
struct GridFunction {
    double half_length = 8.0;
    std::vector<double> samples;

    GridFunction() = default;
    GridFunction(double L, std::vector<double> values) : half_length(L), samples(std::move(values)) {
        if (samples.empty() || (samples.size() & (samples.size() - 1)) != 0)
            throw size_error("GridFunction: sample count must be a power of two");
        for (double v : samples)
            if (!std::isfinite(v)) throw size_error("GridFunction: non-finite sample");
    }

    static GridFunction sample(std::size_t n, double L, const std::function<double(double)>& f) {
        std::vector<double> v(n);
        const double h = 2.0 * L / double(n);
        for (std::size_t j = 0; j < n; ++j) v[j] = f(-L + double(j) * h);
        return GridFunction(L, std::move(v));
    }

    std::size_t n() const { return samples.size(); }
    double h() const { return 2.0 * half_length / double(n()); }
    double x(std::size_t j) const { return -half_length + double(j) * h(); }

    double l1() const {
        double s = 0.0;
        for (double v : samples) s += std::fabs(v);
        return s * h();
    }
    double l2() const {
        double s = 0.0;
        for (double v : samples) s += v * v;
        return std::sqrt(s * h());
    }
    double max_abs() const {
        double m = 0.0;
        for (double v : samples) m = std::max(m, std::fabs(v));
        return m;
    }
};

inline double grid_inner(const GridFunction& f, const GridFunction& g) {
    if (f.n() != g.n()) throw size_error("grid_inner: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < f.n(); ++i) s += f.samples[i] * g.samples[i];
    return s * f.h();
}

// True when the data fails to decay at the domain boundary; callers treat
// this as a support-violation warning, not an error.
inline bool support_violation(const GridFunction& f, double rel_tol = 1e-6) {
    double edge = std::max({std::fabs(f.samples.front()), std::fabs(f.samples.back()),
                            std::fabs(f.samples[1]), std::fabs(f.samples[f.n() - 2])});
    return edge > rel_tol * f.max_abs();
}

// (x, t) sampling of the upper half-plane over the same x-grid, with
// trapezoid-in-log-t weights for both measures dt and t dt.
struct HalfPlaneGrid {
    std::size_t n = 1 << 12;
    double half_length = 8.0;
    std::vector<double> ts, w_dt, w_tdt;

    static HalfPlaneGrid log_spaced(std::size_t n, double L, double t_min = 1e-3,
                                    double t_max = 32.0, int t_count = 96) {
        if (!(t_min > 0.0) || !(t_max > t_min) || t_count < 2)
            throw size_error("HalfPlaneGrid: bad t range");
        HalfPlaneGrid g;
        g.n = n;
        g.half_length = L;
        g.ts.resize(t_count);
        for (int k = 0; k < t_count; ++k)
            g.ts[k] = t_min * std::pow(t_max / t_min, double(k) / (t_count - 1));
        g.w_dt.resize(t_count);
        g.w_tdt.resize(t_count);
        const double du = std::log(t_max / t_min) / (t_count - 1);
        for (int k = 0; k < t_count; ++k) {
            double wu = (k == 0 || k == t_count - 1) ? du / 2 : du;
            g.w_dt[k] = wu * g.ts[k];            // dt = t du
            g.w_tdt[k] = wu * g.ts[k] * g.ts[k]; // t dt = t^2 du
        }
        return g;
    }

    // Finer and wider t sampling: `factor` times the points, range extended
    // by the same factor on both ends. Used by convergence studies.
    HalfPlaneGrid refined(double factor = 2.0) const {
        return log_spaced(n, half_length, ts.front() / factor, ts.back() * factor,
                          int(std::lround(double(ts.size()) * factor)));
    }
};

// extension values on the half-plane grid: values[k][i] at (x_i, ts[k])
struct HalfPlaneField {
    double half_length = 8.0;
    std::vector<double> ts;
    std::vector<std::vector<double>> values;
};

enum class ExtensionKind { Poisson, Heat };

namespace detail {

// One t-slice of the extension: exact kernel mass per cell assembled into a
// Toeplitz row, plus the two half-line tails carried by the edge values.
// The row masses and tails add to exactly 1, which is asserted per slice.
inline std::vector<double> extend_slice(const GridFunction& f, double t, ExtensionKind kind,
                                        double mass_tol = 1e-6) {
    const std::size_t n = f.n();
    const double h = f.h();
    std::vector<double> row(2 * n - 1);
    for (std::size_t k = 0; k < 2 * n - 1; ++k) {
        const double d = (double(k) - double(n - 1)) * h; // x_i - x_j
        row[k] = (kind == ExtensionKind::Poisson)
                     ? kernels::poisson_mass(d, -h / 2, h / 2, t)
                     : kernels::heat_mass(d, -h / 2, h / 2, t);
    }
    ToeplitzOperator op(row, n);
    std::vector<double> out = op.apply(f.samples);

    // tails beyond the first/last cell edge, continued by the edge values
    const double lo = f.x(0) - h / 2, hi = f.x(n - 1) + h / 2;
    std::vector<double> ones(n, 1.0);
    std::vector<double> mass = op.apply(ones);
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = f.x(i);
        const double lt = (kind == ExtensionKind::Poisson) ? kernels::poisson_left_tail(xi, lo, t)
                                                           : kernels::heat_left_tail(xi, lo, t);
        const double rt = (kind == ExtensionKind::Poisson) ? kernels::poisson_right_tail(xi, hi, t)
                                                           : kernels::heat_right_tail(xi, hi, t);
        out[i] += lt * f.samples.front() + rt * f.samples.back();
        const double total = mass[i] + lt + rt;
        if (std::fabs(total - 1.0) > mass_tol)
            throw quadrature_error("extension: kernel mass " + std::to_string(total) +
                                   " at t=" + std::to_string(t));
    }
    return out;
}

} // namespace detail

inline HalfPlaneField poisson_extend(const GridFunction& f, const HalfPlaneGrid& grid) {
    if (f.n() != grid.n) throw size_error("poisson_extend: grid mismatch");
    HalfPlaneField out;
    out.half_length = f.half_length;
    out.ts = grid.ts;
    out.values.resize(grid.ts.size());
    for (std::size_t k = 0; k < grid.ts.size(); ++k)
        out.values[k] = detail::extend_slice(f, grid.ts[k], ExtensionKind::Poisson);
    return out;
}

inline HalfPlaneField heat_extend(const GridFunction& f, const HalfPlaneGrid& grid) {
    if (f.n() != grid.n) throw size_error("heat_extend: grid mismatch");
    HalfPlaneField out;
    out.half_length = f.half_length;
    out.ts = grid.ts;
    out.values.resize(grid.ts.size());
    for (std::size_t k = 0; k < grid.ts.size(); ++k)
        out.values[k] = detail::extend_slice(f, grid.ts[k], ExtensionKind::Heat);
    return out;
}

// ---- discrete Hilbert transform ----------------------------------------

enum class HilbertMode { Spectral, PrincipalValue };

// Spectral: multiplier -i sgn(xi) on the periodized grid (DC and Nyquist
// bins are annihilated), exactly unitary on the remaining band.
// PrincipalValue: singularity-skipping quadrature of (1/pi) pv 1/(x-y),
// line-faithful, applied as a Toeplitz convolution.
inline GridFunction hilbert_transform(const GridFunction& f,
                                      HilbertMode mode = HilbertMode::Spectral) {
    const std::size_t n = f.n();
    if (mode == HilbertMode::Spectral) {
        std::vector<std::complex<double>> buf(n);
        for (std::size_t i = 0; i < n; ++i) buf[i] = f.samples[i];
        fft(buf);
        buf[0] = 0.0;
        buf[n / 2] = 0.0;
        const std::complex<double> mi(0.0, -1.0), pi_(0.0, 1.0);
        for (std::size_t k = 1; k < n / 2; ++k) buf[k] *= mi;
        for (std::size_t k = n / 2 + 1; k < n; ++k) buf[k] *= pi_;
        fft(buf, true);
        std::vector<double> out(n);
        for (std::size_t i = 0; i < n; ++i) out[i] = buf[i].real();
        return GridFunction(f.half_length, std::move(out));
    }
    // kernel h / (pi (x_i - x_j)) = 1 / (pi d), diagonal skipped
    std::vector<double> row(2 * n - 1, 0.0);
    for (std::size_t k = 0; k < 2 * n - 1; ++k) {
        const std::ptrdiff_t d = std::ptrdiff_t(k) - std::ptrdiff_t(n - 1);
        if (d != 0) row[k] = 1.0 / (std::numbers::pi * double(d));
    }
    ToeplitzOperator op(row, n);
    return GridFunction(f.half_length, op.apply(f.samples));
}

// Bound on the spectral-vs-principal-value discrepancy coming from
// periodization: convolves |f| with the continuum kernel difference
// (pi/2L) cot(pi u / 2L) - 1/u over the grid.
inline double hilbert_mode_bound(const GridFunction& f) {
    const std::size_t n = f.n();
    const double L = f.half_length, h = f.h();
    std::vector<double> row(2 * n - 1, 0.0);
    for (std::size_t k = 0; k < 2 * n - 1; ++k) {
        const double u = (double(k) - double(n - 1)) * h;
        if (u == 0.0) continue;
        const double per = (std::numbers::pi / (2 * L)) / std::tan(std::numbers::pi * u / (2 * L));
        row[k] = std::fabs(per - 1.0 / u) * h / std::numbers::pi;
    }
    ToeplitzOperator op(row, n);
    std::vector<double> absf(n);
    for (std::size_t i = 0; i < n; ++i) absf[i] = std::fabs(f.samples[i]);
    auto bound = op.apply(absf);
    double m = 0.0;
    for (double v : bound) m = std::max(m, v);
    return m;
}

// ---- pairings -----------------------------------------------------------

namespace detail {

// centered differences in x; one-sided at the edges
inline std::vector<double> grad_x(const std::vector<double>& u, double h) {
    const std::size_t n = u.size();
    std::vector<double> g(n);
    for (std::size_t i = 1; i + 1 < n; ++i) g[i] = (u[i + 1] - u[i - 1]) / (2 * h);
    g[0] = (u[1] - u[0]) / h;
    g[n - 1] = (u[n - 1] - u[n - 2]) / h;
    return g;
}

// nonuniform centered differences across t-slices
inline std::vector<std::vector<double>> grad_t(const HalfPlaneField& u,
                                               const std::vector<double>& ts) {
    const std::size_t K = ts.size(), n = u.values[0].size();
    std::vector<std::vector<double>> g(K, std::vector<double>(n));
    for (std::size_t k = 0; k < K; ++k) {
        const std::size_t km = k > 0 ? k - 1 : 0, kp = k + 1 < K ? k + 1 : K - 1;
        const double dt = ts[kp] - ts[km];
        for (std::size_t i = 0; i < n; ++i) g[k][i] = (u.values[kp][i] - u.values[km][i]) / dt;
    }
    return g;
}

// cross-check of the finite-difference x-gradient against the
// differentiated kernel on one t-slice; relative L2 mismatch
inline double gradient_check(const GridFunction& f, double t, ExtensionKind kind) {
    const std::size_t n = f.n();
    const double h = f.h();
    std::vector<double> row(2 * n - 1);
    for (std::size_t k = 0; k < 2 * n - 1; ++k) {
        const double d = (double(k) - double(n - 1)) * h;
        row[k] = (kind == ExtensionKind::Poisson)
                     ? kernels::poisson(d + h / 2, t) - kernels::poisson(d - h / 2, t)
                     : kernels::heat(d + h / 2, t) - kernels::heat(d - h / 2, t);
    }
    ToeplitzOperator op(row, n);
    auto exact = op.apply(f.samples);
    auto fd = grad_x(extend_slice(f, t, kind), h);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num += (exact[i] - fd[i]) * (exact[i] - fd[i]);
        den += exact[i] * exact[i];
    }
    return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

} // namespace detail

struct PairingResult {
    double lhs = 0.0;       // |int H(phi) psi dx|
    double rhs = 0.0;       // int int |grad phi^H| |grad psi^H| t dt dx
    double tail_bound = 0.0; // analytic bound on the t-truncation of rhs
};

// Pairing of H(phi) against psi versus the gradient product of the harmonic
// extensions. Throws grid_error when the finite-difference gradient cannot
// reproduce the differentiated kernel on a probe slice.
inline PairingResult pairing_inequality(const GridFunction& phi, const GridFunction& psi,
                                        const HalfPlaneGrid& grid) {
    if (phi.n() != psi.n() || phi.n() != grid.n)
        throw size_error("pairing_inequality: grid mismatch");
    const double h = phi.h();

    const double probe_t = grid.ts[grid.ts.size() / 2];
    if (detail::gradient_check(phi, probe_t, ExtensionKind::Poisson) > 0.1)
        throw grid_error("pairing_inequality: x-grid too coarse for finite differences");

    PairingResult out;
    GridFunction hphi = hilbert_transform(phi, HilbertMode::PrincipalValue);
    out.lhs = std::fabs(grid_inner(hphi, psi));

    HalfPlaneField u = poisson_extend(phi, grid);
    HalfPlaneField v = poisson_extend(psi, grid);
    auto ut = detail::grad_t(u, grid.ts);
    auto vt = detail::grad_t(v, grid.ts);
    for (std::size_t k = 0; k < grid.ts.size(); ++k) {
        auto ux = detail::grad_x(u.values[k], h);
        auto vx = detail::grad_x(v.values[k], h);
        double slice = 0.0;
        for (std::size_t i = 0; i < grid.n; ++i)
            slice += std::hypot(ux[i], ut[k][i]) * std::hypot(vx[i], vt[k][i]);
        out.rhs += slice * h * grid.w_tdt[k];
    }
    // |grad of a Poisson extension| <= ||f||_1 / (pi t^2), so the truncated
    // t-range misses at most this much of the double integral
    const double T = grid.ts.back();
    out.tail_bound = phi.l1() * psi.l1() / (2.0 * std::numbers::pi * std::numbers::pi * T * T);
    return out;
}

struct HeatPairingResult {
    double lhs = 0.0;  // int phi psi dx
    double rhs = 0.0;  // 2 int int d_x phi^h d_x psi^h dx dt
    double tail = 0.0; // extrapolated t > t_max contribution included in rhs
    double mismatch() const {
        double scale = std::max(std::fabs(lhs), std::fabs(rhs));
        return scale > 0.0 ? std::fabs(lhs - rhs) / scale : 0.0;
    }
};

// d = 1 instance of the heat-pairing identity: since H^2 = -Identity, the
// pairing of H^2 phi with psi reduces to  int phi psi = 2 int int d_x phi^h
// d_x psi^h dx dt. The [0, t_min) strip is added by one trapezoid cell with
// the boundary slope taken from the raw data. The integrand decays only
// like t^{-3/2} when both inputs carry mass, so the t > t_max remainder is
// extrapolated from the measured decay exponent of the last slices.
inline HeatPairingResult heat_pairing_identity(const GridFunction& phi, const GridFunction& psi,
                                               const HalfPlaneGrid& grid) {
    if (phi.n() != psi.n() || phi.n() != grid.n)
        throw size_error("heat_pairing_identity: grid mismatch");
    const double h = phi.h();

    const double probe_t = grid.ts[grid.ts.size() / 2];
    if (detail::gradient_check(phi, probe_t, ExtensionKind::Heat) > 0.1)
        throw grid_error("heat_pairing_identity: x-grid too coarse for finite differences");

    HeatPairingResult out;
    out.lhs = grid_inner(phi, psi);

    HalfPlaneField u = heat_extend(phi, grid);
    HalfPlaneField v = heat_extend(psi, grid);
    std::vector<double> slice(grid.ts.size());
    for (std::size_t k = 0; k < grid.ts.size(); ++k) {
        auto ux = detail::grad_x(u.values[k], h);
        auto vx = detail::grad_x(v.values[k], h);
        double s = 0.0;
        for (std::size_t i = 0; i < grid.n; ++i) s += ux[i] * vx[i];
        slice[k] = s * h;
        out.rhs += 2.0 * slice[k] * grid.w_dt[k];
    }
    {
        auto ux0 = detail::grad_x(phi.samples, h);
        auto vx0 = detail::grad_x(psi.samples, h);
        double s0 = 0.0;
        for (std::size_t i = 0; i < grid.n; ++i) s0 += ux0[i] * vx0[i];
        s0 *= h;
        out.rhs += 2.0 * 0.5 * (s0 + slice.front()) * grid.ts.front(); // [0, t_min) strip
    }
    {
        // analytic t > t_max remainder: heat evolution preserves mass, and
        // past t_max the fields look like m k_t, whose cross slice is
        // m_phi m_psi (sqrt(pi)/2) (2t)^{-3/2} / (2 pi). Valid once t_max
        // dominates the squared data span (callers use a wide, coarse-x
        // domain for that reason); relative model error is O(1/t_max).
        double m_phi = 0.0, m_psi = 0.0;
        for (double v : phi.samples) m_phi += v;
        for (double v : psi.samples) m_psi += v;
        m_phi *= h;
        m_psi *= h;
        const double T = grid.ts.back();
        out.tail = m_phi * m_psi / (2.0 * std::sqrt(std::numbers::pi) * std::sqrt(2.0 * T));
        out.rhs += out.tail;
    }
    return out;
}

// ---- weighted Hilbert norm ----------------------------------------------

struct HilbertNormParams {
    std::size_t log2_n = 12;
    double half_length = 8.0;
    double window_fraction = 0.5; // test vectors supported on this central part
    double tol = 1e-6;
    int trials = 8;
    std::uint64_t seed = 1;
    double t_min = 1e-3, t_max = 32.0;
    int t_count = 96;
};

struct WeightedHilbertNorm {
    double value = 0.0;        // lower estimate of ||H||_{L2(w)}
    double poisson_char = 1.0; // characteristic of the extended weight, same grid
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
};

namespace detail {

// even-periodic continuation of a [0,1) weight onto the grid cells
inline std::vector<double> reflect_to_grid(const Weight& w, std::size_t n, double L) {
    std::vector<double> cells(n);
    const double h = 2.0 * L / double(n);
    for (std::size_t i = 0; i < n; ++i) {
        double x = -L + double(i) * h;
        double p = std::fmod(std::fmod(x, 2.0) + 2.0, 2.0);
        if (p >= 1.0) p = 2.0 - p - 1e-15;
        cells[i] = w.value_at(p);
    }
    return cells;
}

} // namespace detail

// Lower estimate of the weighted operator norm of the (line-faithful,
// principal-value) discrete Hilbert transform: largest singular value of
// P_W D^{1/2} H D^{-1/2} P_W where P_W restricts to the central window and
// D is the diagonal of the periodized weight; Krylov iteration plus random
// Rayleigh-quotient trials. Reports the Poisson characteristic of the same
// extended weight sampled on the same grid.
inline WeightedHilbertNorm weighted_hilbert_norm(const Weight& w, const HilbertNormParams& params) {
    const std::size_t n = std::size_t(1) << params.log2_n;
    const double L = params.half_length;
    const double h = 2.0 * L / double(n);

    auto cells = detail::reflect_to_grid(w, n, L);
    std::vector<double> sq(n), isq(n);
    for (std::size_t i = 0; i < n; ++i) {
        sq[i] = std::sqrt(cells[i]);
        isq[i] = 1.0 / sq[i];
    }
    const std::size_t w0 = std::size_t(double(n) * (0.5 - params.window_fraction / 2));
    const std::size_t w1 = std::size_t(double(n) * (0.5 + params.window_fraction / 2));

    std::vector<double> row(2 * n - 1, 0.0);
    for (std::size_t k = 0; k < 2 * n - 1; ++k) {
        const std::ptrdiff_t d = std::ptrdiff_t(k) - std::ptrdiff_t(n - 1);
        if (d != 0) row[k] = 1.0 / (std::numbers::pi * double(d));
    }
    ToeplitzOperator hop(row, n);

    auto window = [&](std::vector<double>& v) {
        for (std::size_t i = 0; i < w0; ++i) v[i] = 0.0;
        for (std::size_t i = w1; i < n; ++i) v[i] = 0.0;
    };
    auto apply_m = [&](std::vector<double> v) {
        window(v);
        for (std::size_t i = 0; i < n; ++i) v[i] *= isq[i];
        v = hop.apply(v);
        for (std::size_t i = 0; i < n; ++i) v[i] *= sq[i];
        window(v);
        return v;
    };
    auto apply_mt = [&](std::vector<double> v) {
        window(v);
        for (std::size_t i = 0; i < n; ++i) v[i] *= sq[i];
        v = hop.apply(v);
        for (std::size_t i = 0; i < n; ++i) v[i] *= -isq[i]; // H^T = -H
        window(v);
        return v;
    };

    WeightedHilbertNorm out;
    auto op = [&](const std::vector<double>& in, std::vector<double>& res) {
        res = apply_mt(apply_m(in));
    };
    LanczosResult lr = lanczos_largest(op, n, params.tol, 4000, params.seed);
    out.value = std::sqrt(std::max(0.0, lr.eigenvalue));
    out.iterations = lr.iterations;
    out.residual = lr.residual;
    out.converged = lr.converged;

    Rng rng(params.seed ^ 0x5eedULL);
    for (int t = 0; t < params.trials; ++t) {
        std::vector<double> f(n, 0.0);
        for (std::size_t i = w0; i < w1; ++i) f[i] = rng.normal();
        double nf = 0.0;
        for (double v : f) nf += v * v;
        auto mf = apply_m(f);
        double nm = 0.0;
        for (double v : mf) nm += v * v;
        if (nf > 0.0) out.value = std::max(out.value, std::sqrt(nm / nf));
    }

    // Poisson characteristic of the periodized weight on this grid
    {
        std::vector<double> inv(n);
        for (std::size_t i = 0; i < n; ++i) inv[i] = 1.0 / cells[i];
        double mean = 0.0, mean_inv = 0.0;
        for (std::size_t i = 0; i < n; ++i) { mean += cells[i]; mean_inv += inv[i]; }
        mean /= double(n);
        mean_inv /= double(n);
        double best = 1.0;
        for (int k = 0; k < params.t_count; ++k) {
            double t = params.t_min *
                       std::pow(params.t_max / params.t_min, double(k) / (params.t_count - 1));
            std::vector<double> mrow(2 * n - 1);
            for (std::size_t j = 0; j < 2 * n - 1; ++j) {
                const double d = (double(j) - double(n - 1)) * h;
                mrow[j] = kernels::poisson_mass(d, -h / 2, h / 2, t);
            }
            ToeplitzOperator op_t(mrow, n);
            auto uw = op_t.apply(cells);
            auto uv = op_t.apply(inv);
            std::vector<double> ones(n, 1.0);
            auto mass = op_t.apply(ones);
            for (std::size_t i = 0; i < n; ++i) {
                double tail = 1.0 - mass[i];
                double a = uw[i] + mean * tail;
                double b = uv[i] + mean_inv * tail;
                best = std::max(best, a * b);
            }
        }
        out.poisson_char = best;
    }
    return out;
}

// ---- pairing corpus -------------------------------------------------------

// Deterministic family of smooth compactly-supported test pairs: plain and
// modulated Gaussian bumps with varied centers, widths and separations,
// including coincident (odd-symmetric, zero pairing) and disjoint distant
// pairs. Centers and widths are confined so the boundary decay stays below
// the support-violation threshold.
inline std::vector<std::pair<GridFunction, GridFunction>> make_pairing_corpus(
    std::size_t n, double half_length, int count, std::uint64_t seed) {
    std::vector<std::pair<GridFunction, GridFunction>> out;
    Rng rng(seed);
    auto bump = [&](double center, double width, double freq, double phase, double amp) {
        return GridFunction::sample(n, half_length, [=](double x) {
            double u = (x - center) / width;
            return amp * std::exp(-0.5 * u * u) * std::cos(freq * (x - center) + phase);
        });
    };
    for (int i = 0; i < count; ++i) {
        const int type = i % 5;
        const double w1 = rng.uniform(0.4, 0.9), w2 = rng.uniform(0.4, 0.9);
        const double a1 = rng.uniform(0.5, 2.0), a2 = rng.uniform(0.5, 2.0);
        double c1 = rng.uniform(-1.0, 1.0), c2 = c1, f1 = 0.0, f2 = 0.0, p2 = 0.0;
        switch (type) {
            case 0: break; // coincident even bumps: the pairing vanishes
            case 1: c2 = c1 + rng.uniform(0.5, 1.5) * (rng.sign() > 0 ? 1 : -1); break;
            case 2: c1 = -2.2; c2 = 2.2; break; // disjoint distant supports
            case 3: f1 = rng.uniform(0.5, 3.0); c2 = c1 + rng.uniform(-1.0, 1.0); break;
            default:
                f1 = rng.uniform(0.5, 3.0);
                f2 = rng.uniform(0.5, 3.0);
                p2 = rng.uniform(0.0, 3.14);
                c2 = c1 + rng.uniform(-1.5, 1.5);
                break;
        }
        c1 = std::clamp(c1, -2.3, 2.3);
        c2 = std::clamp(c2, -2.3, 2.3);
        out.emplace_back(bump(c1, w1, f1, 0.0, a1), bump(c2, w2, f2, p2, a2));
    }
    return out;
}

// ---- CSV ----------------------------------------------------------------

inline void grid_function_to_csv(const GridFunction& f, std::ostream& os) {
    os << "x,value\n";
    char buf[64];
    for (std::size_t i = 0; i < f.n(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", f.x(i), f.samples[i]);
        os << buf;
    }
}

inline void field_to_csv(const HalfPlaneField& field, std::ostream& os) {
    os << "x,t,value\n";
    char buf[96];
    const std::size_t n = field.values.empty() ? 0 : field.values[0].size();
    const double h = 2.0 * field.half_length / double(n);
    for (std::size_t k = 0; k < field.ts.size(); ++k)
        for (std::size_t i = 0; i < n; ++i) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", -field.half_length + double(i) * h,
                          field.ts[k], field.values[k][i]);
            os << buf;
        }
}

} // namespace dyadweight
