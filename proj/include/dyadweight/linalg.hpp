#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "dyadweight/errors.hpp"
#include "dyadweight/rng.hpp"

namespace dyadweight {

namespace detail {

// Householder reduction of a symmetric matrix (flat row-major, n x n) to
// tridiagonal form. Only the eigenvalue data (d, e) is kept.
inline void tridiagonalize(std::vector<double>& a, std::size_t n, std::vector<double>& d,
                           std::vector<double>& e) {
    d.assign(n, 0.0);
    e.assign(n, 0.0);
    auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
    if (n == 0) return;
    std::vector<double> v(n), p(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double sigma2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) sigma2 += at(i, k) * at(i, k);
        double x1 = at(k + 1, k);
        double sigma = std::sqrt(sigma2);
        if (sigma == 0.0) {
            e[k + 1] = 0.0;
            continue;
        }
        double alpha = (x1 >= 0.0) ? -sigma : sigma;
        double vtv = 2.0 * alpha * (alpha - x1);
        for (std::size_t i = k + 1; i < n; ++i) v[i] = at(i, k);
        v[k + 1] = x1 - alpha;
        const double beta = 2.0 / vtv;
        // p = beta * B v on the trailing block
        for (std::size_t i = k + 1; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) s += at(i, j) * v[j];
            p[i] = beta * s;
        }
        double vp = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) vp += v[i] * p[i];
        const double kappa = 0.5 * beta * vp;
        for (std::size_t i = k + 1; i < n; ++i) p[i] -= kappa * v[i];
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j <= i; ++j) {
                double upd = at(i, j) - v[i] * p[j] - p[i] * v[j];
                at(i, j) = upd;
                at(j, i) = upd;
            }
        e[k + 1] = alpha;
    }
    if (n >= 2) e[n - 1] = at(n - 1, n - 2);
    for (std::size_t i = 0; i < n; ++i) d[i] = at(i, i);
}

// Implicit QL with Wilkinson shifts on a symmetric tridiagonal matrix.
// d holds the diagonal, e[i] couples d[i-1] and d[i] (e[0] unused).
inline void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e) {
    const std::size_t n = d.size();
    if (n <= 1) return;
    for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
            }
            if (m != l) {
                if (iter++ == 64) throw std::runtime_error("tridiagonal_ql: no convergence");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? std::fabs(r) : -std::fabs(r)));
                double s = 1.0, c = 1.0, pp = 0.0;
                for (std::size_t i = m; i-- > l;) {
                    double f = s * e[i];
                    double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= pp;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - pp;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    pp = s * r;
                    d[i + 1] = g + pp;
                    g = c * r - b;
                }
                if (r == 0.0 && m - l > 1) continue;
                d[l] -= pp;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

} // namespace detail

// All eigenvalues of a symmetric matrix (flat row-major), unsorted.
inline std::vector<double> symmetric_eigenvalues(std::vector<double> a, std::size_t n) {
    if (a.size() != n * n) throw size_error("symmetric_eigenvalues: bad dimensions");
    std::vector<double> d, e;
    detail::tridiagonalize(a, n, d, e);
    detail::tridiagonal_ql(d, e);
    return d;
}

struct LanczosResult {
    double eigenvalue = 0.0;
    int iterations = 0;
    double residual = 0.0; // relative Ritz-value change at the last step
    bool converged = false;
};

// Largest eigenvalue of a symmetric positive semidefinite operator by the
// Lanczos iteration with full reorthogonalization. This is the accelerated
// form of power iteration: each step applies the operator once and the top
// Ritz value of the small tridiagonal problem is monitored for convergence.
inline LanczosResult lanczos_largest(const std::function<void(const std::vector<double>&, std::vector<double>&)>& apply,
                                     std::size_t dim, double tol, int max_iter,
                                     std::uint64_t seed) {
    LanczosResult best;
    if (dim == 0) { best.converged = true; return best; }

    auto dot = [](const std::vector<double>& x, const std::vector<double>& y) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
        return s;
    };

    int total_iters = 0;
    for (int attempt = 0; attempt < 3; ++attempt) {
        Rng rng(seed + 0x9e37u * std::uint64_t(attempt + 1));
        std::vector<std::vector<double>> basis;
        std::vector<double> alpha, beta; // beta[k] couples q_k and q_{k+1}
        std::vector<double> q(dim), w(dim);
        for (auto& x : q) x = rng.normal();
        double nq = std::sqrt(dot(q, q));
        if (nq == 0.0) continue;
        for (auto& x : q) x /= nq;

        double prev_theta = 0.0, prev_inc = 0.0;
        int stable = 0;
        bool exhausted = false;
        const int cap = int(std::min<std::size_t>(dim, std::size_t(max_iter)));
        for (int k = 0; k < cap; ++k) {
            basis.push_back(q);
            apply(q, w);
            ++total_iters;
            double a_k = dot(w, q);
            alpha.push_back(a_k);
            for (std::size_t j = 0; j < basis.size(); ++j) {
                double c = dot(w, basis[j]);
                for (std::size_t i = 0; i < dim; ++i) w[i] -= c * basis[j][i];
            }
            // second reorthogonalization pass keeps the basis clean
            for (std::size_t j = 0; j < basis.size(); ++j) {
                double c = dot(w, basis[j]);
                for (std::size_t i = 0; i < dim; ++i) w[i] -= c * basis[j][i];
            }
            double b_k = std::sqrt(dot(w, w));

            // top Ritz value of the current tridiagonal section
            std::vector<double> d = alpha, e(alpha.size(), 0.0);
            for (std::size_t i = 1; i < alpha.size(); ++i) e[i] = beta[i - 1];
            detail::tridiagonal_ql(d, e);
            double theta = d[0];
            for (double x : d) theta = std::max(theta, x);

            // The Ritz value climbs monotonically; stop once the increment
            // and its geometric projection both fall under the tolerance, so
            // a slowly converging tail cannot hide tol-sized remaining mass.
            const double inc = std::max(0.0, theta - prev_theta);
            const double scale = std::max(std::fabs(theta), 1e-300);
            if (k >= 24) {
                double projected = inc;
                if (prev_inc > 0.0 && inc < prev_inc)
                    projected = inc * (inc / prev_inc) / (1.0 - inc / prev_inc);
                best.residual = inc / scale;
                if (inc <= 0.25 * tol * scale && projected <= 0.125 * tol * scale) {
                    if (++stable >= 3) {
                        if (theta > best.eigenvalue || !best.converged) best.eigenvalue = theta;
                        best.converged = true;
                        best.iterations = total_iters;
                        return best;
                    }
                } else {
                    stable = 0;
                }
            }
            prev_inc = inc;
            prev_theta = theta;
            if (theta > best.eigenvalue) best.eigenvalue = theta;

            if (b_k <= 1e-14 * std::max(1.0, std::fabs(theta))) {
                exhausted = true; // invariant subspace: exact within it
                break;
            }
            beta.push_back(b_k);
            for (std::size_t i = 0; i < dim; ++i) q[i] = w[i] / b_k;
        }
        best.iterations = total_iters;
        if (basis.size() >= dim || exhausted) {
            // The Krylov space became invariant. A dense random start covers
            // every eigenspace, so the top Ritz value is the top eigenvalue;
            // an immediate collapse is double-checked with a fresh start.
            best.converged = true;
            best.residual = 0.0;
            if (basis.size() >= std::min<std::size_t>(dim, 8) || attempt == 2) return best;
            continue;
        }
        break; // hit the cap: unconverged
    }
    return best;
}

} // namespace dyadweight
