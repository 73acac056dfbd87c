#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "dyadweight/errors.hpp"
#include "dyadweight/haar.hpp"
#include "dyadweight/lattice.hpp"
#include "dyadweight/linalg.hpp"
#include "dyadweight/rng.hpp"
#include "dyadweight/weight.hpp"

namespace dyadweight {

// Multiplier sequence {sigma_I}, |sigma_I| <= 1, on levels 0..N-1.
struct SigmaPattern {
    int depth = 0;
    std::vector<std::vector<double>> levels;

    static SigmaPattern constant(double value, const LatticeConfig& cfg) {
        check_entry(value);
        SigmaPattern s;
        s.depth = cfg.max_depth;
        s.levels.resize(cfg.max_depth);
        for (int k = 0; k < cfg.max_depth; ++k) s.levels[k].assign(std::size_t(1) << k, value);
        return s;
    }

    static SigmaPattern random_signs(const LatticeConfig& cfg, Rng& rng) {
        SigmaPattern s = constant(1.0, cfg);
        for (auto& row : s.levels)
            for (auto& v : row) v = double(rng.sign());
        return s;
    }

    double at(const DyadicInterval& I) const { return levels.at(I.level)[std::size_t(I.position)]; }
    void set(const DyadicInterval& I, double v) {
        check_entry(v);
        levels.at(I.level)[std::size_t(I.position)] = v;
    }

    std::size_t entry_count() const {
        std::size_t c = 0;
        for (const auto& l : levels) c += l.size();
        return c;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& row : levels)
            for (double v : row) m = std::max(m, std::fabs(v));
        return m;
    }

    // FNV-1a over the byte image; stable fingerprint for result files
    std::string hash() const {
        std::uint64_t h = 1469598103934665603ull;
        auto mix = [&](double v) {
            std::uint64_t bits;
            static_assert(sizeof(bits) == sizeof(v));
            __builtin_memcpy(&bits, &v, sizeof(bits));
            for (int b = 0; b < 8; ++b) {
                h ^= (bits >> (8 * b)) & 0xffu;
                h *= 1099511628211ull;
            }
        };
        for (const auto& row : levels)
            for (double v : row) mix(v);
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
        return buf;
    }

  private:
    static void check_entry(double v) {
        if (!(std::fabs(v) <= 1.0)) throw size_error("SigmaPattern: entries must satisfy |s| <= 1");
    }
};

// T_sigma f = sum_I sigma_I (f, h_I) h_I; the mean channel is annihilated.
inline std::vector<double> apply(const SigmaPattern& sigma, const std::vector<double>& f,
                                 const LatticeConfig& cfg) {
    if (sigma.depth != cfg.max_depth) throw size_error("apply: sigma depth mismatch");
    HaarCoefficients c = analyze(f, cfg);
    c.mean = 0.0;
    for (int k = 0; k < cfg.max_depth; ++k)
        for (std::size_t j = 0; j < c.levels[k].size(); ++j) c.levels[k][j] *= sigma.levels[k][j];
    return synthesize(c);
}

enum class NormMethod { DenseOracle, PowerIteration };

struct NormEstimate {
    double value = 0.0;
    NormMethod method = NormMethod::PowerIteration;
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
};

namespace detail {

// one application of  f -> D^{-1/2} T_s D T_s D^{-1/2} f  (T_s is symmetric,
// so this is M^T M for M = D^{1/2} T_s D^{-1/2})
inline void apply_mtm(const SigmaPattern& sigma, const Weight& w, const std::vector<double>& in,
                      std::vector<double>& out) {
    const auto& cfg = w.lattice();
    const auto& d = w.leaves();
    std::vector<double> tmp(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) tmp[i] = in[i] / std::sqrt(d[i]);
    tmp = apply(sigma, tmp, cfg);
    for (std::size_t i = 0; i < tmp.size(); ++i) tmp[i] *= d[i];
    tmp = apply(sigma, tmp, cfg);
    out.resize(in.size());
    for (std::size_t i = 0; i < tmp.size(); ++i) out[i] = tmp[i] / std::sqrt(d[i]);
}

} // namespace detail

// Operator norm of T_sigma on L2(w), estimated over the full 2^N-dimensional
// leaf space.
//
//   DenseOracle:    materialize M^T M column by column through the fast
//                   transform and take the largest eigenvalue of the dense
//                   symmetric matrix (meant for N <= 10).
//   PowerIteration: matrix-free Krylov (Lanczos) iteration on M^T M, i.e.
//                   power iteration with Rayleigh-Ritz acceleration; stops
//                   when the top Ritz value's relative change is <= tol.
inline NormEstimate weighted_norm(const SigmaPattern& sigma, const Weight& w, double tol = 1e-8,
                                  NormMethod method = NormMethod::PowerIteration,
                                  std::uint64_t seed = 12345) {
    if (!(tol > 0.0)) throw size_error("weighted_norm: tol must be positive");
    const auto& cfg = w.lattice();
    const std::size_t n = cfg.leaf_count();
    NormEstimate est;
    est.method = method;
    if (method == NormMethod::DenseOracle) {
        if (cfg.max_depth > 10)
            throw size_error("weighted_norm: dense oracle limited to depth <= 10");
        std::vector<double> mat(n * n);
        std::vector<double> e(n, 0.0), col;
        for (std::size_t j = 0; j < n; ++j) {
            e[j] = 1.0;
            detail::apply_mtm(sigma, w, e, col);
            e[j] = 0.0;
            for (std::size_t i = 0; i < n; ++i) mat[i * n + j] = col[i];
        }
        auto eig = symmetric_eigenvalues(std::move(mat), n);
        double top = 0.0;
        for (double v : eig) top = std::max(top, v);
        est.value = std::sqrt(std::max(0.0, top));
        est.converged = true;
        return est;
    }
    auto op = [&](const std::vector<double>& in, std::vector<double>& out) {
        detail::apply_mtm(sigma, w, in, out);
    };
    LanczosResult lr = lanczos_largest(op, n, tol, 100000, seed);
    est.value = std::sqrt(std::max(0.0, lr.eigenvalue));
    est.iterations = lr.iterations;
    est.residual = lr.residual;
    est.converged = lr.converged;
    return est;
}

// Greedy worst-case search over sign patterns sigma_I in {-1,+1}. The norm
// is convex in each sigma_I on [-1,1] (a supremum of functions linear in
// sigma_I), so the maximum over the box sits at a vertex and flipping one
// sign at a time explores exactly the vertex set. Scan order is
// lexicographic (level-major), first improvement wins, repeated until a
// full pass gains nothing. Deterministic in (restarts, seed).
inline std::pair<SigmaPattern, NormEstimate> worst_sigma(const Weight& w, int restarts,
                                                         std::uint64_t seed, double tol = 1e-8) {
    if (restarts < 1) throw size_error("worst_sigma: need restarts >= 1");
    const auto& cfg = w.lattice();

    auto lex_less = [](const SigmaPattern& a, const SigmaPattern& b) {
        for (int k = 0; k < a.depth; ++k)
            for (std::size_t j = 0; j < a.levels[k].size(); ++j) {
                if (a.levels[k][j] != b.levels[k][j]) return a.levels[k][j] < b.levels[k][j];
            }
        return false;
    };

    SigmaPattern best_sigma = SigmaPattern::constant(1.0, cfg);
    NormEstimate best;
    best.value = -1.0;

    for (int r = 0; r < restarts; ++r) {
        Rng rng(seed + std::uint64_t(r) * 0x51ed2701u);
        SigmaPattern sigma =
            (r == 0) ? SigmaPattern::constant(1.0, cfg) : SigmaPattern::random_signs(cfg, rng);
        NormEstimate cur = weighted_norm(sigma, w, tol, NormMethod::PowerIteration, seed);
        bool improved = true;
        while (improved) {
            improved = false;
            for (int k = 0; k < cfg.max_depth && !improved; ++k)
                for (std::size_t j = 0; j < sigma.levels[k].size() && !improved; ++j) {
                    sigma.levels[k][j] = -sigma.levels[k][j];
                    NormEstimate cand = weighted_norm(sigma, w, tol, NormMethod::PowerIteration, seed);
                    if (cand.value > cur.value + 1e-12) {
                        cur = cand;
                        improved = true;
                    } else {
                        sigma.levels[k][j] = -sigma.levels[k][j];
                    }
                }
        }
        if (cur.value > best.value + 1e-12 ||
            (std::fabs(cur.value - best.value) <= 1e-12 && lex_less(sigma, best_sigma))) {
            best = cur;
            best_sigma = sigma;
        }
    }
    return {best_sigma, best};
}

// The four bilinear sums of the disbalanced-system expansion together with
// the plain-Haar reference sum they must reconstruct.
struct FourSums {
    double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
    double reference = 0.0; // sum_I sigma_I (f w^{-1/2}, h_I)(g w^{1/2}, h_I)
    double total() const { return s1 + s2 + s3 + s4; }
};

inline FourSums four_sum_decomposition(const SigmaPattern& sigma, const std::vector<double>& f,
                                       const std::vector<double>& g, const Weight& w) {
    const auto& cfg = w.lattice();
    if (f.size() != cfg.leaf_count() || g.size() != cfg.leaf_count())
        throw size_error("four_sum_decomposition: leaf array length mismatch");
    const Weight winv = w.inverse();

    std::vector<double> a(f.size()), b(g.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        a[i] = f[i] / std::sqrt(w.leaves()[i]);
        b[i] = g[i] * std::sqrt(w.leaves()[i]);
    }
    const auto avg_a = average_pyramid(a, cfg);
    const auto avg_b = average_pyramid(b, cfg);
    const HaarCoefficients ca = analyze(a, cfg);
    const HaarCoefficients cb = analyze(b, cfg);

    FourSums out;
    for (int k = 0; k < cfg.max_depth; ++k) {
        const double len = std::ldexp(1.0, -k);
        for (std::size_t j = 0; j < ca.levels[k].size(); ++j) {
            const DyadicInterval I{k, std::int64_t(j)};
            const double s = sigma.levels[k][j];
            if (s == 0.0) continue; // every term carries the factor sigma_I
            const auto kc = disbalanced_constants(w, winv, I);
            const double a_chi = avg_a[k][j] * len; // (a, chi_I)
            const double b_chi = avg_b[k][j] * len;
            const double a_hw = (ca.levels[k][j] + kc.gamma_winv * a_chi) / kc.delta_winv;
            const double b_hw = (cb.levels[k][j] + kc.gamma_w * b_chi) / kc.delta_w;
            out.s1 += s * a_hw * kc.delta_winv * b_hw * kc.delta_w;
            out.s2 -= s * a_chi * kc.gamma_winv * b_hw * kc.delta_w;
            out.s3 -= s * a_hw * kc.delta_winv * b_chi * kc.gamma_w;
            out.s4 += s * a_chi * kc.gamma_winv * b_chi * kc.gamma_w;
            out.reference += s * ca.levels[k][j] * cb.levels[k][j];
        }
    }
    return out;
}

} // namespace dyadweight
