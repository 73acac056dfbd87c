#pragma once

#include <cmath>
#include <vector>

#include "dyadweight/errors.hpp"
#include "dyadweight/lattice.hpp"
#include "dyadweight/weight.hpp"

namespace dyadweight {

// Haar expansion of a leaf-step function: the global mean plus one
// coefficient (f, h_I) per interval on levels 0..N-1.
struct HaarCoefficients {
    int depth = 0;
    double mean = 0.0;
    std::vector<std::vector<double>> levels; // levels[k][j], k = 0..N-1

    double at(const DyadicInterval& I) const { return levels.at(I.level)[std::size_t(I.position)]; }
    double& at(const DyadicInterval& I) { return levels.at(I.level)[std::size_t(I.position)]; }

    std::size_t coefficient_count() const {
        std::size_t c = 0;
        for (const auto& l : levels) c += l.size();
        return c;
    }
};

// average of f over every dyadic interval, avg[k][j] for k = 0..N
inline std::vector<std::vector<double>> average_pyramid(const std::vector<double>& f,
                                                        const LatticeConfig& cfg) {
    if (f.size() != cfg.leaf_count()) throw size_error("average_pyramid: bad leaf count");
    std::vector<std::vector<double>> avg(cfg.max_depth + 1);
    avg[cfg.max_depth] = f;
    for (int k = cfg.max_depth; k-- > 0;) {
        const auto& fine = avg[k + 1];
        auto& coarse = avg[k];
        coarse.resize(fine.size() / 2);
        for (std::size_t j = 0; j < coarse.size(); ++j)
            coarse[j] = 0.5 * (fine[2 * j] + fine[2 * j + 1]);
    }
    return avg;
}

// Pyramid analysis in O(2^N): (f, h_I) = (sqrt|I|/2) (<f>_{I+} - <f>_{I-}).
inline HaarCoefficients analyze(const std::vector<double>& f, const LatticeConfig& cfg) {
    auto avg = average_pyramid(f, cfg);
    HaarCoefficients out;
    out.depth = cfg.max_depth;
    out.mean = avg[0][0];
    out.levels.resize(cfg.max_depth);
    for (int k = 0; k < cfg.max_depth; ++k) {
        double half_sqrt_len = 0.5 * std::sqrt(std::ldexp(1.0, -k));
        auto& row = out.levels[k];
        row.resize(std::size_t(1) << k);
        const auto& fine = avg[k + 1];
        for (std::size_t j = 0; j < row.size(); ++j)
            row[j] = half_sqrt_len * (fine[2 * j + 1] - fine[2 * j]);
    }
    return out;
}

// Exact inverse of analyze: descend the tree, splitting each average into
// the child averages <f>_{I±} = <f>_I ± (f,h_I) |I|^{-1/2}.
inline std::vector<double> synthesize(const HaarCoefficients& c) {
    if (int(c.levels.size()) != c.depth) throw size_error("synthesize: malformed coefficient levels");
    LatticeConfig cfg(c.depth);
    std::vector<double> cur{c.mean};
    for (int k = 0; k < c.depth; ++k) {
        const auto& row = c.levels.at(k);
        if (row.size() != cur.size()) throw size_error("synthesize: malformed coefficient levels");
        double inv_sqrt_len = std::sqrt(std::ldexp(1.0, k)); // |I|^{-1/2}
        std::vector<double> next(cur.size() * 2);
        for (std::size_t j = 0; j < cur.size(); ++j) {
            double bump = row[j] * inv_sqrt_len;
            next[2 * j] = cur[j] - bump;
            next[2 * j + 1] = cur[j] + bump;
        }
        cur = std::move(next);
    }
    return cur;
}

// Constants of the disbalanced (weighted) Haar system on one interval.
//
//   c = sqrt|I| (w_{I-} - w_{I+}) / (2 w_I),   d likewise for w^{-1}
//   gamma_w = c / |I|,                         gamma_winv = d / |I|
//   delta_w^2 = w_I (1 - c^2/|I|) = w_{I+} w_{I-} / w_I
//
// gamma_w is the unique multiple of chi_I making h_I + gamma_w chi_I
// integrate to zero against w; with h_I positive on the right half this
// forces the + sign above. delta_w then normalizes the system in L2(w).
struct DisbalancedConstants {
    double c = 0.0;
    double d = 0.0;
    double gamma_w = 0.0;
    double gamma_winv = 0.0;
    double delta_w = 1.0;
    double delta_winv = 1.0;
};

inline DisbalancedConstants disbalanced_constants(const Weight& w, const Weight& winv,
                                                  const DyadicInterval& I) {
    const auto& cfg = w.lattice();
    if (I.level >= cfg.max_depth)
        throw depth_error("disbalanced_constants: leaf interval has no halves");
    auto [lo, hi] = children(I, cfg);
    const double len = I.length();
    const double sq = std::sqrt(len);
    DisbalancedConstants k;
    const double wm = w.average(lo), wp = w.average(hi), wI = w.average(I);
    const double um = winv.average(lo), up = winv.average(hi), uI = winv.average(I);
    k.c = sq * (wm - wp) / (2.0 * wI);
    k.d = sq * (um - up) / (2.0 * uI);
    k.gamma_w = k.c / len;
    k.gamma_winv = k.d / len;
    k.delta_w = std::sqrt(wp * wm / wI);
    k.delta_winv = std::sqrt(up * um / uI);
    return k;
}

inline DisbalancedConstants disbalanced_constants(const Weight& w, const DyadicInterval& I) {
    return disbalanced_constants(w, w.inverse(), I);
}

// h_I^w(x) = (h_I(x) + gamma_w chi_I(x)) / delta_w
inline double weighted_haar_eval(const Weight& w, const DyadicInterval& I, double x) {
    if (!I.contains(x)) return 0.0;
    const auto& cfg = w.lattice();
    if (I.level >= cfg.max_depth) throw depth_error("weighted_haar_eval: leaf interval");
    auto [lo, hi] = children(I, cfg);
    const double len = I.length();
    const double wm = w.average(lo), wp = w.average(hi), wI = w.average(I);
    const double c = std::sqrt(len) * (wm - wp) / (2.0 * wI);
    const double gamma = c / len;
    const double delta = std::sqrt(wp * wm / wI);
    return (haar_eval(I, x) + gamma) / delta;
}

// -- inner products on the leaf grid (measure dx, leaf width 2^-N) --

inline double inner(const std::vector<double>& f, const std::vector<double>& g) {
    if (f.size() != g.size()) throw size_error("inner: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * g[i];
    return s / double(f.size());
}

inline double weighted_inner(const std::vector<double>& f, const std::vector<double>& g,
                             const Weight& w) {
    if (f.size() != g.size() || f.size() != w.leaves().size())
        throw size_error("weighted_inner: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * g[i] * w.leaves()[i];
    return s / double(f.size());
}

inline double l2_norm(const std::vector<double>& f) { return std::sqrt(inner(f, f)); }

inline double weighted_l2_norm(const std::vector<double>& f, const Weight& w) {
    return std::sqrt(weighted_inner(f, f, w));
}

// leaf-sampled h_I (constant on leaves, so sampling at midpoints is exact)
inline std::vector<double> haar_leaf_samples(const DyadicInterval& I, const LatticeConfig& cfg) {
    std::vector<double> f(cfg.leaf_count(), 0.0);
    double v = std::sqrt(std::ldexp(1.0, I.level));
    std::size_t first = std::size_t(I.position) << (cfg.max_depth - I.level);
    std::size_t half = std::size_t(1) << (cfg.max_depth - I.level - 1);
    for (std::size_t i = 0; i < half; ++i) f[first + i] = -v;
    for (std::size_t i = 0; i < half; ++i) f[first + half + i] = v;
    return f;
}

} // namespace dyadweight
