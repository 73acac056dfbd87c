// Test-only reference implementations. Everything here goes through the
// pointwise definitions (haar_eval, direct leaf sums, dense enumerations)
// and stays independent of the pyramid/fast paths it checks.
#pragma once

#include <cmath>
#include <vector>

#include "dyadweight/carleson.hpp"
#include "dyadweight/haar.hpp"
#include "dyadweight/lattice.hpp"
#include "dyadweight/martingale.hpp"
#include "dyadweight/weight.hpp"

namespace oracle {

using dyadweight::DyadicInterval;
using dyadweight::LatticeConfig;
using dyadweight::Weight;

inline double leaf_midpoint(const LatticeConfig& cfg, std::size_t i) {
    return (double(i) + 0.5) / double(cfg.leaf_count());
}

// (f, h_I) by direct O(2^N) summation against pointwise haar_eval
inline double dense_haar_coefficient(const std::vector<double>& f, const DyadicInterval& I,
                                     const LatticeConfig& cfg) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        s += f[i] * dyadweight::haar_eval(I, leaf_midpoint(cfg, i));
    return s / double(f.size());
}

// average of f over I by direct leaf-range summation
inline double direct_average(const std::vector<double>& f, const DyadicInterval& I,
                             const LatticeConfig& cfg) {
    const std::size_t first = std::size_t(I.position) << (cfg.max_depth - I.level);
    const std::size_t count = std::size_t(1) << (cfg.max_depth - I.level);
    double s = 0.0;
    for (std::size_t i = 0; i < count; ++i) s += f[first + i];
    return s / double(count);
}

// dyadic A_p characteristic by brute force over every interval
inline double brute_a2d(const Weight& w, double p) {
    const auto& cfg = w.lattice();
    std::vector<double> dual(w.leaves().size());
    for (std::size_t i = 0; i < dual.size(); ++i)
        dual[i] = std::pow(w.leaves()[i], 1.0 / (1.0 - p));
    double best = 0.0;
    for (const auto& I : dyadweight::descendants(dyadweight::root_interval(), cfg)) {
        double a = direct_average(w.leaves(), I, cfg);
        double b = direct_average(dual, I, cfg);
        best = std::max(best, a * std::pow(b, p - 1.0));
    }
    return best;
}

// Carleson ratio max_J (1/|J|) sum_{I in D(J)} alpha_I by double loop
inline double brute_carleson_constant(const dyadweight::CarlesonSequence& alpha,
                                      const LatticeConfig& cfg) {
    double best = 0.0;
    for (const auto& J : dyadweight::descendants(dyadweight::root_interval(), cfg)) {
        if (J.level >= cfg.max_depth) continue;
        double s = 0.0;
        for (const auto& I : dyadweight::descendants(J, cfg))
            if (I.level < cfg.max_depth) s += alpha.at(I);
        best = std::max(best, s / J.length());
    }
    return best;
}

// weighted transform matrix column by column through pointwise definitions:
// M = D^{1/2} T_sigma D^{-1/2}, T_sigma from dense haar coefficients
inline std::vector<double> dense_weighted_transform_matrix(const dyadweight::SigmaPattern& sigma,
                                                           const Weight& w) {
    const auto& cfg = w.lattice();
    const std::size_t n = cfg.leaf_count();
    std::vector<double> mat(n * n, 0.0);
    std::vector<double> e(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        e[j] = 1.0 / std::sqrt(w.leaves()[j]);
        std::vector<double> out(n, 0.0);
        for (int k = 0; k < cfg.max_depth; ++k)
            for (std::int64_t q = 0; q < (std::int64_t(1) << k); ++q) {
                const DyadicInterval I{k, q};
                double coeff = dense_haar_coefficient(e, I, cfg) * sigma.at(I);
                for (std::size_t i = 0; i < n; ++i)
                    out[i] += coeff * dyadweight::haar_eval(I, leaf_midpoint(cfg, i));
            }
        for (std::size_t i = 0; i < n; ++i)
            mat[i * n + j] = std::sqrt(w.leaves()[i]) * out[i];
        e[j] = 0.0;
    }
    return mat;
}

inline std::vector<double> random_leaves(dyadweight::Rng& rng, const LatticeConfig& cfg,
                                         double lo = 0.25, double hi = 4.0) {
    std::vector<double> v(cfg.leaf_count());
    for (auto& x : v) x = rng.uniform(lo, hi);
    return v;
}

// deterministic mixed corpus of positive weights for property sweeps
inline std::vector<Weight> weight_corpus(const LatticeConfig& cfg, int count,
                                         std::uint64_t seed = 42) {
    using dyadweight::WeightFamily;
    std::vector<Weight> out;
    dyadweight::Rng rng(seed);
    const WeightFamily kinds[] = {WeightFamily::HaarBump, WeightFamily::Step,
                                  WeightFamily::PowerLike, WeightFamily::RandomMultiscale};
    for (int i = 0; i < count; ++i) {
        if (i % 5 == 4) {
            out.push_back(Weight(random_leaves(rng, cfg), cfg)); // rough iid weight
            continue;
        }
        WeightFamily kind = kinds[i % 4];
        double eps = rng.uniform(0.05, kind == WeightFamily::PowerLike ? 0.8 : 0.6);
        out.push_back(dyadweight::make_family(kind, eps, seed + i, cfg));
    }
    return out;
}

} // namespace oracle
