#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "dyadweight/errors.hpp"
#include "dyadweight/characteristic.hpp"
#include "dyadweight/haar.hpp"
#include "dyadweight/lattice.hpp"
#include "dyadweight/rng.hpp"
#include "dyadweight/weight.hpp"

namespace dyadweight {

// Nonnegative numbers {alpha_I} indexed by the intervals on levels 0..N-1.
struct CarlesonSequence {
    int depth = 0;
    std::vector<std::vector<double>> levels;

    static CarlesonSequence zeros(const LatticeConfig& cfg) {
        CarlesonSequence s;
        s.depth = cfg.max_depth;
        s.levels.resize(cfg.max_depth);
        for (int k = 0; k < cfg.max_depth; ++k) s.levels[k].assign(std::size_t(1) << k, 0.0);
        return s;
    }

    double at(const DyadicInterval& I) const { return levels.at(I.level)[std::size_t(I.position)]; }
    void set(const DyadicInterval& I, double v) {
        if (v < 0.0) throw size_error("CarlesonSequence: entries must be >= 0");
        levels.at(I.level)[std::size_t(I.position)] = v;
    }

    CarlesonSequence scaled(double lambda) const {
        CarlesonSequence s = *this;
        for (auto& row : s.levels)
            for (auto& v : row) v *= lambda;
        return s;
    }
};

// weighted subtree sums S(J) = sum_{I in D(J)} weight(I) * alpha_I for every
// J, in one bottom-up pass; weight(I) supplied per level as leafless arrays
namespace detail {

inline std::vector<std::vector<double>> subtree_sums(const CarlesonSequence& alpha,
                                                     const std::vector<std::vector<double>>* factor) {
    const int n = alpha.depth;
    std::vector<std::vector<double>> sums(n);
    for (int k = n; k-- > 0;) {
        const auto& row = alpha.levels[k];
        sums[k].resize(row.size());
        for (std::size_t j = 0; j < row.size(); ++j) {
            double s = row[j] * (factor ? (*factor)[k][j] : 1.0);
            if (k + 1 < n) s += sums[k + 1][2 * j] + sums[k + 1][2 * j + 1];
            sums[k][j] = s;
        }
    }
    return sums;
}

} // namespace detail

// Least admissible C with (1/|J|) sum_{I in D(J)} alpha_I <= C for all J.
inline double carleson_constant(const CarlesonSequence& alpha) {
    if (alpha.depth == 0) return 0.0;
    auto sums = detail::subtree_sums(alpha, nullptr);
    double best = 0.0;
    for (int k = 0; k < alpha.depth; ++k) {
        const double inv_len = std::ldexp(1.0, k); // 1/|J|
        for (double s : sums[k]) best = std::max(best, s * inv_len);
    }
    return best;
}

struct EmbeddingConstants {
    double c_pack = 0.0;   // max_J (1/(|J| w_J)) sum_{D(J)} w_I^2 alpha_I
    double c_embed = 0.0;  // observed sup_f sum_I (f w^{1/2})_I^2 alpha_I / ||f||_2^2
    DyadicInterval pack_argmax{};
};

// Packing constant of the embedding hypothesis, plus an empirical embedding
// constant over `trials` random f and one adversarial candidate
// f = w^{1/2} chi_{J*} localized on the packing maximizer. The theorem
// guarantees c_embed <= 4 c_pack; the adversarial f shows c_embed >= c_pack.
inline EmbeddingConstants embedding_constants(const CarlesonSequence& alpha, const Weight& w,
                                              int trials, std::uint64_t seed) {
    if (trials < 1) throw size_error("embedding_constants: need trials >= 1");
    const auto& cfg = w.lattice();
    if (alpha.depth != cfg.max_depth) throw size_error("embedding_constants: depth mismatch");

    EmbeddingConstants out;

    // packing side: factor w_I^2 per interval
    std::vector<std::vector<double>> w2(alpha.depth);
    for (int k = 0; k < alpha.depth; ++k) {
        const auto& wa = w.level_averages(k);
        w2[k].resize(alpha.levels[k].size());
        for (std::size_t j = 0; j < w2[k].size(); ++j) w2[k][j] = wa[j] * wa[j];
    }
    auto packed = detail::subtree_sums(alpha, &w2);
    for (int k = 0; k < alpha.depth; ++k) {
        const double inv_len = std::ldexp(1.0, k);
        const auto& wa = w.level_averages(k);
        for (std::size_t j = 0; j < packed[k].size(); ++j) {
            double v = packed[k][j] * inv_len / wa[j];
            if (v > out.c_pack) {
                out.c_pack = v;
                out.pack_argmax = {k, std::int64_t(j)};
            }
        }
    }

    // embedding side: test sum_I (f w^{1/2})_I^2 alpha_I against ||f||_2^2
    std::vector<double> sqw(w.leaves().size());
    for (std::size_t i = 0; i < sqw.size(); ++i) sqw[i] = std::sqrt(w.leaves()[i]);
    auto embed_ratio = [&](const std::vector<double>& f) {
        std::vector<double> fw(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) fw[i] = f[i] * sqw[i];
        auto avg = average_pyramid(fw, cfg);
        double num = 0.0;
        for (int k = 0; k < alpha.depth; ++k)
            for (std::size_t j = 0; j < alpha.levels[k].size(); ++j)
                num += avg[k][j] * avg[k][j] * alpha.levels[k][j];
        double den = inner(f, f);
        return den > 0.0 ? num / den : 0.0;
    };

    Rng rng(seed);
    for (int t = 0; t < trials; ++t) {
        std::vector<double> f(cfg.leaf_count());
        for (auto& v : f) v = rng.normal();
        out.c_embed = std::max(out.c_embed, embed_ratio(f));
    }
    {
        // adversarial candidate localized on the packing maximizer
        std::vector<double> f(cfg.leaf_count(), 0.0);
        std::size_t first = std::size_t(out.pack_argmax.position)
                            << (cfg.max_depth - out.pack_argmax.level);
        std::size_t count = std::size_t(1) << (cfg.max_depth - out.pack_argmax.level);
        for (std::size_t i = 0; i < count; ++i) f[first + i] = sqw[first + i];
        out.c_embed = std::max(out.c_embed, embed_ratio(f));
    }
    return out;
}

// Carleson constant of {c_I^2} against its logarithmic bound
// 2 log [w]_{A2^d}; the inequality lhs <= rhs is a theorem.
struct CSquaredBound {
    double lhs_max = 0.0;
    double rhs = 0.0;
    bool holds() const { return lhs_max <= rhs * (1.0 + 1e-12) + 1e-15; }
};

inline CSquaredBound c_squared_bound(const Weight& w) {
    const auto& cfg = w.lattice();
    const Weight winv = w.inverse();
    CarlesonSequence c2 = CarlesonSequence::zeros(cfg);
    for (int k = 0; k < cfg.max_depth; ++k)
        for (std::size_t j = 0; j < c2.levels[k].size(); ++j) {
            auto kc = disbalanced_constants(w, winv, {k, std::int64_t(j)});
            c2.levels[k][j] = kc.c * kc.c;
        }
    CSquaredBound out;
    out.lhs_max = carleson_constant(c2);
    out.rhs = 2.0 * std::log(a2d_characteristic(w, 2.0).value);
    return out;
}

// The two packing ratios that feed the embedding step of the S2..S4 bounds:
//   ratio_w    = max_J (1/(|J| w_J))        sum_{D(J)} w_I^2 c_I^2 (w^-1)_I
//   ratio_winv = max_J (1/(|J| (w^-1)_J))   sum_{D(J)} (w^-1)_I^2 d_I^2 w_I
// Both vanish as the characteristic approaches 1.
struct PackingRatios {
    double ratio_w = 0.0;
    double ratio_winv = 0.0;
};

inline PackingRatios packing_ratios(const Weight& w) {
    const auto& cfg = w.lattice();
    const Weight winv = w.inverse();
    CarlesonSequence aw = CarlesonSequence::zeros(cfg);
    CarlesonSequence av = CarlesonSequence::zeros(cfg);
    for (int k = 0; k < cfg.max_depth; ++k) {
        const auto& wa = w.level_averages(k);
        const auto& ua = winv.level_averages(k);
        for (std::size_t j = 0; j < aw.levels[k].size(); ++j) {
            auto kc = disbalanced_constants(w, winv, {k, std::int64_t(j)});
            aw.levels[k][j] = wa[j] * wa[j] * kc.c * kc.c * ua[j];
            av.levels[k][j] = ua[j] * ua[j] * kc.d * kc.d * wa[j];
        }
    }
    auto sums_w = detail::subtree_sums(aw, nullptr);
    auto sums_v = detail::subtree_sums(av, nullptr);
    PackingRatios out;
    for (int k = 0; k < cfg.max_depth; ++k) {
        const double inv_len = std::ldexp(1.0, k);
        const auto& wa = w.level_averages(k);
        const auto& ua = winv.level_averages(k);
        for (std::size_t j = 0; j < sums_w[k].size(); ++j) {
            out.ratio_w = std::max(out.ratio_w, sums_w[k][j] * inv_len / wa[j]);
            out.ratio_winv = std::max(out.ratio_winv, sums_v[k][j] * inv_len / ua[j]);
        }
    }
    return out;
}

} // namespace dyadweight
