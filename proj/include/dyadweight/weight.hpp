#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "dyadweight/errors.hpp"
#include "dyadweight/lattice.hpp"
#include "dyadweight/rng.hpp"

namespace dyadweight {

// Strictly positive step function on the finest dyadic grid of [0,1).
// Averages over every dyadic interval are cached eagerly, so all dyadic
// quantities on levels <= N are exact sums of leaf values. Immutable after
// construction; safe for concurrent reads.
class Weight {
  public:
    Weight(std::vector<double> leaf_values, const LatticeConfig& cfg) : cfg_(cfg) {
        if (leaf_values.size() != cfg.leaf_count())
            throw size_error("Weight: expected " + std::to_string(cfg.leaf_count()) +
                             " leaf values, got " + std::to_string(leaf_values.size()));
        for (double v : leaf_values)
            if (!(v > 0.0) || !std::isfinite(v))
                throw positivity_error("Weight: values must be positive and finite");
        avg_.resize(cfg.max_depth + 1);
        avg_[cfg.max_depth] = std::move(leaf_values);
        for (int k = cfg.max_depth; k-- > 0;) {
            const auto& fine = avg_[k + 1];
            auto& coarse = avg_[k];
            coarse.resize(fine.size() / 2);
            for (std::size_t j = 0; j < coarse.size(); ++j)
                coarse[j] = 0.5 * (fine[2 * j] + fine[2 * j + 1]);
        }
    }

    const LatticeConfig& lattice() const { return cfg_; }
    int depth() const { return cfg_.max_depth; }
    const std::vector<double>& leaves() const { return avg_[cfg_.max_depth]; }

    // |I|^{-1} \int_I w dx, exact from the cached pyramid
    double average(const DyadicInterval& I) const {
        if (I.level > cfg_.max_depth) throw depth_error("Weight::average: level too deep");
        return avg_[I.level][std::size_t(I.position)];
    }

    // averages of all intervals on one level
    const std::vector<double>& level_averages(int level) const { return avg_.at(level); }

    double value_at(double x) const {
        auto idx = std::size_t(std::ldexp(x, cfg_.max_depth));
        return leaves()[std::min(idx, leaves().size() - 1)];
    }

    Weight inverse() const {
        std::vector<double> inv(leaves().size());
        for (std::size_t i = 0; i < inv.size(); ++i) inv[i] = 1.0 / leaves()[i];
        return Weight(std::move(inv), cfg_);
    }

    Weight scaled(double c) const {
        if (!(c > 0.0)) throw positivity_error("Weight::scaled: factor must be positive");
        std::vector<double> v(leaves());
        for (double& x : v) x *= c;
        return Weight(std::move(v), cfg_);
    }

  private:
    LatticeConfig cfg_;
    std::vector<std::vector<double>> avg_; // avg_[k][j] over levels 0..N
};

enum class WeightFamily { HaarBump, Step, PowerLike, RandomMultiscale };

inline WeightFamily weight_family_from_string(const std::string& s) {
    if (s == "haar-bump") return WeightFamily::HaarBump;
    if (s == "step") return WeightFamily::Step;
    if (s == "power-like") return WeightFamily::PowerLike;
    if (s == "random-multiscale") return WeightFamily::RandomMultiscale;
    throw size_error("unknown weight family: " + s);
}

inline std::string to_string(WeightFamily f) {
    switch (f) {
        case WeightFamily::HaarBump: return "haar-bump";
        case WeightFamily::Step: return "step";
        case WeightFamily::PowerLike: return "power-like";
        case WeightFamily::RandomMultiscale: return "random-multiscale";
    }
    return "?";
}

// Parameterized generators whose dyadic A2 characteristic tends to 1 as
// epsilon -> 0. Deterministic in (kind, epsilon, seed).
//
//   haar-bump:         1 + eps on the left half and 1 - eps on the right half
//                      of one host interval. Seed 0 hosts the bump on [0,1);
//                      other seeds pick a deeper host interval. (The root
//                      host is a degenerate case: its weighted norm excess
//                      grows like delta instead of sqrt(delta), because the
//                      perturbation lives on a single scale whose Haar mode
//                      decouples; deeper hosts couple a chain of ancestors.)
//   step:              two-valued weight 1+eps / 1/(1+eps) split at 1/2.
//   power-like:        w(x) = (x + 2^-N)^eps sampled at leaf midpoints.
//   random-multiscale: exp(eps * g) where g sums one random +-1 Haar sign
//                      per interval on levels 0..min(N,6)-1, scaled by the
//                      level count; values clipped away from 0 for safety.
inline Weight make_family(WeightFamily kind, double epsilon, std::uint64_t seed,
                          const LatticeConfig& cfg) {
    const std::size_t n = cfg.leaf_count();
    std::vector<double> v(n, 1.0);
    switch (kind) {
        case WeightFamily::HaarBump: {
            if (!(epsilon < 1.0) || epsilon < 0.0)
                throw positivity_error("haar-bump: need 0 <= eps < 1 to keep w positive");
            int host_level = 0;
            std::int64_t host_pos = 0;
            if (seed != 0) {
                Rng rng(seed);
                host_level = 1 + int(rng.below(std::uint64_t(std::min(cfg.max_depth - 1, 4))));
                host_pos = std::int64_t(rng.below(std::uint64_t(1) << host_level));
            }
            DyadicInterval host{host_level, host_pos};
            std::size_t first = std::size_t(host.position) << (cfg.max_depth - host.level);
            std::size_t half = std::size_t(1) << (cfg.max_depth - host.level - 1);
            for (std::size_t i = 0; i < half; ++i) v[first + i] = 1.0 + epsilon;
            for (std::size_t i = 0; i < half; ++i) v[first + half + i] = 1.0 - epsilon;
            break;
        }
        case WeightFamily::Step: {
            if (!(1.0 + epsilon > 0.0))
                throw positivity_error("step: need eps > -1");
            for (std::size_t i = 0; i < n / 2; ++i) v[i] = 1.0 + epsilon;
            for (std::size_t i = n / 2; i < n; ++i) v[i] = 1.0 / (1.0 + epsilon);
            break;
        }
        case WeightFamily::PowerLike: {
            double shift = std::ldexp(1.0, -cfg.max_depth);
            for (std::size_t i = 0; i < n; ++i) {
                double x = (double(i) + 0.5) / double(n);
                v[i] = std::pow(x + shift, epsilon);
            }
            break;
        }
        case WeightFamily::RandomMultiscale: {
            Rng rng(seed);
            int levels = std::min(cfg.max_depth, 6);
            std::vector<double> g(n, 0.0);
            for (int k = 0; k < levels; ++k) {
                std::size_t block = n >> (k + 1); // half-interval width in leaves
                for (std::int64_t j = 0; j < (std::int64_t(1) << k); ++j) {
                    double s = double(rng.sign()) / double(levels);
                    std::size_t first = std::size_t(j) * 2 * block;
                    for (std::size_t i = 0; i < block; ++i) g[first + i] -= s;
                    for (std::size_t i = 0; i < block; ++i) g[first + block + i] += s;
                }
            }
            for (std::size_t i = 0; i < n; ++i) v[i] = std::max(std::exp(epsilon * g[i]), 1e-9);
            break;
        }
    }
    return Weight(std::move(v), cfg);
}

// --- serialization: array of leaf values plus the depth; exact round-trip ---

inline nlohmann::ordered_json weight_to_json(const Weight& w) {
    nlohmann::ordered_json j;
    j["depth"] = w.depth();
    j["values"] = w.leaves();
    return j;
}

inline Weight weight_from_json(const nlohmann::json& j) {
    if (!j.contains("depth") || !j.contains("values"))
        throw size_error("weight json: need fields 'depth' and 'values'");
    LatticeConfig cfg(j.at("depth").get<int>());
    return Weight(j.at("values").get<std::vector<double>>(), cfg);
}

} // namespace dyadweight
