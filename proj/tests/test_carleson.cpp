#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dyadweight/carleson.hpp"
#include "oracles.hpp"

using namespace dyadweight;

namespace {
Weight step_weight(int depth) {
    LatticeConfig cfg(depth);
    std::vector<double> v(cfg.leaf_count());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = i < v.size() / 2 ? 2.0 : 0.5;
    return Weight(std::move(v), cfg);
}
} // namespace

TEST_CASE("carleson constant") {
    LatticeConfig cfg(4);
    SUBCASE("a unit mass at the root packs to 1") {
        auto alpha = CarlesonSequence::zeros(cfg);
        alpha.set(root_interval(), 1.0);
        CHECK(carleson_constant(alpha) == doctest::Approx(1.0));
    }
    SUBCASE("alpha_I = |I| packs to the level count") {
        auto alpha = CarlesonSequence::zeros(cfg);
        for (int k = 0; k < cfg.max_depth; ++k)
            for (std::int64_t j = 0; j < (std::int64_t(1) << k); ++j)
                alpha.set({k, j}, std::ldexp(1.0, -k));
        CHECK(carleson_constant(alpha) == doctest::Approx(double(cfg.max_depth)).epsilon(1e-14));
    }
    SUBCASE("all zeros pack to zero") {
        CHECK(carleson_constant(CarlesonSequence::zeros(cfg)) == 0.0);
    }
    SUBCASE("random sequences match the double-loop oracle") {
        LatticeConfig deep(6);
        Rng rng(21);
        for (int trial = 0; trial < 5; ++trial) {
            auto alpha = CarlesonSequence::zeros(deep);
            for (auto& row : alpha.levels)
                for (auto& v : row) v = rng.uniform(0.0, 2.0);
            CHECK(carleson_constant(alpha) ==
                  doctest::Approx(oracle::brute_carleson_constant(alpha, deep)).epsilon(1e-12));
        }
    }
    SUBCASE("entries must be nonnegative") {
        auto alpha = CarlesonSequence::zeros(cfg);
        CHECK_THROWS_AS(alpha.set(root_interval(), -0.5), size_error);
    }
}

TEST_CASE("embedding constants") {
    SUBCASE("unit mass, constant weight") {
        LatticeConfig cfg(4);
        Weight ones(std::vector<double>(cfg.leaf_count(), 1.0), cfg);
        auto alpha = CarlesonSequence::zeros(cfg);
        alpha.set(root_interval(), 1.0);
        auto e = embedding_constants(alpha, ones, 16, 1);
        CHECK(e.c_pack == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(e.c_embed <= 4.0 + 1e-12);
        // the adversarial candidate f = w^{1/2} chi_{[0,1)} = 1 gives ratio 1
        CHECK(e.c_embed >= 1.0 - 1e-12);
    }
    SUBCASE("theorem holds with constant 4 on a random corpus") {
        LatticeConfig cfg(8);
        Rng rng(23);
        for (const auto& w : oracle::weight_corpus(cfg, 10)) {
            auto alpha = CarlesonSequence::zeros(cfg);
            for (auto& row : alpha.levels)
                for (auto& v : row) v = rng.uniform(0.0, 1.0);
            auto e = embedding_constants(alpha, w, 32, 7);
            CHECK(e.c_embed <= 4.0 * e.c_pack * (1.0 + 1e-9));
            CHECK(e.c_pack <= e.c_embed * (1.0 + 1e-9)); // adversarial f attains the packing ratio
        }
    }
    SUBCASE("homogeneity: both constants scale linearly in alpha") {
        LatticeConfig cfg(5);
        Rng rng(25);
        Weight w(oracle::random_leaves(rng, cfg), cfg);
        auto alpha = CarlesonSequence::zeros(cfg);
        for (auto& row : alpha.levels)
            for (auto& v : row) v = rng.uniform(0.0, 1.0);
        auto base = embedding_constants(alpha, w, 8, 3);
        auto scaled = embedding_constants(alpha.scaled(3.5), w, 8, 3);
        CHECK(scaled.c_pack == doctest::Approx(3.5 * base.c_pack).epsilon(1e-12));
        CHECK(scaled.c_embed == doctest::Approx(3.5 * base.c_embed).epsilon(1e-12));
    }
}

TEST_CASE("carleson bound for the square disbalance coefficients") {
    SUBCASE("constant weight: both sides vanish") {
        LatticeConfig cfg(5);
        Weight ones(std::vector<double>(cfg.leaf_count(), 1.0), cfg);
        auto b = c_squared_bound(ones);
        CHECK(b.lhs_max == doctest::Approx(0.0));
        CHECK(b.rhs == doctest::Approx(0.0));
        CHECK(b.holds());
    }
    SUBCASE("step weight: frozen values") {
        auto b = c_squared_bound(step_weight(6));
        CHECK(b.lhs_max == doctest::Approx(0.36).epsilon(1e-13)); // c_root^2
        CHECK(b.rhs == doctest::Approx(2.0 * std::log(25.0 / 16.0)).epsilon(1e-13));
        CHECK(b.holds());
    }
    SUBCASE("the logarithmic bound holds across the corpus") {
        LatticeConfig cfg(8);
        for (const auto& w : oracle::weight_corpus(cfg, 25)) {
            auto b = c_squared_bound(w);
            CHECK(b.lhs_max <= b.rhs * (1.0 + 1e-12) + 1e-15);
        }
    }
}

TEST_CASE("packing ratios feeding the embedding step") {
    SUBCASE("constant weight vanishes") {
        LatticeConfig cfg(5);
        Weight ones(std::vector<double>(cfg.leaf_count(), 1.0), cfg);
        auto r = packing_ratios(ones);
        CHECK(r.ratio_w == doctest::Approx(0.0));
        CHECK(r.ratio_winv == doctest::Approx(0.0));
    }
    SUBCASE("step weight: direct summation value") {
        // only the root contributes: w_I^2 c^2 (w^-1)_I / w_I = (5/4)^2 * 0.36 = 0.5625
        auto r = packing_ratios(step_weight(6));
        CHECK(r.ratio_w == doctest::Approx(0.5625).epsilon(1e-13));
        CHECK(r.ratio_winv == doctest::Approx(0.5625).epsilon(1e-13));
    }
    SUBCASE("ratios vanish as the characteristic approaches 1") {
        LatticeConfig cfg(8);
        double at_large = 0.0, at_small = 0.0;
        {
            Weight w = make_family(WeightFamily::HaarBump, 0.3, 5, cfg); // delta ~ 1e-1
            auto r = packing_ratios(w);
            at_large = std::max(r.ratio_w, r.ratio_winv);
        }
        {
            Weight w = make_family(WeightFamily::HaarBump, 0.031, 5, cfg); // delta ~ 1e-3
            auto r = packing_ratios(w);
            at_small = std::max(r.ratio_w, r.ratio_winv);
        }
        CHECK(at_small < at_large);
        CHECK(at_small < 1e-2);
        // log-log decay slope across the family is near 1 (ratios ~ delta)
        std::vector<double> deltas, ratios;
        for (double eps : {0.01, 0.03, 0.09, 0.27}) {
            Weight w = make_family(WeightFamily::HaarBump, eps, 5, cfg);
            deltas.push_back(a2d_characteristic(w, 2.0).delta());
            auto r = packing_ratios(w);
            ratios.push_back(std::max(r.ratio_w, r.ratio_winv));
        }
        double slope = (std::log(ratios.back()) - std::log(ratios.front())) /
                       (std::log(deltas.back()) - std::log(deltas.front()));
        CHECK(slope > 0.5);
        CHECK(slope < 1.5);
    }
}
