#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include <json.hpp>

#include "dyadweight/characteristic.hpp"
#include "dyadweight/weight.hpp"
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

TEST_CASE("weight construction validates input") {
    LatticeConfig cfg(2);
    CHECK_THROWS_AS(Weight({1.0, 1.0}, cfg), size_error);
    CHECK_THROWS_AS(Weight({1.0, -1.0, 1.0, 1.0}, cfg), positivity_error);
    CHECK_THROWS_AS(Weight({1.0, 0.0, 1.0, 1.0}, cfg), positivity_error);
}

TEST_CASE("averages match direct summation") {
    Weight ones(std::vector<double>(16, 1.0), LatticeConfig(4));
    for (const auto& I : descendants(root_interval(), ones.lattice()))
        CHECK(ones.average(I) == doctest::Approx(1.0));

    Weight w = step_weight(3);
    CHECK(w.average(root_interval()) == doctest::Approx(1.25));

    // leaf-indexed ramp: every cached average equals the mean of its leaves
    LatticeConfig cfg(2);
    Weight ramp({1.0, 2.0, 3.0, 4.0}, cfg);
    for (const auto& I : descendants(root_interval(), cfg))
        CHECK(ramp.average(I) ==
              doctest::Approx(oracle::direct_average(ramp.leaves(), I, cfg)).epsilon(1e-15));
}

TEST_CASE("average consistency and Cauchy-Schwarz hold on random weights") {
    LatticeConfig cfg(6);
    Rng rng(7);
    Weight w(oracle::random_leaves(rng, cfg), cfg);
    Weight winv = w.inverse();
    for (const auto& I : descendants(root_interval(), cfg)) {
        if (I.level < cfg.max_depth) {
            auto [lo, hi] = children(I, cfg);
            CHECK(w.average(I) ==
                  doctest::Approx(0.5 * (w.average(lo) + w.average(hi))).epsilon(1e-14));
        }
        CHECK(w.average(I) * winv.average(I) >= 1.0 - 1e-12);
    }
}

TEST_CASE("a2d characteristic") {
    SUBCASE("constant weight") {
        Weight ones(std::vector<double>(16, 1.0), LatticeConfig(4));
        CHECK(a2d_characteristic(ones, 2.0).value == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("step weight is 25/16, maximized on the root") {
        Weight w = step_weight(4);
        auto c = a2d_characteristic(w, 2.0);
        CHECK(c.value == doctest::Approx(25.0 / 16.0).epsilon(1e-14));
        CHECK(c.delta() == doctest::Approx(9.0 / 16.0).epsilon(1e-13));
        CHECK(c.value == doctest::Approx(oracle::brute_a2d(w, 2.0)).epsilon(1e-14));
    }
    SUBCASE("general p agrees with brute force and tends to the p=2 value") {
        LatticeConfig cfg(5);
        Rng rng(11);
        Weight w(oracle::random_leaves(rng, cfg), cfg);
        for (double p : {1.5, 2.0, 3.0})
            CHECK(a2d_characteristic(w, p).value ==
                  doctest::Approx(oracle::brute_a2d(w, p)).epsilon(1e-12));
        CHECK(a2d_characteristic(w, 2.0 + 1e-9).value ==
              doctest::Approx(a2d_characteristic(w, 2.0).value).epsilon(1e-6));
    }
    SUBCASE("scale invariance, inverse symmetry, and equality iff constant") {
        LatticeConfig cfg(6);
        for (const auto& w : oracle::weight_corpus(cfg, 8)) {
            const double c = a2d_characteristic(w, 2.0).value;
            CHECK(c >= 1.0 - 1e-14);
            CHECK(a2d_characteristic(w.scaled(3.7), 2.0).value == doctest::Approx(c).epsilon(1e-12));
            CHECK(a2d_characteristic(w.inverse(), 2.0).value == doctest::Approx(c).epsilon(1e-12));
        }
        Weight flat(std::vector<double>(64, 2.5), cfg);
        CHECK(std::fabs(a2d_characteristic(flat, 2.0).value - 1.0) <= 1e-12);
        Weight bump = make_family(WeightFamily::HaarBump, 1e-5, 0, cfg);
        CHECK(a2d_characteristic(bump, 2.0).value > 1.0 + 1e-12);
    }
}

TEST_CASE("weight families") {
    LatticeConfig cfg(6);
    SUBCASE("epsilon zero gives the constant weight") {
        for (auto kind : {WeightFamily::HaarBump, WeightFamily::Step, WeightFamily::PowerLike,
                          WeightFamily::RandomMultiscale}) {
            Weight w = make_family(kind, 0.0, 3, cfg);
            CHECK(a2d_characteristic(w, 2.0).value == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    SUBCASE("root haar bump at eps=1/2 is the (1.5, 0.5) step") {
        Weight w = make_family(WeightFamily::HaarBump, 0.5, 0, cfg);
        CHECK(w.leaves().front() == doctest::Approx(1.5));
        CHECK(w.leaves().back() == doctest::Approx(0.5));
        CHECK(a2d_characteristic(w, 2.0).value ==
              doctest::Approx(oracle::brute_a2d(w, 2.0)).epsilon(1e-14));
        CHECK(a2d_characteristic(w, 2.0).value == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    }
    SUBCASE("determinism") {
        for (auto kind : {WeightFamily::HaarBump, WeightFamily::RandomMultiscale}) {
            Weight a = make_family(kind, 0.3, 99, cfg);
            Weight b = make_family(kind, 0.3, 99, cfg);
            CHECK(a.leaves() == b.leaves());
        }
        Weight a = make_family(WeightFamily::RandomMultiscale, 0.3, 99, cfg);
        Weight b = make_family(WeightFamily::RandomMultiscale, 0.3, 100, cfg);
        CHECK(a.leaves() != b.leaves());
    }
    SUBCASE("positivity violation is rejected") {
        CHECK_THROWS_AS(make_family(WeightFamily::HaarBump, 1.0, 0, cfg), positivity_error);
        CHECK_THROWS_AS(make_family(WeightFamily::HaarBump, 1.5, 0, cfg), positivity_error);
    }
    SUBCASE("haar-bump delta is monotone in epsilon and vanishes") {
        double prev = 0.0;
        for (double eps : {1e-3, 1e-2, 0.1, 0.3, 0.6}) {
            double d = a2d_characteristic(make_family(WeightFamily::HaarBump, eps, 5, cfg), 2.0)
                           .delta();
            CHECK(d > prev);
            prev = d;
        }
        CHECK(a2d_characteristic(make_family(WeightFamily::HaarBump, 1e-4, 5, cfg), 2.0).delta() <
              1e-7);
    }
}

TEST_CASE("poisson and heat characteristics") {
    SUBCASE("constant weight gives exactly 1") {
        Weight ones(std::vector<double>(64, 1.0), LatticeConfig(6));
        CHECK(std::fabs(poisson_characteristic(ones).value - 1.0) <= 1e-6);
        CHECK(std::fabs(heat_characteristic(ones).value - 1.0) <= 1e-6);
    }
    SUBCASE("step weight: at least 1, comparable with the dyadic value") {
        Weight w = step_weight(6);
        const double a2d = a2d_characteristic(w, 2.0).value;
        const double pc = poisson_characteristic(w).value;
        const double hc = heat_characteristic(w).value;
        CHECK(pc >= 1.0);
        CHECK(hc >= 1.0);
        CHECK(pc <= 4.0 * a2d);
        CHECK(hc <= 4.0 * a2d);
    }
    SUBCASE("kernel concentrates as t -> 0 where the weight is flat") {
        Weight w = step_weight(6);
        double u = poisson_extension_value(w, 0.25, 1e-9);
        double v = poisson_extension_value(w.inverse(), 0.25, 1e-9);
        CHECK(u * v == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(u == doctest::Approx(2.0).epsilon(1e-6));
    }
    SUBCASE("fft-accelerated scan matches a naive correlation of the same kernel") {
        LatticeConfig cfg(5);
        Rng rng(29);
        Weight w(oracle::random_leaves(rng, cfg), cfg);
        Weight winv = w.inverse();
        QuadratureSpec quad;
        quad.t_count = 12;
        const double fast = poisson_characteristic(w, quad).value;

        // same cell masses and window anchoring, summed by double loop
        const std::size_t P = 2 * cfg.leaf_count();
        const double h = 1.0 / double(cfg.leaf_count());
        std::vector<double> wper(P), vper(P);
        for (std::size_t i = 0; i < cfg.leaf_count(); ++i) {
            wper[i] = wper[P - 1 - i] = w.leaves()[i];
            vper[i] = vper[P - 1 - i] = 1.0 / w.leaves()[i];
        }
        double wmean = 0.0, vmean = 0.0;
        for (std::size_t i = 0; i < P; ++i) { wmean += wper[i]; vmean += vper[i]; }
        wmean /= double(P);
        vmean /= double(P);
        double naive = 1.0;
        const int copies = 32;
        for (double t : quad.t_grid(cfg.max_depth)) {
            std::vector<double> g(P, 0.0);
            for (std::size_t d = 0; d < P; ++d)
                for (int m = -copies; m < copies; ++m) {
                    double a = double(d) * h + 2.0 * m;
                    g[d] += (std::atan((0.5 * h - a) / t) - std::atan((0.5 * h - a - h) / t)) /
                            std::numbers::pi;
                }
            double tail = 1.0;
            for (double v : g) tail -= v;
            for (std::size_t i = 0; i < cfg.leaf_count(); ++i) {
                double uw = 0.0, uv = 0.0;
                for (std::size_t d = 0; d < P; ++d) {
                    uw += g[d] * wper[(i + d) % P];
                    uv += g[d] * vper[(i + d) % P];
                }
                naive = std::max(naive, (uw + wmean * tail) * (uv + vmean * tail));
            }
        }
        CHECK(fast == doctest::Approx(naive).epsilon(1e-9));
    }
    SUBCASE("comparability against the dyadic characteristic on a corpus") {
        LatticeConfig cfg(6);
        for (const auto& w : oracle::weight_corpus(cfg, 20)) {
            const double a = a2d_characteristic(w, 2.0).value;
            const double pc = poisson_characteristic(w).value;
            const double hc = heat_characteristic(w).value;
            CHECK(pc >= 1.0 - 1e-9);
            CHECK(hc >= 1.0 - 1e-9);
            // two-sided comparability with generous fixed constants
            CHECK(pc <= 8.0 * a);
            CHECK(a <= 8.0 * pc);
            CHECK(hc <= 8.0 * a);
            CHECK(a <= 8.0 * hc);
        }
    }
}

TEST_CASE("weight JSON round-trip is exact") {
    LatticeConfig cfg(5);
    Rng rng(13);
    Weight w(oracle::random_leaves(rng, cfg), cfg);
    auto j = weight_to_json(w);
    Weight back = weight_from_json(nlohmann::json::parse(j.dump()));
    CHECK(back.depth() == w.depth());
    CHECK(back.leaves() == w.leaves()); // bit-exact
    CHECK_THROWS_AS(weight_from_json(nlohmann::json::parse("{\"depth\":2}")), size_error);
}
