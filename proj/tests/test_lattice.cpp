#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dyadweight/lattice.hpp"

using namespace dyadweight;

TEST_CASE("children split positions by index doubling") {
    LatticeConfig cfg(4);
    auto [l0, r0] = children({0, 0}, cfg);
    CHECK(l0 == DyadicInterval{1, 0});
    CHECK(r0 == DyadicInterval{1, 1});

    auto [l, r] = children({2, 3}, cfg);
    CHECK(l == DyadicInterval{3, 6});
    CHECK(r == DyadicInterval{3, 7});

    CHECK_THROWS_AS(children({4, 0}, cfg), depth_error);
}

TEST_CASE("interval geometry") {
    DyadicInterval I{2, 3}; // [0.75, 1)
    CHECK(I.left() == doctest::Approx(0.75));
    CHECK(I.right() == doctest::Approx(1.0));
    CHECK(I.length() == doctest::Approx(0.25));
    CHECK(I.contains(0.75));
    CHECK(!I.contains(1.0));
    CHECK(!I.contains(0.7499));
}

TEST_CASE("descendants enumerate level-major down to the leaves") {
    SUBCASE("root at depth 1") {
        LatticeConfig cfg(1);
        auto d = descendants(root_interval(), cfg);
        REQUIRE(d.size() == 3);
        CHECK(d[0] == DyadicInterval{0, 0});
        CHECK(d[1] == DyadicInterval{1, 0});
        CHECK(d[2] == DyadicInterval{1, 1});
    }
    SUBCASE("leaf is its own tree") {
        LatticeConfig cfg(3);
        auto d = descendants({3, 5}, cfg);
        REQUIRE(d.size() == 1);
        CHECK(d[0] == DyadicInterval{3, 5});
    }
    SUBCASE("half interval at depth 2") {
        LatticeConfig cfg(2);
        auto d = descendants({1, 0}, cfg);
        CHECK(d.size() == 3); // 2^(2-1+1) - 1
    }
    SUBCASE("below the finest level is rejected") {
        LatticeConfig cfg(2);
        CHECK_THROWS_AS(descendants({3, 0}, cfg), depth_error);
        CHECK_THROWS_AS(LatticeConfig(0), size_error);
    }
    SUBCASE("counts per level and order") {
        LatticeConfig cfg(5);
        DyadicInterval J{1, 1};
        auto d = descendants(J, cfg);
        CHECK(d.size() == (std::size_t(2) << (cfg.max_depth - J.level)) - 1);
        std::size_t idx = 0;
        for (int m = 0; m + J.level <= cfg.max_depth; ++m) {
            std::size_t count = std::size_t(1) << m; // 2^m intervals at level J.level+m
            for (std::size_t j = 0; j < count; ++j, ++idx) {
                CHECK(d[idx].level == J.level + m);
                if (j > 0) CHECK(d[idx].position == d[idx - 1].position + 1);
            }
        }
        CHECK(idx == d.size());
    }
}

TEST_CASE("haar_eval is positive on the right half") {
    CHECK(haar_eval({0, 0}, 0.75) == doctest::Approx(1.0));
    CHECK(haar_eval({0, 0}, 0.25) == doctest::Approx(-1.0));
    CHECK(haar_eval({1, 0}, 0.75) == 0.0);
    // L2 normalization scales like |I|^{-1/2}
    CHECK(haar_eval({2, 0}, 0.01) == doctest::Approx(-2.0));
    CHECK(haar_eval({2, 0}, 0.2) == doctest::Approx(2.0));
}

TEST_CASE("haar functions are exactly orthonormal on the finest grid") {
    LatticeConfig cfg(4);
    const std::size_t n = cfg.leaf_count();
    auto leaf_mid = [&](std::size_t i) { return (double(i) + 0.5) / double(n); };

    auto all = descendants(root_interval(), cfg);
    for (const auto& I : all) {
        if (I.level >= cfg.max_depth) continue;
        double sum = 0.0, sum2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double v = haar_eval(I, leaf_mid(i));
            sum += v;
            sum2 += v * v;
        }
        CHECK(std::fabs(sum) / double(n) <= 1e-15);
        CHECK(sum2 / double(n) == doctest::Approx(1.0).epsilon(1e-14));
    }
    for (const auto& I : all)
        for (const auto& J : all) {
            if (I.level >= cfg.max_depth || J.level >= cfg.max_depth || I == J) continue;
            double dot = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                dot += haar_eval(I, leaf_mid(i)) * haar_eval(J, leaf_mid(i));
            CHECK(std::fabs(dot) / double(n) <= 1e-15);
        }
}
