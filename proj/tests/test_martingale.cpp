#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dyadweight/linalg.hpp"
#include "dyadweight/martingale.hpp"
#include "oracles.hpp"

using namespace dyadweight;

namespace {
Weight step_weight(int depth) {
    LatticeConfig cfg(depth);
    std::vector<double> v(cfg.leaf_count());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = i < v.size() / 2 ? 2.0 : 0.5;
    return Weight(std::move(v), cfg);
}

double oracle_norm(const SigmaPattern& sigma, const Weight& w) {
    const std::size_t n = w.lattice().leaf_count();
    auto m = oracle::dense_weighted_transform_matrix(sigma, w);
    // largest singular value via eigenvalues of M^T M
    std::vector<double> mtm(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += m[k * n + i] * m[k * n + j];
            mtm[i * n + j] = s;
        }
    auto eig = symmetric_eigenvalues(std::move(mtm), n);
    double top = 0.0;
    for (double v : eig) top = std::max(top, v);
    return std::sqrt(top);
}
} // namespace

TEST_CASE("symmetric eigensolver sanity") {
    // known spectrum: [[2,1],[1,2]] -> {1, 3}
    std::vector<double> a = {2.0, 1.0, 1.0, 2.0};
    auto eig = symmetric_eigenvalues(a, 2);
    std::sort(eig.begin(), eig.end());
    CHECK(eig[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(eig[1] == doctest::Approx(3.0).epsilon(1e-12));

    // random symmetric: trace and Frobenius norm preserved
    Rng rng(2);
    const std::size_t n = 24;
    std::vector<double> s(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) s[i * n + j] = s[j * n + i] = rng.normal();
    double tr = 0.0, frob = 0.0;
    for (std::size_t i = 0; i < n; ++i) tr += s[i * n + i];
    for (double v : s) frob += v * v;
    auto ev = symmetric_eigenvalues(s, n);
    double tr2 = 0.0, frob2 = 0.0;
    for (double v : ev) { tr2 += v; frob2 += v * v; }
    CHECK(tr2 == doctest::Approx(tr).epsilon(1e-10));
    CHECK(frob2 == doctest::Approx(frob).epsilon(1e-10));
}

TEST_CASE("apply: basic multiplier behavior") {
    LatticeConfig cfg(5);
    Rng rng(4);
    std::vector<double> f(cfg.leaf_count());
    for (auto& v : f) v = rng.uniform(-2.0, 2.0);

    SUBCASE("zero multiplier annihilates") {
        auto out = apply(SigmaPattern::constant(0.0, cfg), f, cfg);
        for (double v : out) CHECK(std::fabs(v) <= 1e-14);
    }
    SUBCASE("identity multiplier reproduces a haar mode") {
        auto h = haar_leaf_samples({0, 0}, cfg);
        auto out = apply(SigmaPattern::constant(1.0, cfg), h, cfg);
        for (std::size_t i = 0; i < h.size(); ++i)
            CHECK(out[i] == doctest::Approx(h[i]).epsilon(1e-13));
    }
    SUBCASE("identity multiplier subtracts the mean") {
        auto out = apply(SigmaPattern::constant(1.0, cfg), f, cfg);
        double mean = 0.0;
        for (double v : f) mean += v;
        mean /= double(f.size());
        for (std::size_t i = 0; i < f.size(); ++i)
            CHECK(out[i] == doctest::Approx(f[i] - mean).epsilon(1e-12));
    }
}

TEST_CASE("weighted norm: unweighted case is max |sigma|") {
    LatticeConfig cfg(6);
    Weight ones(std::vector<double>(cfg.leaf_count(), 1.0), cfg);
    Rng rng(6);
    for (int trial = 0; trial < 50; ++trial) {
        SigmaPattern sigma = SigmaPattern::constant(0.0, cfg);
        for (auto& row : sigma.levels)
            for (auto& v : row) v = rng.uniform(-1.0, 1.0);
        auto est = weighted_norm(sigma, ones, 1e-8);
        CHECK(est.converged);
        CHECK(est.value == doctest::Approx(sigma.max_abs()).epsilon(1e-8));
    }
}

TEST_CASE("weighted norm: frozen 2x2 dense value") {
    // step weight (2, 1/2) at depth 1 with sigma = 1 on the root:
    // M^T M has eigenvalues {0, 25/16}, so the norm is exactly 5/4.
    Weight w = step_weight(1);
    auto est = weighted_norm(SigmaPattern::constant(1.0, w.lattice()), w, 1e-10,
                             NormMethod::DenseOracle);
    CHECK(est.value == doctest::Approx(1.25).epsilon(1e-12));
}

TEST_CASE("dense oracle, power iteration, and the pointwise matrix agree") {
    LatticeConfig cfg(5);
    Rng rng(8);
    for (int trial = 0; trial < 4; ++trial) {
        Weight w(oracle::random_leaves(rng, cfg), cfg);
        SigmaPattern sigma = SigmaPattern::random_signs(cfg, rng);
        const double tol = 1e-9;
        auto dense = weighted_norm(sigma, w, tol, NormMethod::DenseOracle);
        auto power = weighted_norm(sigma, w, tol, NormMethod::PowerIteration);
        CHECK(power.converged);
        CHECK(std::fabs(dense.value - power.value) <= 10 * tol * std::max(1.0, dense.value));
        CHECK(dense.value == doctest::Approx(oracle_norm(sigma, w)).epsilon(1e-9));
    }
}

TEST_CASE("martingale transform is self-adjoint on L2(dx)") {
    LatticeConfig cfg(6);
    Rng rng(10);
    SigmaPattern sigma = SigmaPattern::constant(0.0, cfg);
    for (auto& row : sigma.levels)
        for (auto& v : row) v = rng.uniform(-1.0, 1.0);
    std::vector<double> f(cfg.leaf_count()), g(cfg.leaf_count());
    for (auto& v : f) v = rng.normal();
    for (auto& v : g) v = rng.normal();
    CHECK(inner(apply(sigma, f, cfg), g) ==
          doctest::Approx(inner(f, apply(sigma, g, cfg))).epsilon(1e-10));
}

TEST_CASE("worst sigma search") {
    SUBCASE("constant weight: every sign pattern has norm 1") {
        LatticeConfig cfg(4);
        Weight ones(std::vector<double>(cfg.leaf_count(), 1.0), cfg);
        auto [sigma, est] = worst_sigma(ones, 2, 1);
        CHECK(est.value == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(sigma.max_abs() == doctest::Approx(1.0));
    }
    SUBCASE("greedy search matches exhaustive enumeration") {
        for (int depth : {2, 3}) { // 2^3 and 2^7 sign patterns
            Weight w = step_weight(depth);
            const auto& cfg = w.lattice();
            const std::size_t count = cfg.leaf_count() - 1; // sigma entries
            double best = 0.0;
            for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << count); ++mask) {
                SigmaPattern sigma = SigmaPattern::constant(1.0, cfg);
                std::size_t bit = 0;
                for (auto& row : sigma.levels)
                    for (auto& v : row) v = (mask >> bit++) & 1 ? 1.0 : -1.0;
                best = std::max(best, weighted_norm(sigma, w, 1e-10).value);
            }
            auto [sigma, est] = worst_sigma(w, 4, 3, 1e-10);
            CHECK(est.value == doctest::Approx(best).epsilon(1e-8));
        }
    }
    SUBCASE("determinism in the seed") {
        Weight w = step_weight(4);
        auto [s1, e1] = worst_sigma(w, 3, 17);
        auto [s2, e2] = worst_sigma(w, 3, 17);
        CHECK(s1.hash() == s2.hash());
        CHECK(e1.value == e2.value);
        CHECK(s1.hash().size() == 16);
    }
}

TEST_CASE("four-sum decomposition") {
    SUBCASE("constant weight: only the diagonal sum survives") {
        LatticeConfig cfg(5);
        Weight ones(std::vector<double>(cfg.leaf_count(), 1.0), cfg);
        Rng rng(12);
        std::vector<double> f(cfg.leaf_count()), g(cfg.leaf_count());
        for (auto& v : f) v = rng.normal();
        for (auto& v : g) v = rng.normal();
        SigmaPattern sigma = SigmaPattern::random_signs(cfg, rng);
        auto sums = four_sum_decomposition(sigma, f, g, ones);
        CHECK(std::fabs(sums.s2) <= 1e-12);
        CHECK(std::fabs(sums.s3) <= 1e-12);
        CHECK(std::fabs(sums.s4) <= 1e-12);
        CHECK(sums.s1 == doctest::Approx(sums.reference).epsilon(1e-12));
    }
    SUBCASE("reconstruction identity against the dense reference") {
        LatticeConfig cfg(6);
        Rng rng(14);
        for (const auto& w : oracle::weight_corpus(cfg, 8)) {
            std::vector<double> f(cfg.leaf_count()), g(cfg.leaf_count());
            for (auto& v : f) v = rng.normal();
            for (auto& v : g) v = rng.normal();
            SigmaPattern sigma = SigmaPattern::random_signs(cfg, rng);
            auto sums = four_sum_decomposition(sigma, f, g, w);
            CHECK(sums.total() == doctest::Approx(sums.reference).epsilon(1e-9));

            // reference checked against pointwise dense inner products
            std::vector<double> a(f.size()), b(g.size());
            for (std::size_t i = 0; i < f.size(); ++i) {
                a[i] = f[i] / std::sqrt(w.leaves()[i]);
                b[i] = g[i] * std::sqrt(w.leaves()[i]);
            }
            double direct = 0.0;
            for (const auto& I : descendants(root_interval(), cfg)) {
                if (I.level >= cfg.max_depth) continue;
                direct += sigma.at(I) * oracle::dense_haar_coefficient(a, I, cfg) *
                          oracle::dense_haar_coefficient(b, I, cfg);
            }
            CHECK(sums.reference == doctest::Approx(direct).epsilon(1e-9));
        }
    }
    SUBCASE("diagonal sum is controlled by the characteristic") {
        LatticeConfig cfg(6);
        Rng rng(16);
        for (const auto& w : oracle::weight_corpus(cfg, 10)) {
            const double bound = std::sqrt(a2d_characteristic(w, 2.0).value);
            for (int trial = 0; trial < 3; ++trial) {
                std::vector<double> f(cfg.leaf_count()), g(cfg.leaf_count());
                for (auto& v : f) v = rng.normal();
                for (auto& v : g) v = rng.normal();
                SigmaPattern sigma = SigmaPattern::random_signs(cfg, rng);
                auto sums = four_sum_decomposition(sigma, f, g, w);
                CHECK(std::fabs(sums.s1) <= bound * l2_norm(f) * l2_norm(g) * (1.0 + 1e-10));
            }
        }
    }
}
