#include "osfsu/ci.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace osfsu;

namespace {

Eigen::VectorXd random_vector(std::mt19937_64& rng, Eigen::Index n) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
    return v;
}

}  // namespace

TEST_CASE("partial correlation basics") {
    SUBCASE("identical vectors clamp near one") {
        std::mt19937_64 rng(1);
        const Eigen::VectorXd x = random_vector(rng, 30);
        CHECK(partial_correlation(x, x, {}) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(partial_correlation(x, x, {}) < 1.0);
    }
    SUBCASE("orthogonal patterns give zero") {
        Eigen::VectorXd x(8), y(8);
        x << 1, -1, 1, -1, 1, -1, 1, -1;
        y << 1, 1, -1, -1, 1, 1, -1, -1;
        CHECK(partial_correlation(x, y, {}) == doctest::Approx(0.0).epsilon(1e-14));
    }
    SUBCASE("empty conditioning set equals Pearson") {
        std::mt19937_64 rng(2);
        for (int rep = 0; rep < 20; ++rep) {
            const Eigen::VectorXd x = random_vector(rng, 40);
            const Eigen::VectorXd y = random_vector(rng, 40);
            CHECK(std::abs(partial_correlation(x, y, {}) -
                           oracles::partial_correlation(x, y, {})) < 1e-12);
        }
    }
    SUBCASE("matches the residual-regression oracle with |S| = 2") {
        std::mt19937_64 rng(3);
        for (int rep = 0; rep < 50; ++rep) {
            const Eigen::VectorXd a = random_vector(rng, 50);
            const Eigen::VectorXd b = random_vector(rng, 50);
            std::vector<Eigen::VectorXd> s{random_vector(rng, 50), random_vector(rng, 50)};
            // Correlate x and y with the conditioning set so the partialling matters.
            const Eigen::VectorXd x = a + 0.8 * s[0] - 0.3 * s[1];
            const Eigen::VectorXd y = b - 0.5 * s[0] + 0.6 * s[1] + 0.4 * a;
            const double got = partial_correlation(x, y, s);
            const double want = oracles::partial_correlation(x, y, s);
            CHECK(std::abs(got - want) < 1e-9);
        }
    }
    SUBCASE("constant input is degenerate") {
        bool degenerate = false;
        const Eigen::VectorXd c = Eigen::VectorXd::Constant(20, 3.5);
        std::mt19937_64 rng(4);
        const Eigen::VectorXd y = random_vector(rng, 20);
        CHECK(partial_correlation(c, y, {}, &degenerate) == 0.0);
        CHECK(degenerate);
    }
    SUBCASE("length and sample-size preconditions") {
        std::mt19937_64 rng(5);
        const Eigen::VectorXd x = random_vector(rng, 5);
        std::vector<Eigen::VectorXd> s{random_vector(rng, 5), random_vector(rng, 5)};
        CHECK_THROWS_AS(partial_correlation(x, x, s), std::invalid_argument);
    }
}

TEST_CASE("fisher z test") {
    SUBCASE("zero correlation gives p = 1") {
        Eigen::VectorXd x(8), y(8);
        x << 1, -1, 1, -1, 1, -1, 1, -1;
        y << 1, 1, -1, -1, 1, 1, -1, -1;
        const CiResult r = fisher_z_test(x, y, {}, 8);
        CHECK(r.statistic == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(r.p_value == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("identical vectors are overwhelmingly dependent") {
        std::mt19937_64 rng(6);
        const Eigen::VectorXd x = random_vector(rng, 50);
        CHECK(fisher_z_test(x, x, {}, 50).p_value < 1e-12);
    }
    SUBCASE("p matches the independent normal-CDF oracle") {
        std::mt19937_64 rng(7);
        for (int rep = 0; rep < 40; ++rep) {
            const Eigen::VectorXd noise = random_vector(rng, 100);
            const Eigen::VectorXd x = random_vector(rng, 100);
            const Eigen::VectorXd y = 0.5 * x + std::sqrt(0.75) * noise; // true correlation 0.5
            const CiResult r = fisher_z_test(x, y, {}, 100);
            const double rho = oracles::partial_correlation(x, y, {});
            const double z = 0.5 * std::log((1.0 + rho) / (1.0 - rho));
            const double want = oracles::normal_two_sided_p(std::sqrt(97.0) * std::abs(z));
            CHECK(std::abs(r.p_value - want) < 1e-9);
        }
    }
    SUBCASE("symmetric in x and y") {
        std::mt19937_64 rng(8);
        const Eigen::VectorXd x = random_vector(rng, 30);
        const Eigen::VectorXd y = random_vector(rng, 30);
        std::vector<Eigen::VectorXd> s{random_vector(rng, 30)};
        const CiResult a = fisher_z_test(x, y, s, 30);
        const CiResult b = fisher_z_test(y, x, s, 30);
        CHECK(a.p_value == b.p_value);
        CHECK(a.statistic == b.statistic);
    }
    SUBCASE("affine invariance") {
        std::mt19937_64 rng(9);
        const Eigen::VectorXd x = random_vector(rng, 60);
        const Eigen::VectorXd y = random_vector(rng, 60);
        std::vector<Eigen::VectorXd> s{random_vector(rng, 60)};
        const CiResult base = fisher_z_test(x, y, s, 60);
        const CiResult scaled = fisher_z_test(3.7 * x.array() + 11.0, y, s, 60);
        CHECK(std::abs(base.p_value - scaled.p_value) < 1e-9);
        CHECK(std::abs(base.statistic - scaled.statistic) < 1e-9);
    }
    SUBCASE("sample size precondition") {
        std::mt19937_64 rng(10);
        const Eigen::VectorXd x = random_vector(rng, 4);
        CHECK_THROWS_AS(fisher_z_test(x, x, std::vector<Eigen::VectorXd>{x}, 4),
                        std::invalid_argument);
    }
    SUBCASE("constant column is declared independent") {
        const Eigen::VectorXd c = Eigen::VectorXd::Constant(20, 1.0);
        std::mt19937_64 rng(11);
        const Eigen::VectorXd y = random_vector(rng, 20);
        const CiResult r = fisher_z_test(c, y, {}, 20);
        CHECK(r.p_value == 1.0);
        CHECK(r.degenerate);
    }
}

TEST_CASE("conditioning on a duplicate renders a column independent") {
    std::mt19937_64 rng(12);
    const Eigen::VectorXd x = random_vector(rng, 50);
    const Eigen::VectorXd labels = 0.9 * x + 0.1 * random_vector(rng, 50);
    CHECK(fisher_z_test(x, labels, {}, 50).p_value < 0.01);
    std::vector<Eigen::VectorXd> dup{x};
    CHECK(fisher_z_test(x, labels, dup, 50).p_value > 0.1);
}

TEST_CASE("g2 test") {
    SUBCASE("proportional table has zero statistic") {
        // counts: [[2,4],[3,6]] -> rows proportional -> independent
        std::vector<int> x, y;
        auto add = [&](int xv, int yv, int count) {
            for (int i = 0; i < count; ++i) {
                x.push_back(xv);
                y.push_back(yv);
            }
        };
        add(0, 0, 2);
        add(0, 1, 4);
        add(1, 0, 3);
        add(1, 1, 6);
        const CiResult r = g2_test(x, y, {});
        CHECK(r.statistic == 0.0);
        CHECK(r.p_value == 1.0);
    }
    SUBCASE("diagonal 2x2 table: frozen oracle values") {
        std::vector<int> x, y;
        for (int i = 0; i < 10; ++i) {
            x.push_back(0);
            y.push_back(0);
        }
        for (int i = 0; i < 10; ++i) {
            x.push_back(1);
            y.push_back(1);
        }
        const CiResult r = g2_test(x, y, {});
        CHECK(r.statistic == doctest::Approx(27.725887222397812).epsilon(1e-12)); // 40 ln 2
        CHECK(r.dof_or_n_eff == 1.0);
        CHECK(std::abs(r.p_value - 1.3977963343581468e-07) < 1e-15);
        const oracles::G2Outcome oracle = oracles::g2_direct(x, y, {});
        CHECK(std::abs(r.statistic - oracle.statistic) < 1e-9);
        CHECK(std::abs(r.p_value - oracle.p_value) < 1e-9);
    }
    SUBCASE("independence within strata of a binary conditioner") {
        // Exactly proportional tables inside both strata: marginals depend on
        // the stratum, but x and y are independent given it.
        std::vector<int> x, y, s;
        auto add = [&](int stratum, int xv, int yv, int count) {
            for (int i = 0; i < count; ++i) {
                s.push_back(stratum);
                x.push_back(xv);
                y.push_back(yv);
            }
        };
        // stratum 0: x marginal 80/20, y marginal 20/80
        add(0, 0, 0, 16);
        add(0, 0, 1, 64);
        add(0, 1, 0, 4);
        add(0, 1, 1, 16);
        // stratum 1: x marginal 20/80, y marginal 80/20
        add(1, 0, 0, 16);
        add(1, 0, 1, 4);
        add(1, 1, 0, 64);
        add(1, 1, 1, 16);
        std::vector<std::vector<int>> cond{s};
        const CiResult r = g2_test(x, y, cond);
        CHECK(r.p_value > 0.5);
        // the marginal association across strata is real, conditioning removes it
        CHECK(g2_test(x, y, {}).p_value < 0.05);
        const oracles::G2Outcome oracle = oracles::g2_direct(x, y, cond);
        CHECK(std::abs(r.statistic - oracle.statistic) < 1e-9);
        CHECK(std::abs(r.p_value - oracle.p_value) < 1e-9);
        CHECK(r.dof_or_n_eff == doctest::Approx(oracle.dof));
    }
    SUBCASE("single-level variable degenerates to p = 1") {
        const std::vector<int> x(10, 0);
        std::vector<int> y{0, 1, 0, 1, 0, 1, 0, 1, 0, 1};
        const CiResult r = g2_test(x, y, {});
        CHECK(r.p_value == 1.0);
        CHECK(r.degenerate);
    }
    SUBCASE("statistic is never negative") {
        std::mt19937_64 rng(14);
        std::uniform_int_distribution<int> level(0, 2);
        for (int rep = 0; rep < 50; ++rep) {
            std::vector<int> x, y;
            for (int i = 0; i < 60; ++i) {
                x.push_back(level(rng));
                y.push_back(level(rng));
            }
            CHECK(g2_test(x, y, {}).statistic >= 0.0);
        }
    }
}

TEST_CASE("fisher z p-values stay in [0, 1]") {
    std::mt19937_64 rng(15);
    for (int rep = 0; rep < 100; ++rep) {
        const Eigen::VectorXd x = random_vector(rng, 25);
        const Eigen::VectorXd y = random_vector(rng, 25);
        std::vector<Eigen::VectorXd> s;
        for (int i = 0; i < static_cast<int>(rng() % 3); ++i) s.push_back(random_vector(rng, 25));
        const CiResult r = fisher_z_test(x, y, s, 25);
        CHECK(r.p_value >= 0.0);
        CHECK(r.p_value <= 1.0);
    }
}
