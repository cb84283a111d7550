#include "osfsu/nrs.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace osfsu;

namespace {

// 1-D fixture: two clusters with one borderline point between classes.
NeighborhoodSpace fixture_space(double radius) {
    Eigen::MatrixXd data(6, 1);
    data << 0.0, 0.1, 0.2, 0.25, 1.0, 1.1;
    return make_neighborhood_space(data, radius);
}

const std::vector<int> fixture_labels{0, 0, 0, 1, 1, 1};

Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index n, Eigen::Index cols) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd m(n, cols);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = normal(rng);
    return m;
}

std::vector<int> random_labels(std::mt19937_64& rng, Eigen::Index n, int classes) {
    std::uniform_int_distribution<int> pick(0, classes - 1);
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (auto& l : labels) l = pick(rng);
    return labels;
}

}  // namespace

TEST_CASE("neighborhood membership") {
    SUBCASE("zero radius keeps the point and exact duplicates") {
        Eigen::MatrixXd data(4, 1);
        data << 0.3, 0.3, 0.7, 0.9;
        const NeighborhoodSpace space = make_neighborhood_space(data, 0.0);
        CHECK(neighborhood(space, 0) == std::vector<Eigen::Index>{0, 1});
        CHECK(neighborhood(space, 2) == std::vector<Eigen::Index>{2});
    }
    SUBCASE("radius beyond the diameter includes everyone") {
        std::mt19937_64 rng(1);
        const NeighborhoodSpace space = make_neighborhood_space(random_matrix(rng, 12, 3), 10.0);
        CHECK(neighborhood(space, 5).size() == 12);
    }
    SUBCASE("the 6-point fixture at h = 0.15") {
        // scaled by the 1.1 span: |0 - 0.2|/1.1 > 0.15, |0 - 0.1|/1.1 <= 0.15
        const NeighborhoodSpace space = fixture_space(0.15);
        CHECK(neighborhood(space, 0) == std::vector<Eigen::Index>{0, 1});
    }
    CHECK_THROWS_AS(neighborhood(fixture_space(0.1), 6), std::invalid_argument);
}

TEST_CASE("lower and upper approximations") {
    const NeighborhoodSpace space = fixture_space(0.15);
    std::vector<Eigen::Index> all{0, 1, 2, 3, 4, 5};

    SUBCASE("the full set approximates to itself") {
        CHECK(lower_approximation(space, all) == all);
        CHECK(upper_approximation(space, all) == all);
    }
    SUBCASE("the empty set approximates to itself") {
        CHECK(lower_approximation(space, {}).empty());
        CHECK(upper_approximation(space, {}).empty());
    }
    SUBCASE("class A of the fixture: only the far end is pure") {
        std::vector<Eigen::Index> class_a{0, 1, 2};
        CHECK(lower_approximation(space, class_a) == std::vector<Eigen::Index>{0});
    }
    SUBCASE("lower is inside X is inside upper") {
        std::mt19937_64 rng(2);
        const NeighborhoodSpace rspace = make_neighborhood_space(random_matrix(rng, 30, 2), 0.3);
        for (int rep = 0; rep < 20; ++rep) {
            std::vector<Eigen::Index> x;
            for (Eigen::Index i = 0; i < 30; ++i)
                if (rng() % 2 == 0) x.push_back(i);
            const auto lower = lower_approximation(rspace, x);
            const auto upper = upper_approximation(rspace, x);
            CHECK(std::includes(x.begin(), x.end(), lower.begin(), lower.end()));
            CHECK(std::includes(upper.begin(), upper.end(), x.begin(), x.end()));
        }
    }
}

TEST_CASE("dependency degree") {
    SUBCASE("fixture value") {
        const DependencyResult r = dependency_degree(fixture_space(0.15), fixture_labels);
        CHECK(r.gamma == 0.5);
        CHECK_FALSE(r.degenerate);
    }
    SUBCASE("full separation gives gamma = 1") {
        Eigen::MatrixXd data(6, 1);
        data << 0.0, 0.01, 0.02, 0.98, 0.99, 1.0;
        const std::vector<int> labels{0, 0, 0, 1, 1, 1};
        const NeighborhoodSpace space = make_neighborhood_space(data, 0.1);
        CHECK(dependency_degree(space, labels).gamma == 1.0);
    }
    SUBCASE("radius beyond the diameter gives gamma = 0") {
        const DependencyResult r = dependency_degree(fixture_space(10.0), fixture_labels);
        CHECK(r.gamma == 0.0);
    }
    SUBCASE("single class is degenerate") {
        const std::vector<int> one_class{1, 1, 1, 1, 1, 1};
        const DependencyResult r = dependency_degree(fixture_space(0.15), one_class);
        CHECK(r.gamma == 1.0);
        CHECK(r.degenerate);
    }
}

TEST_CASE("dependency degree equals the brute-force oracle") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> size(5, 50);
    std::uniform_real_distribution<double> radius(0.0, 0.8);
    for (int rep = 0; rep < 100; ++rep) {
        const Eigen::Index n = size(rng);
        const Eigen::Index cols = 1 + static_cast<Eigen::Index>(rng() % 3);
        const Eigen::MatrixXd raw = random_matrix(rng, n, cols);
        const std::vector<int> labels = random_labels(rng, n, 2 + static_cast<int>(rng() % 2));
        const double h = radius(rng);
        const DependencyResult got = dependency_degree(make_neighborhood_space(raw, h), labels);
        CHECK(got.gamma == oracles::nrs_gamma(raw, labels, h));
    }
}

TEST_CASE("gamma is monotone non-increasing in the radius") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> radius(0.0, 0.9);
    for (int rep = 0; rep < 50; ++rep) {
        const Eigen::MatrixXd raw = random_matrix(rng, 25, 2);
        const std::vector<int> labels = random_labels(rng, 25, 2);
        double h1 = radius(rng), h2 = radius(rng);
        if (h1 > h2) std::swap(h1, h2);
        const double g1 = dependency_degree(make_neighborhood_space(raw, h1), labels).gamma;
        const double g2 = dependency_degree(make_neighborhood_space(raw, h2), labels).gamma;
        CHECK(g1 >= g2);
    }
}

TEST_CASE("gamma is monotone non-decreasing under feature growth") {
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 30; ++rep) {
        const Eigen::MatrixXd raw = random_matrix(rng, 30, 4);
        const std::vector<int> labels = random_labels(rng, 30, 2);
        const double h = 0.25;
        const double small = dependency_degree(
            make_neighborhood_space(raw.leftCols(2), h), labels).gamma;
        const double large = dependency_degree(make_neighborhood_space(raw, h), labels).gamma;
        CHECK(large >= small);
    }
}

TEST_CASE("constant features collapse to zero after scaling") {
    Eigen::MatrixXd data(4, 2);
    data << 1.0, 5.0, 1.0, 6.0, 1.0, 7.0, 1.0, 8.0;
    const NeighborhoodSpace space = make_neighborhood_space(data, 0.5);
    CHECK(space.data.col(0).cwiseAbs().maxCoeff() == 0.0);
    CHECK(space.data.col(1).minCoeff() == 0.0);
    CHECK(space.data.col(1).maxCoeff() == 1.0);
}
