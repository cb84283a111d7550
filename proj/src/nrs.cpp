#include "osfsu/nrs.hpp"

#include <map>
#include <stdexcept>

namespace osfsu {

namespace {

std::vector<char> membership_mask(Eigen::Index n, std::span<const Eigen::Index> x) {
    std::vector<char> in(static_cast<std::size_t>(n), 0);
    for (Eigen::Index idx : x) {
        if (idx < 0 || idx >= n) throw std::invalid_argument("instance index out of range");
        in[static_cast<std::size_t>(idx)] = 1;
    }
    return in;
}

}  // namespace

NeighborhoodSpace make_neighborhood_space(const Eigen::MatrixXd& raw, double radius) {
    if (radius < 0.0) throw std::invalid_argument("neighborhood radius must be >= 0");
    if (!raw.allFinite()) throw std::invalid_argument("neighborhood space requires finite data");

    NeighborhoodSpace space;
    space.radius = radius;
    space.data = raw;
    for (Eigen::Index j = 0; j < raw.cols(); ++j) {
        const double lo = raw.col(j).minCoeff();
        const double hi = raw.col(j).maxCoeff();
        if (hi > lo)
            space.data.col(j) = (raw.col(j).array() - lo) / (hi - lo);
        else
            space.data.col(j).setZero();
    }
    return space;
}

std::vector<Eigen::Index> neighborhood(const NeighborhoodSpace& space, Eigen::Index i) {
    const Eigen::Index n = space.size();
    if (i < 0 || i >= n) throw std::invalid_argument("neighborhood: instance index out of range");
    std::vector<Eigen::Index> result;
    for (Eigen::Index j = 0; j < n; ++j)
        if ((space.data.row(i) - space.data.row(j)).norm() <= space.radius) result.push_back(j);
    return result;
}

std::vector<Eigen::Index> lower_approximation(const NeighborhoodSpace& space,
                                              std::span<const Eigen::Index> x) {
    const std::vector<char> in = membership_mask(space.size(), x);
    std::vector<Eigen::Index> result;
    for (Eigen::Index i = 0; i < space.size(); ++i) {
        bool contained = true;
        for (Eigen::Index j : neighborhood(space, i))
            if (!in[static_cast<std::size_t>(j)]) {
                contained = false;
                break;
            }
        if (contained) result.push_back(i);
    }
    return result;
}

std::vector<Eigen::Index> upper_approximation(const NeighborhoodSpace& space,
                                              std::span<const Eigen::Index> x) {
    const std::vector<char> in = membership_mask(space.size(), x);
    std::vector<Eigen::Index> result;
    for (Eigen::Index i = 0; i < space.size(); ++i) {
        for (Eigen::Index j : neighborhood(space, i))
            if (in[static_cast<std::size_t>(j)]) {
                result.push_back(i);
                break;
            }
    }
    return result;
}

DependencyResult dependency_degree(const NeighborhoodSpace& space, std::span<const int> labels) {
    const Eigen::Index n = space.size();
    if (static_cast<Eigen::Index>(labels.size()) != n)
        throw std::invalid_argument("dependency_degree: labels length mismatch");
    if (n == 0) throw std::invalid_argument("dependency_degree: empty space");

    std::map<int, std::vector<Eigen::Index>> classes;
    for (Eigen::Index i = 0; i < n; ++i) classes[labels[static_cast<std::size_t>(i)]].push_back(i);
    if (classes.size() < 2) return DependencyResult{1.0, true};

    std::vector<char> positive(static_cast<std::size_t>(n), 0);
    for (const auto& [cls, members] : classes)
        for (Eigen::Index i : lower_approximation(space, members))
            positive[static_cast<std::size_t>(i)] = 1;

    Eigen::Index count = 0;
    for (char flag : positive) count += flag;
    return DependencyResult{static_cast<double>(count) / static_cast<double>(n), false};
}

}  // namespace osfsu
