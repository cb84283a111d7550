#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace osfsu {

/// Instances restricted to a feature subset, min-max scaled to [0, 1] per
/// feature at construction, with a Euclidean neighborhood radius.
struct NeighborhoodSpace {
    Eigen::MatrixXd data; // n x |G|, already scaled
    double radius = 0.15;

    Eigen::Index size() const { return data.rows(); }
};

/// Scales each column of `raw` to [0, 1] (constant columns collapse to 0).
NeighborhoodSpace make_neighborhood_space(const Eigen::MatrixXd& raw, double radius);

/// All instances within `radius` of instance i, itself included. Sorted.
std::vector<Eigen::Index> neighborhood(const NeighborhoodSpace& space, Eigen::Index i);

/// {i | neighborhood(i) subset of X} — sorted.
std::vector<Eigen::Index> lower_approximation(const NeighborhoodSpace& space,
                                              std::span<const Eigen::Index> x);

/// {i | neighborhood(i) intersects X} — sorted.
std::vector<Eigen::Index> upper_approximation(const NeighborhoodSpace& space,
                                              std::span<const Eigen::Index> x);

struct DependencyResult {
    double gamma = 0.0;
    bool degenerate = false; // single decision class present
};

/// Fraction of instances in the positive region: the union over decision
/// classes of their lower approximations.
DependencyResult dependency_degree(const NeighborhoodSpace& space, std::span<const int> labels);

}  // namespace osfsu
