#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace osfsu {

/// Outcome of a conditional-independence test.
struct CiResult {
    double p_value = 1.0;
    double statistic = 0.0;
    double dof_or_n_eff = 0.0; // chi-square dof, or the n - |S| - 3 sample term
    bool degenerate = false;   // constant input or empty-table fallback fired
};

/// Pearson correlation of x and y when s is empty, otherwise the partial
/// correlation given s via inversion of the (|s|+2)-dim correlation matrix.
/// Result is clamped to [-1 + 1e-12, 1 - 1e-12]. A constant x or y yields 0
/// with *degenerate set. A singular correlation matrix is retried with a
/// 1e-8 ridge on the diagonal.
double partial_correlation(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                           std::span<const Eigen::VectorXd> s, bool* degenerate = nullptr);

/// Fisher's z transform of the (partial) correlation:
///   z = atanh(r), statistic = sqrt(n - |s| - 3) * |z|, two-sided normal p.
/// Requires n > |s| + 3.
CiResult fisher_z_test(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                       std::span<const Eigen::VectorXd> s, Eigen::Index n);

/// G^2 likelihood-ratio test for discrete data, stratified on the
/// configurations of s. dof sums (levels_x - 1) * (levels_y - 1) over
/// nonempty strata; dof = 0 falls back to p = 1, flagged degenerate.
CiResult g2_test(const std::vector<int>& x, const std::vector<int>& y,
                 std::span<const std::vector<int>> s);

}  // namespace osfsu
