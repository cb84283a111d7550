#pragma once

#include "osfsu/dataset.hpp"
#include "osfsu/selector.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

namespace osfsu {

struct EvalReport {
    std::vector<double> fold_accuracies;
    double mean = 0.0;
    double stddev = 0.0;
    std::vector<int> selected_counts; // per-fold |SF|
    std::vector<int> fallback_folds;  // folds scored by majority class (empty SF)
    double theta = 0.0;
    int folds = 0;
    int knn_k = 0;
    std::uint64_t seed = 0;
    SelectorConfig config;
};

struct WilcoxonResult {
    double r_plus = 0.0;
    double r_minus = 0.0;
    double r_min = 0.0;
    double z = 0.0;
    int n_effective = 0;
    bool reject = false;
    bool degenerate = false; // all differences were zero
};

/// Majority class among the k Euclidean-nearest rows. Distance ties break on
/// the lower row index, vote ties on the smaller class id.
int knn_predict(const Eigen::MatrixXd& train_x, std::span<const int> train_y,
                const Eigen::VectorXd& query, int k);

/// Per fold: mask only the training split at rate theta (seed + fold), run
/// the selector on it, keep the selector's imputed training columns, take the
/// raw test columns at the selected indices, min-max scale by training stats,
/// and score with KNN. Test rows never touch selection or scaling statistics.
EvalReport cross_validate(const Dataset& d, const SelectorConfig& cfg, double theta, int k_folds,
                          int knn_k, std::uint64_t seed, int jobs = 1);

/// Paired signed-ranks comparison: zero differences are dropped, tied
/// magnitudes share average ranks, and the normal approximation
///   z = (R_min - n(n+1)/4) / sqrt(n(n+1)(2n+1)/24)
/// is tested against the two-sided critical value at alpha_level.
WilcoxonResult wilcoxon_signed_ranks(std::span<const double> a, std::span<const double> b,
                                     double alpha_level = 0.1);

}  // namespace osfsu
