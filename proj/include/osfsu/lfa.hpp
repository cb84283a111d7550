#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace osfsu {

/// A buffered window of streamed columns awaiting completion.
/// Missing cells are NaN; the observation mask follows from that.
struct FeatureBlock {
    Eigen::Index start_index = 0;
    Eigen::MatrixXd values; // M x width, NaN = missing

    Eigen::Index rows() const { return values.rows(); }
    Eigen::Index width() const { return values.cols(); }
    bool observed(Eigen::Index m, Eigen::Index j) const { return !std::isnan(values(m, j)); }
    Eigen::Index observed_count() const;
    /// Fraction of cells missing, in [0, 1].
    double missing_rate() const;
};

struct LatentFactorPair {
    Eigen::MatrixXd p; // M x d
    Eigen::MatrixXd q; // width x d
};

struct LfaConfig {
    int latent_dim = 5;
    double lambda = 0.01;
    double eta = 1e-5;
    int max_epochs = 1000;
    double tol = 1e-5;          // relative loss-change stop rule
    std::uint64_t init_seed = 0;
    double init_scale = 0.1;    // factors start uniform in (0, init_scale]

    void validate() const;
};

struct CompletedBlock {
    Eigen::Index start_index = 0;
    Eigen::MatrixXd values;                            // dense M x width
    Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> source_mask; // 1 = was observed
};

/// Squared-error-plus-ridge objective for a single observed entry:
///   0.5 * (f - p.q)^2 + (lambda / 2) * (|p|^2 + |q|^2)
double entry_loss(double f, const Eigen::VectorXd& p_row, const Eigen::VectorXd& q_row,
                  double lambda);

/// One pass over all observed entries in row-major order. Each entry updates
/// its p and q rows simultaneously from their pre-update values. Returns the
/// total entry loss evaluated after the pass.
double sgd_epoch(const FeatureBlock& block, LatentFactorPair& factors, const LfaConfig& cfg);

/// Seeded init then sgd_epoch until max_epochs or the relative loss change
/// drops below tol. Optionally records the per-epoch loss sequence.
LatentFactorPair train(const FeatureBlock& block, const LfaConfig& cfg,
                       std::vector<double>* epoch_losses = nullptr);

/// Dense reconstruction p * q^T; observed cells are replaced too.
CompletedBlock complete(const FeatureBlock& block, const LatentFactorPair& factors);

}  // namespace osfsu
