#include "osfsu/lfa.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace osfsu {

Eigen::Index FeatureBlock::observed_count() const {
    return (values.array() == values.array()).count();
}

double FeatureBlock::missing_rate() const {
    const Eigen::Index total = rows() * width();
    if (total == 0) return 0.0;
    return 1.0 - static_cast<double>(observed_count()) / static_cast<double>(total);
}

void LfaConfig::validate() const {
    if (latent_dim < 1) throw std::invalid_argument("lfa: latent_dim must be >= 1");
    if (lambda < 0.0) throw std::invalid_argument("lfa: lambda must be >= 0");
    if (!(eta > 0.0)) throw std::invalid_argument("lfa: eta must be > 0");
    if (max_epochs < 1) throw std::invalid_argument("lfa: max_epochs must be >= 1");
    if (!(tol > 0.0)) throw std::invalid_argument("lfa: tol must be > 0");
    if (!(init_scale > 0.0)) throw std::invalid_argument("lfa: init_scale must be > 0");
    if (!std::isfinite(lambda) || !std::isfinite(eta) || !std::isfinite(tol) ||
        !std::isfinite(init_scale))
        throw std::invalid_argument("lfa: config fields must be finite");
}

double entry_loss(double f, const Eigen::VectorXd& p_row, const Eigen::VectorXd& q_row,
                  double lambda) {
    if (p_row.size() != q_row.size())
        throw std::invalid_argument("entry_loss: factor rows must have equal length");
    const double err = f - p_row.dot(q_row);
    const double value =
        0.5 * err * err + 0.5 * lambda * (p_row.squaredNorm() + q_row.squaredNorm());
    if (!std::isfinite(value)) throw std::runtime_error("entry_loss: non-finite value");
    return value;
}

double sgd_epoch(const FeatureBlock& block, LatentFactorPair& factors, const LfaConfig& cfg) {
    if (factors.p.rows() != block.rows() || factors.q.rows() != block.width() ||
        factors.p.cols() != factors.q.cols())
        throw std::invalid_argument("sgd_epoch: factor dimensions do not match block");

    const double eta = cfg.eta;
    const double lambda = cfg.lambda;
    Eigen::VectorXd p_old(factors.p.cols());
    for (Eigen::Index m = 0; m < block.rows(); ++m) {
        for (Eigen::Index j = 0; j < block.width(); ++j) {
            if (!block.observed(m, j)) continue;
            const double err = block.values(m, j) - factors.p.row(m).dot(factors.q.row(j));
            p_old = factors.p.row(m);
            factors.p.row(m) += eta * (err * factors.q.row(j) - lambda * factors.p.row(m));
            factors.q.row(j) += eta * (err * p_old.transpose() - lambda * factors.q.row(j));
        }
    }

    double loss = 0.0;
    for (Eigen::Index m = 0; m < block.rows(); ++m)
        for (Eigen::Index j = 0; j < block.width(); ++j)
            if (block.observed(m, j)) {
                const double err = block.values(m, j) - factors.p.row(m).dot(factors.q.row(j));
                loss += 0.5 * err * err +
                        0.5 * lambda *
                            (factors.p.row(m).squaredNorm() + factors.q.row(j).squaredNorm());
            }
    if (!std::isfinite(loss))
        throw std::runtime_error("lfa: training diverged (non-finite loss) at eta = " +
                                 std::to_string(eta));
    return loss;
}

LatentFactorPair train(const FeatureBlock& block, const LfaConfig& cfg,
                       std::vector<double>* epoch_losses) {
    cfg.validate();
    if (block.observed_count() == 0)
        throw std::invalid_argument("lfa: block has no observed entries");

    LatentFactorPair factors;
    factors.p.resize(block.rows(), cfg.latent_dim);
    factors.q.resize(block.width(), cfg.latent_dim);
    std::mt19937_64 rng(cfg.init_seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    // (0, init_scale]: flip the half-open unit draw so zero is excluded.
    auto draw = [&] { return cfg.init_scale * (1.0 - unit(rng)); };
    for (Eigen::Index m = 0; m < factors.p.rows(); ++m)
        for (Eigen::Index v = 0; v < factors.p.cols(); ++v) factors.p(m, v) = draw();
    for (Eigen::Index j = 0; j < factors.q.rows(); ++j)
        for (Eigen::Index v = 0; v < factors.q.cols(); ++v) factors.q(j, v) = draw();

    constexpr double kGuard = 1e-12;
    double prev_loss = 0.0;
    for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        const double loss = sgd_epoch(block, factors, cfg);
        if (epoch_losses) epoch_losses->push_back(loss);
        if (epoch > 0) {
            const double rel_change = std::abs(prev_loss - loss) / std::max(prev_loss, kGuard);
            if (rel_change < cfg.tol) break;
        }
        prev_loss = loss;
    }
    return factors;
}

CompletedBlock complete(const FeatureBlock& block, const LatentFactorPair& factors) {
    if (factors.p.rows() != block.rows() || factors.q.rows() != block.width())
        throw std::invalid_argument("complete: factor dimensions do not match block");

    CompletedBlock out;
    out.start_index = block.start_index;
    out.values = factors.p * factors.q.transpose();
    out.source_mask.resize(block.rows(), block.width());
    for (Eigen::Index m = 0; m < block.rows(); ++m)
        for (Eigen::Index j = 0; j < block.width(); ++j)
            out.source_mask(m, j) = block.observed(m, j) ? 1 : 0;
    if (!out.values.allFinite()) throw std::runtime_error("complete: non-finite reconstruction");
    return out;
}

}  // namespace osfsu
