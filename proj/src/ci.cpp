#include "osfsu/ci.hpp"

#include "osfsu/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace osfsu {

namespace {

constexpr double kClamp = 1.0 - 1e-12;

bool is_constant(const Eigen::VectorXd& v) {
    const double mean = v.mean();
    const double sq = (v.array() - mean).square().sum();
    const double scale = std::max(1.0, std::abs(mean));
    // Zero variance up to double rounding; LFA output never hits this unless
    // the column really is flat.
    return std::sqrt(sq / static_cast<double>(v.size())) <= 1e-12 * scale;
}

double pearson(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    const Eigen::VectorXd cx = x.array() - x.mean();
    const Eigen::VectorXd cy = y.array() - y.mean();
    const double denom = std::sqrt(cx.squaredNorm() * cy.squaredNorm());
    if (denom == 0.0) return 0.0;
    return cx.dot(cy) / denom;
}

double clamp_correlation(double r) { return std::clamp(r, -kClamp, kClamp); }

}  // namespace

double partial_correlation(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                           std::span<const Eigen::VectorXd> s, bool* degenerate) {
    if (degenerate) *degenerate = false;
    const Eigen::Index n = x.size();
    if (y.size() != n) throw std::invalid_argument("partial_correlation: length mismatch");
    for (const auto& v : s)
        if (v.size() != n) throw std::invalid_argument("partial_correlation: length mismatch");
    if (n < static_cast<Eigen::Index>(s.size()) + 4)
        throw std::invalid_argument("partial_correlation: need n >= |S| + 4");

    if (is_constant(x) || is_constant(y)) {
        if (degenerate) *degenerate = true;
        return 0.0;
    }

    if (s.empty()) return clamp_correlation(pearson(x, y));

    const Eigen::Index k = static_cast<Eigen::Index>(s.size()) + 2;
    std::vector<const Eigen::VectorXd*> vars;
    vars.push_back(&x);
    vars.push_back(&y);
    for (const auto& v : s) vars.push_back(&v);

    Eigen::MatrixXd corr = Eigen::MatrixXd::Identity(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = i + 1; j < k; ++j) {
            // Constant conditioning variables contribute no information;
            // leave their correlations at zero rather than dividing by zero.
            const double r = (is_constant(*vars[i]) || is_constant(*vars[j]))
                                 ? 0.0
                                 : pearson(*vars[i], *vars[j]);
            corr(i, j) = r;
            corr(j, i) = r;
        }

    Eigen::FullPivLU<Eigen::MatrixXd> lu(corr);
    if (!lu.isInvertible()) {
        corr.diagonal().array() += 1e-8;
        lu.compute(corr);
        if (!lu.isInvertible())
            throw std::runtime_error("partial_correlation: correlation matrix is singular");
    }
    const Eigen::MatrixXd precision = lu.inverse();
    const double denom = precision(0, 0) * precision(1, 1);
    if (!(denom > 0.0))
        throw std::runtime_error("partial_correlation: precision matrix not positive");
    return clamp_correlation(-precision(0, 1) / std::sqrt(denom));
}

CiResult fisher_z_test(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                       std::span<const Eigen::VectorXd> s, Eigen::Index n) {
    if (n != x.size()) throw std::invalid_argument("fisher_z_test: n must match vector length");
    const auto cond = static_cast<Eigen::Index>(s.size());
    if (n <= cond + 3) throw std::invalid_argument("fisher_z_test: need n > |S| + 3");

    bool degenerate = false;
    const double r = partial_correlation(x, y, s, &degenerate);

    CiResult result;
    result.dof_or_n_eff = static_cast<double>(n - cond - 3);
    result.degenerate = degenerate;
    if (degenerate) {
        result.statistic = 0.0;
        result.p_value = 1.0;
        return result;
    }
    const double z = 0.5 * std::log((1.0 + r) / (1.0 - r));
    result.statistic = std::sqrt(result.dof_or_n_eff) * std::abs(z);
    result.p_value = stats::normal_two_sided_p(result.statistic);
    return result;
}

CiResult g2_test(const std::vector<int>& x, const std::vector<int>& y,
                 std::span<const std::vector<int>> s) {
    const std::size_t n = x.size();
    if (y.size() != n) throw std::invalid_argument("g2_test: length mismatch");
    for (const auto& v : s)
        if (v.size() != n) throw std::invalid_argument("g2_test: length mismatch");
    if (n == 0) throw std::invalid_argument("g2_test: empty input");

    auto level_map = [](const std::vector<int>& v) {
        std::map<int, int> m;
        for (int value : v) m.emplace(value, 0);
        int next = 0;
        for (auto& [value, idx] : m) idx = next++;
        return m;
    };
    const std::map<int, int> levels_x = level_map(x);
    const std::map<int, int> levels_y = level_map(y);
    const std::size_t lx = levels_x.size();
    const std::size_t ly = levels_y.size();

    // Stratum key = configuration of the conditioning variables.
    std::map<std::vector<int>, std::vector<double>> tables;
    std::vector<int> key(s.size());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t v = 0; v < s.size(); ++v) key[v] = s[v][i];
        auto [it, inserted] = tables.try_emplace(key);
        if (inserted) it->second.assign(lx * ly, 0.0);
        const auto xi = static_cast<std::size_t>(levels_x.at(x[i]));
        const auto yi = static_cast<std::size_t>(levels_y.at(y[i]));
        it->second[xi * ly + yi] += 1.0;
    }

    double g2 = 0.0;
    double dof = 0.0;
    for (const auto& [config, table] : tables) {
        std::vector<double> row_sum(lx, 0.0), col_sum(ly, 0.0);
        double total = 0.0;
        for (std::size_t i = 0; i < lx; ++i)
            for (std::size_t j = 0; j < ly; ++j) {
                row_sum[i] += table[i * ly + j];
                col_sum[j] += table[i * ly + j];
                total += table[i * ly + j];
            }
        if (total == 0.0) continue;
        for (std::size_t i = 0; i < lx; ++i)
            for (std::size_t j = 0; j < ly; ++j) {
                const double observed = table[i * ly + j];
                if (observed <= 0.0) continue;
                const double expected = row_sum[i] * col_sum[j] / total;
                g2 += 2.0 * observed * std::log(observed / expected);
            }
        dof += static_cast<double>((lx - 1) * (ly - 1));
    }
    // Exactly proportional tables leave a tiny rounding residue around zero.
    if (std::abs(g2) < 1e-12) g2 = 0.0;
    g2 = std::max(0.0, g2);

    CiResult result;
    result.statistic = g2;
    result.dof_or_n_eff = dof;
    if (dof <= 0.0) {
        result.p_value = 1.0;
        result.degenerate = true;
        return result;
    }
    result.p_value = stats::chi_square_sf(g2, dof);
    return result;
}

}  // namespace osfsu
