#include "osfsu/eval.hpp"

#include "osfsu/stats.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <numeric>
#include <stdexcept>

namespace osfsu {

namespace {

int majority_class(std::span<const int> labels) {
    std::map<int, int> counts;
    for (int label : labels) ++counts[label];
    int best = counts.begin()->first;
    int best_count = counts.begin()->second;
    for (const auto& [cls, count] : counts)
        if (count > best_count) {
            best = cls;
            best_count = count;
        }
    return best; // std::map iteration already favors the smallest class id on ties
}

struct FoldOutcome {
    double accuracy = 0.0;
    int selected_count = 0;
    bool fallback = false;
};

struct ColumnScale {
    double lo = 0.0;
    double span = 1.0;
};

FoldOutcome evaluate_fold(const Dataset& d, const FoldPlan& plan, int fold,
                          const SelectorConfig& cfg, double theta, int knn_k,
                          std::uint64_t seed) {
    std::vector<Eigen::Index> train_rows, test_rows;
    for (Eigen::Index i = 0; i < d.instance_count(); ++i) {
        if (plan.assignment[static_cast<std::size_t>(i)] == fold)
            test_rows.push_back(i);
        else
            train_rows.push_back(i);
    }

    Dataset train;
    train.feature_names = d.feature_names;
    train.features.resize(static_cast<Eigen::Index>(train_rows.size()), d.feature_count());
    train.labels.resize(train_rows.size());
    for (std::size_t r = 0; r < train_rows.size(); ++r) {
        train.features.row(static_cast<Eigen::Index>(r)) = d.features.row(train_rows[r]);
        train.labels[r] = d.labels[static_cast<std::size_t>(train_rows[r])];
    }

    const Dataset masked = sparsify(train, MaskSpec{theta, seed + static_cast<std::uint64_t>(fold)});
    const std::vector<StreamColumn> stream = stream_columns(masked);
    const SelectionResult selection = run(stream, masked.labels, cfg);

    FoldOutcome outcome;
    outcome.selected_count = static_cast<int>(selection.selected.size());

    if (selection.selected.empty()) {
        // Nothing selected: score the majority-class rule.
        const int fallback = majority_class(train.labels);
        int correct = 0;
        for (Eigen::Index row : test_rows)
            if (d.labels[static_cast<std::size_t>(row)] == fallback) ++correct;
        outcome.accuracy = static_cast<double>(correct) / static_cast<double>(test_rows.size());
        outcome.fallback = true;
        return outcome;
    }

    const auto n_sel = static_cast<Eigen::Index>(selection.selected.size());
    Eigen::MatrixXd train_x(static_cast<Eigen::Index>(train_rows.size()), n_sel);
    std::vector<ColumnScale> scales(static_cast<std::size_t>(n_sel));
    for (Eigen::Index c = 0; c < n_sel; ++c) {
        const Eigen::VectorXd& col = selection.selected[static_cast<std::size_t>(c)].values;
        const double lo = col.minCoeff();
        const double hi = col.maxCoeff();
        scales[static_cast<std::size_t>(c)] = {lo, hi > lo ? hi - lo : 1.0};
        train_x.col(c) =
            (col.array() - lo) / scales[static_cast<std::size_t>(c)].span;
    }

    int correct = 0;
    Eigen::VectorXd query(n_sel);
    for (Eigen::Index row : test_rows) {
        for (Eigen::Index c = 0; c < n_sel; ++c) {
            const Eigen::Index src = selection.selected[static_cast<std::size_t>(c)].column_index;
            const double value = d.features(row, src);
            if (std::isnan(value))
                throw std::runtime_error("cross_validate: test split contains missing values");
            query[c] = (value - scales[static_cast<std::size_t>(c)].lo) /
                       scales[static_cast<std::size_t>(c)].span;
        }
        if (knn_predict(train_x, train.labels, query, knn_k) ==
            d.labels[static_cast<std::size_t>(row)])
            ++correct;
    }
    outcome.accuracy = static_cast<double>(correct) / static_cast<double>(test_rows.size());
    return outcome;
}

}  // namespace

int knn_predict(const Eigen::MatrixXd& train_x, std::span<const int> train_y,
                const Eigen::VectorXd& query, int k) {
    if (train_x.cols() < 1) throw std::invalid_argument("knn_predict: need at least one feature");
    if (train_x.rows() != static_cast<Eigen::Index>(train_y.size()))
        throw std::invalid_argument("knn_predict: labels length mismatch");
    if (k < 1 || k > train_x.rows())
        throw std::invalid_argument("knn_predict: k must be in [1, n]");
    if (query.size() != train_x.cols())
        throw std::invalid_argument("knn_predict: query dimension mismatch");

    std::vector<std::pair<double, Eigen::Index>> dist;
    dist.reserve(static_cast<std::size_t>(train_x.rows()));
    for (Eigen::Index i = 0; i < train_x.rows(); ++i)
        dist.emplace_back((train_x.row(i).transpose() - query).norm(), i);
    std::sort(dist.begin(), dist.end()); // pair ordering = distance, then row index

    std::map<int, int> votes;
    for (int i = 0; i < k; ++i) ++votes[train_y[static_cast<std::size_t>(dist[static_cast<std::size_t>(i)].second)]];
    int best = votes.begin()->first;
    int best_count = votes.begin()->second;
    for (const auto& [cls, count] : votes)
        if (count > best_count) {
            best = cls;
            best_count = count;
        }
    return best;
}

EvalReport cross_validate(const Dataset& d, const SelectorConfig& cfg, double theta, int k_folds,
                          int knn_k, std::uint64_t seed, int jobs) {
    if (!(theta >= 0.0 && theta <= 0.9))
        throw std::invalid_argument("cross_validate: theta must be in [0, 0.9]");
    d.validate();
    if (d.missing_count() > 0)
        throw std::invalid_argument("cross_validate: evaluation dataset must be complete");

    const FoldPlan plan = split_folds(d, k_folds, seed);

    std::vector<FoldOutcome> outcomes(static_cast<std::size_t>(k_folds));
    if (jobs <= 1) {
        for (int f = 0; f < k_folds; ++f)
            outcomes[static_cast<std::size_t>(f)] =
                evaluate_fold(d, plan, f, cfg, theta, knn_k, seed);
    } else {
        std::vector<std::future<FoldOutcome>> futures;
        futures.reserve(static_cast<std::size_t>(k_folds));
        for (int f = 0; f < k_folds; ++f)
            futures.push_back(std::async(std::launch::async, [&, f] {
                return evaluate_fold(d, plan, f, cfg, theta, knn_k, seed);
            }));
        for (int f = 0; f < k_folds; ++f)
            outcomes[static_cast<std::size_t>(f)] = futures[static_cast<std::size_t>(f)].get();
    }

    EvalReport report;
    report.theta = theta;
    report.folds = k_folds;
    report.knn_k = knn_k;
    report.seed = seed;
    report.config = cfg;
    for (int f = 0; f < k_folds; ++f) {
        const FoldOutcome& o = outcomes[static_cast<std::size_t>(f)];
        report.fold_accuracies.push_back(o.accuracy);
        report.selected_counts.push_back(o.selected_count);
        if (o.fallback) report.fallback_folds.push_back(f);
    }
    report.mean = std::accumulate(report.fold_accuracies.begin(), report.fold_accuracies.end(), 0.0) /
                  static_cast<double>(k_folds);
    double var = 0.0;
    for (double acc : report.fold_accuracies) var += (acc - report.mean) * (acc - report.mean);
    report.stddev = std::sqrt(var / static_cast<double>(k_folds));
    return report;
}

WilcoxonResult wilcoxon_signed_ranks(std::span<const double> a, std::span<const double> b,
                                     double alpha_level) {
    if (a.size() != b.size())
        throw std::invalid_argument("wilcoxon: sequences must have equal length");
    if (a.empty()) throw std::invalid_argument("wilcoxon: need at least one pair");

    std::vector<double> diffs;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        if (d != 0.0) diffs.push_back(d);
    }

    WilcoxonResult result;
    result.n_effective = static_cast<int>(diffs.size());
    if (diffs.empty()) {
        result.degenerate = true;
        return result;
    }

    std::vector<std::size_t> order(diffs.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return std::abs(diffs[i]) < std::abs(diffs[j]);
    });

    // Average ranks across runs of tied magnitudes.
    std::vector<double> ranks(diffs.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() &&
               std::abs(diffs[order[j + 1]]) == std::abs(diffs[order[i]]))
            ++j;
        const double avg = 0.5 * static_cast<double>(i + 1 + j + 1);
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }

    for (std::size_t d = 0; d < diffs.size(); ++d) {
        if (diffs[d] > 0.0)
            result.r_plus += ranks[d];
        else
            result.r_minus += ranks[d];
    }
    result.r_min = std::min(result.r_plus, result.r_minus);

    const double n = static_cast<double>(result.n_effective);
    result.z = (result.r_min - n * (n + 1.0) / 4.0) / std::sqrt(n * (n + 1.0) * (2.0 * n + 1.0) / 24.0);

    // Two-decimal rounding reproduces the printed normal-table convention
    // (alpha 0.1 -> 1.64, alpha 0.05 -> 1.96).
    const double critical =
        std::round(stats::normal_upper_quantile(alpha_level / 2.0) * 100.0) / 100.0;
    result.reject = result.z < -critical;
    return result;
}

}  // namespace osfsu
