#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace osfsu {

/// Instance-by-feature table. Missing cells are stored as quiet NaN;
/// labels are small non-negative class ids, one per instance.
struct Dataset {
    Eigen::MatrixXd features;               // M x T, NaN = missing
    std::vector<int> labels;                // length M
    std::vector<std::string> feature_names; // length T

    Eigen::Index instance_count() const { return features.rows(); }
    Eigen::Index feature_count() const { return features.cols(); }
    Eigen::Index missing_count() const;
    int distinct_label_count() const;

    /// Throws std::invalid_argument when shape or naming invariants are broken.
    void validate() const;
};

/// Which columns generated the synthetic labels, plus the seed that made them.
struct GroundTruth {
    std::vector<Eigen::Index> relevant_indices;
    std::uint64_t generator_seed = 0;
};

struct MaskSpec {
    double rate = 0.0; // fraction of feature cells to blank, in [0, 1)
    std::uint64_t seed = 0;
};

struct FoldPlan {
    int fold_count = 0;
    std::vector<int> assignment; // length M, values in [0, fold_count)
};

/// One column of the stream: original index plus values (NaN = missing).
struct StreamColumn {
    Eigen::Index index = 0;
    Eigen::VectorXd values;
};

Dataset load_csv(std::istream& source);
Dataset load_csv_file(const std::filesystem::path& path);

void write_csv(const Dataset& d, std::ostream& out);
std::string to_csv(const Dataset& d);

/// Standard-normal features, n_relevant columns picked uniformly, binary label
/// from the sign of their sum plus noise * eps. Deterministic for a fixed seed.
std::pair<Dataset, GroundTruth> generate_synthetic(Eigen::Index instances, Eigen::Index features,
                                                   Eigen::Index n_relevant, double noise,
                                                   std::uint64_t seed);

/// Blanks exactly round(rate * M * T) feature cells chosen uniformly without
/// replacement. Labels and all unmasked cells are untouched.
Dataset sparsify(const Dataset& d, const MaskSpec& spec);

/// Stratified assignment: fold sizes differ by at most one and every class
/// reaches every training split. Requires each class to have >= k members.
FoldPlan split_folds(const Dataset& d, int k, std::uint64_t seed);

/// Columns in index order, ready to feed the selector.
std::vector<StreamColumn> stream_columns(const Dataset& d);

}  // namespace osfsu
