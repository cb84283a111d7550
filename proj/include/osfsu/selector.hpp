#pragma once

#include "osfsu/dataset.hpp"
#include "osfsu/fuzzy.hpp"
#include "osfsu/lfa.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace osfsu {

enum class RelevanceVerdict { relevant, fuzzy_relevant, irrelevant };

enum class AdmissionRoute { relevance, fuzzy_merge };

struct SelectedFeature {
    Eigen::Index column_index = 0;
    Eigen::VectorXd values; // imputed, dense
    int admitted_at_block = 0;
    AdmissionRoute via = AdmissionRoute::relevance;
    double p = 0.0;              // relevance p-value at admission time
    std::optional<double> gamma; // set for fuzzy-merged features
};

struct FuzzyCandidate {
    Eigen::Index column_index = 0;
    Eigen::VectorXd values;
    double p = 0.0;     // in (mu, band.max] at classification time
    double gamma = 0.0; // neighborhood dependency degree
};

struct SelectorConfig {
    Eigen::Index block_width = 15;
    LfaConfig lfa;
    AlphaBand band;
    TrapezoidParams trapezoid;
    int max_conditioning = 3; // cap on |S| in redundancy searches
    double nrs_radius = 0.15;
    std::uint64_t seed = 0;
    bool discrete = false; // use the G^2 test instead of Fisher's z

    void validate() const;
};

/// One line of the decision log; every stream column produces at least one.
struct TraceRecord {
    std::string event; // verdict | pruned | merged
    Eigen::Index column = 0;
    int block = 0;
    double p = 0.0;
    double mu = 0.0;
    std::string verdict;                              // for verdict events
    std::optional<double> gamma;                      // fuzzy candidates only
    std::optional<std::vector<Eigen::Index>> witness; // conditioning set that discarded/pruned
    std::string action;                               // added | discarded | deferred | removed | merged

    bool operator==(const TraceRecord&) const = default;
};

struct SelectionState {
    std::vector<SelectedFeature> selected;  // SF, admission order
    std::vector<FuzzyCandidate> fuzzy;      // FSF, cleared at each block merge
    int blocks_processed = 0;
    std::vector<TraceRecord> trace;
    bool tracing = false;
};

struct RedundancyDecision {
    bool keep = true;
    std::vector<Eigen::Index> witness; // column indices of the discarding set
};

struct SelectionResult {
    std::vector<SelectedFeature> selected;
    int blocks_processed = 0;
    std::vector<TraceRecord> trace;
};

/// p <= mu: relevant; mu < p <= upper: fuzzy relevant; p > upper: irrelevant.
RelevanceVerdict classify_relevance(double p, double mu, double upper = 0.1);

/// Fisher's z p-value of the column against the labels, empty conditioning set.
double relevance_p(const Eigen::VectorXd& column, const Eigen::VectorXd& labels);

/// Searches conditioning sets S drawn from the selected features, sizes
/// 1..min(k_max, |SF|), by size then lexicographic admission order; the first
/// S rendering (candidate, labels) independent (p > 0.1) discards the
/// candidate with that witness.
RedundancyDecision redundancy_check_new(const Eigen::VectorXd& candidate,
                                        const std::vector<SelectedFeature>& selected,
                                        const Eigen::VectorXd& labels, int k_max,
                                        bool discrete = false);

/// Re-examines selected features after an admission; a member with any
/// independence witness inside the remaining set is removed immediately.
/// `just_added`, when set, names a column exempt from removal this pass.
void redundancy_prune_existing(std::vector<SelectedFeature>& selected,
                               const Eigen::VectorXd& labels, int k_max,
                               std::optional<Eigen::Index> just_added = std::nullopt,
                               bool discrete = false, SelectionState* trace_sink = nullptr);

/// Dependency degree of a single-feature neighborhood space at radius h.
double score_fuzzy(const Eigen::VectorXd& candidate, std::span<const int> labels, double radius);

/// Moves the top max(1, floor(|SF|/2)) fuzzy candidates (by gamma, then
/// smaller p, then smaller column index) into SF and clears FSF.
void merge_fuzzy(SelectionState& state);

/// Full per-block pass: fuzzy threshold from the block's missing rate, LFA
/// completion, per-column relevance/redundancy/fuzzy routing, then the merge.
void process_block(const FeatureBlock& block, SelectionState& state, const SelectorConfig& cfg,
                   std::span<const int> labels);

/// Buffers the stream into blocks of cfg.block_width (final partial block
/// included) and processes them in arrival order.
SelectionResult run(std::span<const StreamColumn> stream, std::span<const int> labels,
                    const SelectorConfig& cfg, bool tracing = false);

}  // namespace osfsu
