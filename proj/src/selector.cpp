#include "osfsu/selector.hpp"

#include "osfsu/ci.hpp"
#include "osfsu/nrs.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace osfsu {

namespace {

constexpr double kIndependenceThreshold = 0.1;

std::vector<int> round_to_int(const Eigen::VectorXd& v) {
    std::vector<int> out(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out[static_cast<std::size_t>(i)] = static_cast<int>(std::lround(v[i]));
    return out;
}

// Fisher's z by default; G^2 on rounded values when the dataset is discrete.
double ci_p_value(const Eigen::VectorXd& x, const Eigen::VectorXd& labels,
                  std::span<const Eigen::VectorXd> s, bool discrete) {
    if (!discrete) return fisher_z_test(x, labels, s, x.size()).p_value;
    std::vector<std::vector<int>> cond;
    cond.reserve(s.size());
    for (const auto& v : s) cond.push_back(round_to_int(v));
    return g2_test(round_to_int(x), round_to_int(labels), cond).p_value;
}

// Column with no observed variation (or nothing observed at all) carries no
// evidence; its reconstruction is numeric wiggle and must not be tested.
bool raw_column_is_degenerate(const Eigen::VectorXd& raw) {
    double first = 0.0;
    bool seen = false;
    for (Eigen::Index i = 0; i < raw.size(); ++i) {
        if (std::isnan(raw[i])) continue;
        if (!seen) {
            first = raw[i];
            seen = true;
        } else if (raw[i] != first) {
            return false;
        }
    }
    return true;
}

Eigen::VectorXd labels_as_numeric(std::span<const int> labels) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(labels.size()));
    for (std::size_t i = 0; i < labels.size(); ++i) v[static_cast<Eigen::Index>(i)] = labels[i];
    return v;
}

// Sizes 1..max_size, lexicographic within a size. Visitor returns true to stop.
template <typename Visit>
void for_each_subset(std::size_t pool, int max_size, Visit visit) {
    const int cap = std::min<int>(max_size, static_cast<int>(pool));
    std::vector<std::size_t> combo;
    for (int size = 1; size <= cap; ++size) {
        combo.resize(static_cast<std::size_t>(size));
        for (int i = 0; i < size; ++i) combo[static_cast<std::size_t>(i)] = static_cast<std::size_t>(i);
        while (true) {
            if (visit(combo)) return;
            int pos = size - 1;
            while (pos >= 0 && combo[static_cast<std::size_t>(pos)] ==
                                   pool - static_cast<std::size_t>(size - pos))
                --pos;
            if (pos < 0) break;
            ++combo[static_cast<std::size_t>(pos)];
            for (int i = pos + 1; i < size; ++i)
                combo[static_cast<std::size_t>(i)] = combo[static_cast<std::size_t>(i - 1)] + 1;
        }
    }
}

}  // namespace

void SelectorConfig::validate() const {
    if (block_width < 1) throw std::invalid_argument("selector: block_width must be >= 1");
    if (max_conditioning < 1) throw std::invalid_argument("selector: max_conditioning must be >= 1");
    if (nrs_radius < 0.0) throw std::invalid_argument("selector: nrs_radius must be >= 0");
    lfa.validate();
    band.validate();
    trapezoid.validate();
}

RelevanceVerdict classify_relevance(double p, double mu, double upper) {
    if (p <= mu) return RelevanceVerdict::relevant;
    if (p <= upper) return RelevanceVerdict::fuzzy_relevant;
    return RelevanceVerdict::irrelevant;
}

double relevance_p(const Eigen::VectorXd& column, const Eigen::VectorXd& labels) {
    return fisher_z_test(column, labels, {}, column.size()).p_value;
}

RedundancyDecision redundancy_check_new(const Eigen::VectorXd& candidate,
                                        const std::vector<SelectedFeature>& selected,
                                        const Eigen::VectorXd& labels, int k_max, bool discrete) {
    RedundancyDecision decision;
    if (selected.empty()) return decision;

    for_each_subset(selected.size(), k_max, [&](const std::vector<std::size_t>& combo) {
        std::vector<Eigen::VectorXd> cond;
        cond.reserve(combo.size());
        for (std::size_t idx : combo) cond.push_back(selected[idx].values);
        if (ci_p_value(candidate, labels, cond, discrete) > kIndependenceThreshold) {
            decision.keep = false;
            decision.witness.clear();
            for (std::size_t idx : combo) decision.witness.push_back(selected[idx].column_index);
            return true;
        }
        return false;
    });
    return decision;
}

void redundancy_prune_existing(std::vector<SelectedFeature>& selected,
                               const Eigen::VectorXd& labels, int k_max,
                               std::optional<Eigen::Index> just_added, bool discrete,
                               SelectionState* trace_sink) {
    // Snapshot of candidates for removal; conditioning sets always come from
    // the current (already shrunken) selection.
    std::vector<Eigen::Index> order;
    order.reserve(selected.size());
    for (const auto& f : selected) order.push_back(f.column_index);

    for (Eigen::Index victim : order) {
        if (just_added && victim == *just_added) continue;
        auto victim_it = std::find_if(selected.begin(), selected.end(),
                                      [&](const SelectedFeature& f) { return f.column_index == victim; });
        if (victim_it == selected.end()) continue; // already removed this pass

        std::vector<const SelectedFeature*> others;
        for (const auto& f : selected)
            if (f.column_index != victim) others.push_back(&f);
        if (others.empty()) continue;

        bool removed = false;
        for_each_subset(others.size(), k_max, [&](const std::vector<std::size_t>& combo) {
            std::vector<Eigen::VectorXd> cond;
            cond.reserve(combo.size());
            for (std::size_t idx : combo) cond.push_back(others[idx]->values);
            if (ci_p_value(victim_it->values, labels, cond, discrete) > kIndependenceThreshold) {
                if (trace_sink && trace_sink->tracing) {
                    TraceRecord rec;
                    rec.event = "pruned";
                    rec.column = victim;
                    rec.block = trace_sink->blocks_processed;
                    rec.action = "removed";
                    std::vector<Eigen::Index> witness;
                    for (std::size_t idx : combo) witness.push_back(others[idx]->column_index);
                    rec.witness = std::move(witness);
                    trace_sink->trace.push_back(std::move(rec));
                }
                removed = true;
                return true;
            }
            return false;
        });
        if (removed) selected.erase(victim_it);
    }
}

double score_fuzzy(const Eigen::VectorXd& candidate, std::span<const int> labels, double radius) {
    const NeighborhoodSpace space = make_neighborhood_space(candidate, radius);
    return dependency_degree(space, labels).gamma;
}

void merge_fuzzy(SelectionState& state) {
    if (state.fuzzy.empty()) return;

    const std::size_t n_add = std::max<std::size_t>(1, state.selected.size() / 2);
    std::stable_sort(state.fuzzy.begin(), state.fuzzy.end(),
                     [](const FuzzyCandidate& a, const FuzzyCandidate& b) {
                         if (a.gamma != b.gamma) return a.gamma > b.gamma;
                         if (a.p != b.p) return a.p < b.p;
                         return a.column_index < b.column_index;
                     });
    const std::size_t take = std::min(n_add, state.fuzzy.size());
    for (std::size_t i = 0; i < take; ++i) {
        FuzzyCandidate& c = state.fuzzy[i];
        state.selected.push_back(SelectedFeature{c.column_index, std::move(c.values),
                                                 state.blocks_processed, AdmissionRoute::fuzzy_merge,
                                                 c.p, c.gamma});
        if (state.tracing) {
            TraceRecord rec;
            rec.event = "merged";
            rec.column = c.column_index;
            rec.block = state.blocks_processed;
            rec.p = c.p;
            rec.gamma = c.gamma;
            rec.action = "merged";
            state.trace.push_back(std::move(rec));
        }
    }
    state.fuzzy.clear();
}

void process_block(const FeatureBlock& block, SelectionState& state, const SelectorConfig& cfg,
                   std::span<const int> labels) {
    if (block.width() < 1) throw std::invalid_argument("process_block: empty block");

    const double uncertainty = block.missing_rate();
    const double mu = fuzzy_alpha(uncertainty, cfg.band, cfg.trapezoid);

    LfaConfig lfa_cfg = cfg.lfa;
    // Each block trains from its own reproducible seed.
    lfa_cfg.init_seed = cfg.lfa.init_seed + static_cast<std::uint64_t>(block.start_index);
    LatentFactorPair factors;
    try {
        factors = train(block, lfa_cfg);
    } catch (const std::runtime_error& e) {
        throw std::runtime_error("block starting at column " + std::to_string(block.start_index) +
                                 ": " + e.what());
    }
    const CompletedBlock completed = complete(block, factors);

    const Eigen::VectorXd numeric_labels = labels_as_numeric(labels);

    for (Eigen::Index j = 0; j < block.width(); ++j) {
        const Eigen::Index column_index = block.start_index + j;
        const Eigen::VectorXd column = completed.values.col(j);

        double p = 1.0;
        if (!raw_column_is_degenerate(block.values.col(j)))
            p = cfg.discrete ? ci_p_value(column, numeric_labels, {}, true)
                             : relevance_p(column, numeric_labels);

        const RelevanceVerdict verdict = classify_relevance(p, mu, cfg.band.max);

        TraceRecord rec;
        rec.event = "verdict";
        rec.column = column_index;
        rec.block = state.blocks_processed;
        rec.p = p;
        rec.mu = mu;

        switch (verdict) {
            case RelevanceVerdict::relevant: {
                rec.verdict = "relevant";
                const RedundancyDecision decision = redundancy_check_new(
                    column, state.selected, numeric_labels, cfg.max_conditioning, cfg.discrete);
                if (decision.keep) {
                    state.selected.push_back(SelectedFeature{column_index, column,
                                                             state.blocks_processed,
                                                             AdmissionRoute::relevance, p,
                                                             std::nullopt});
                    rec.action = "added";
                    if (state.tracing) state.trace.push_back(rec);
                    redundancy_prune_existing(state.selected, numeric_labels, cfg.max_conditioning,
                                              column_index, cfg.discrete, &state);
                } else {
                    rec.action = "discarded";
                    rec.witness = decision.witness;
                    if (state.tracing) state.trace.push_back(rec);
                }
                break;
            }
            case RelevanceVerdict::fuzzy_relevant: {
                rec.verdict = "fuzzy";
                const double gamma = score_fuzzy(column, labels, cfg.nrs_radius);
                state.fuzzy.push_back(FuzzyCandidate{column_index, column, p, gamma});
                rec.gamma = gamma;
                rec.action = "deferred";
                if (state.tracing) state.trace.push_back(rec);
                break;
            }
            case RelevanceVerdict::irrelevant: {
                rec.verdict = "irrelevant";
                rec.action = "discarded";
                if (state.tracing) state.trace.push_back(rec);
                break;
            }
        }
    }

    merge_fuzzy(state);
    ++state.blocks_processed;
}

SelectionResult run(std::span<const StreamColumn> stream, std::span<const int> labels,
                    const SelectorConfig& cfg, bool tracing) {
    cfg.validate();
    if (stream.empty()) throw std::invalid_argument("run: stream yields no columns");
    const auto m = static_cast<Eigen::Index>(labels.size());
    for (const auto& col : stream)
        if (col.values.size() != m) throw std::invalid_argument("run: column length mismatch");
    {
        std::set<int> classes(labels.begin(), labels.end());
        if (classes.size() < 2) throw std::invalid_argument("run: need at least 2 label classes");
    }

    SelectionState state;
    state.tracing = tracing;

    std::vector<Eigen::VectorXd> buffer;
    buffer.reserve(static_cast<std::size_t>(cfg.block_width));
    Eigen::Index arrived = 0;

    auto flush = [&] {
        if (buffer.empty()) return;
        FeatureBlock block;
        block.start_index = arrived - static_cast<Eigen::Index>(buffer.size());
        block.values.resize(m, static_cast<Eigen::Index>(buffer.size()));
        for (std::size_t j = 0; j < buffer.size(); ++j)
            block.values.col(static_cast<Eigen::Index>(j)) = buffer[j];
        process_block(block, state, cfg, labels);
        buffer.clear();
    };

    for (const auto& col : stream) {
        buffer.push_back(col.values);
        ++arrived;
        if (static_cast<Eigen::Index>(buffer.size()) == cfg.block_width) flush();
    }
    flush(); // final partial block

    return SelectionResult{std::move(state.selected), state.blocks_processed,
                           std::move(state.trace)};
}

}  // namespace osfsu
