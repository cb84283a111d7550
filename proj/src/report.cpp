#include "osfsu/report.hpp"

#include <fstream>
#include <stdexcept>

namespace osfsu {

using nlohmann::json;

json selector_config_to_json(const SelectorConfig& cfg) {
    return json{{"block_size", cfg.block_width},
                {"latent_dim", cfg.lfa.latent_dim},
                {"lambda", cfg.lfa.lambda},
                {"eta", cfg.lfa.eta},
                {"lmax", cfg.lfa.max_epochs},
                {"tol", cfg.lfa.tol},
                {"init_scale", cfg.lfa.init_scale},
                {"alpha_min", cfg.band.min},
                {"alpha_max", cfg.band.max},
                {"trapezoid", {cfg.trapezoid.a, cfg.trapezoid.b, cfg.trapezoid.c, cfg.trapezoid.d}},
                {"max_cond", cfg.max_conditioning},
                {"radius", cfg.nrs_radius},
                {"seed", cfg.seed},
                {"discrete", cfg.discrete}};
}

json selection_to_json(const SelectionResult& result, const SelectorConfig& cfg) {
    json selected = json::array();
    for (const auto& f : result.selected) {
        json entry{{"index", f.column_index},
                   {"via", f.via == AdmissionRoute::relevance ? "relevance" : "fuzzy"},
                   {"p", f.p},
                   {"gamma", f.gamma ? json(*f.gamma) : json(nullptr)},
                   {"block", f.admitted_at_block}};
        selected.push_back(std::move(entry));
    }
    return json{{"selected", std::move(selected)},
                {"blocks", result.blocks_processed},
                {"config", selector_config_to_json(cfg)}};
}

json trace_record_to_json(const TraceRecord& rec) {
    json j{{"event", rec.event}, {"column", rec.column}, {"block", rec.block}};
    if (rec.event == "verdict") {
        j["p"] = rec.p;
        j["mu"] = rec.mu;
        j["verdict"] = rec.verdict;
    }
    if (rec.event == "merged") {
        j["p"] = rec.p;
    }
    j["action"] = rec.action;
    if (rec.gamma) j["gamma"] = *rec.gamma;
    if (rec.witness) j["witness"] = *rec.witness;
    return j;
}

std::string trace_to_jsonl(const SelectionResult& result) {
    std::string out;
    for (const auto& rec : result.trace) {
        out += trace_record_to_json(rec).dump();
        out += '\n';
    }
    return out;
}

json eval_report_to_json(const EvalReport& report) {
    return json{{"theta", report.theta},
                {"folds", report.folds},
                {"knn_k", report.knn_k},
                {"seed", report.seed},
                {"fold_accuracies", report.fold_accuracies},
                {"mean", report.mean},
                {"std", report.stddev},
                {"selected_counts", report.selected_counts},
                {"fallback_folds", report.fallback_folds},
                {"config", selector_config_to_json(report.config)}};
}

json wilcoxon_to_json(const WilcoxonResult& result) {
    return json{{"r_plus", result.r_plus},
                {"r_minus", result.r_minus},
                {"r_min", result.r_min},
                {"z", result.z},
                {"n_effective", result.n_effective},
                {"reject", result.reject},
                {"degenerate", result.degenerate}};
}

json ground_truth_to_json(const GroundTruth& truth) {
    return json{{"relevant_indices", truth.relevant_indices},
                {"generator_seed", truth.generator_seed}};
}

void atomic_write_file(const std::filesystem::path& path, std::string_view content) {
    namespace fs = std::filesystem;
    const fs::path parent = path.has_parent_path() ? path.parent_path() : fs::path(".");
    const fs::path tmp = parent / (path.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("short write to " + tmp.string());
    }
    fs::rename(tmp, path);
}

}  // namespace osfsu
