#pragma once

#include "osfsu/eval.hpp"
#include "osfsu/selector.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <string_view>

namespace osfsu {

nlohmann::json selector_config_to_json(const SelectorConfig& cfg);
nlohmann::json selection_to_json(const SelectionResult& result, const SelectorConfig& cfg);
nlohmann::json trace_record_to_json(const TraceRecord& rec);
std::string trace_to_jsonl(const SelectionResult& result);
nlohmann::json eval_report_to_json(const EvalReport& report);
nlohmann::json wilcoxon_to_json(const WilcoxonResult& result);
nlohmann::json ground_truth_to_json(const GroundTruth& truth);

/// Writes via a sibling temp file and rename, so readers never see a
/// truncated artifact.
void atomic_write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace osfsu
