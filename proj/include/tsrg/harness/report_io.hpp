#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tsrg/harness/experiment.hpp"
#include "tsrg/metrics.hpp"
#include "tsrg/solver.hpp"

namespace tsrg::harness {

/// One line of a structured report: a single method evaluated on one
/// source -> target pair. Grid cells carry lambda/mu and the best flag.
struct ExperimentRecord {
  std::string source;
  std::string target;
  std::string method;  // "svm" (no adaptation) or "tsrg"
  std::uint64_t seed = 0;
  std::optional<double> lambda;
  std::optional<double> mu;
  EvalReport report;
  double mmd_before = 0.0;
  std::optional<double> mmd_after;
  std::optional<bool> converged;
  std::optional<int> iters;
  std::optional<bool> best;

  bool operator==(const ExperimentRecord&) const = default;
};

nlohmann::json to_json(const ExperimentRecord& record);
ExperimentRecord record_from_json(const nlohmann::json& j);

std::string emit_jsonl(const std::vector<ExperimentRecord>& records);
std::vector<ExperimentRecord> parse_jsonl(const std::string& text);

void write_jsonl(const std::filesystem::path& path, const std::vector<ExperimentRecord>& records);
std::vector<ExperimentRecord> read_jsonl(const std::filesystem::path& path);

std::vector<ExperimentRecord> experiment_records(const DomainPair& domains,
                                                 const ExperimentResult& result,
                                                 const SolverConfig& solver,
                                                 std::uint64_t seed);
std::vector<ExperimentRecord> grid_records(const DomainPair& domains, const GridResult& grid,
                                           std::uint64_t seed);

/// WAR/UAR table, one row per record.
std::string render_table(const std::vector<ExperimentRecord>& records);
/// Row-normalized confusion display for every record.
std::string render_confusions(const std::vector<ExperimentRecord>& records);

std::string trace_csv(const SolverTrace& trace);

/// Writes `contents` to a sibling temp file, then renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace tsrg::harness
