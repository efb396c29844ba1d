#include "tsrg/harness/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "tsrg/errors.hpp"
#include "tsrg/harness/text.hpp"

namespace tsrg::harness {

namespace {

template <typename T>
void put_optional(nlohmann::json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

template <typename T>
std::optional<T> get_optional(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace

nlohmann::json to_json(const ExperimentRecord& r) {
  nlohmann::json j = {{"source", r.source},
                      {"target", r.target},
                      {"method", r.method},
                      {"seed", r.seed},
                      {"war", r.report.war},
                      {"uar", r.report.uar},
                      {"mmd_before", r.mmd_before},
                      {"report", tsrg::to_json(r.report)}};
  put_optional(j, "lambda", r.lambda);
  put_optional(j, "mu", r.mu);
  put_optional(j, "mmd_after", r.mmd_after);
  put_optional(j, "converged", r.converged);
  put_optional(j, "iters", r.iters);
  put_optional(j, "best", r.best);
  return j;
}

ExperimentRecord record_from_json(const nlohmann::json& j) {
  try {
    ExperimentRecord r;
    r.source = j.at("source").get<std::string>();
    r.target = j.at("target").get<std::string>();
    r.method = j.at("method").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.report = eval_report_from_json(j.at("report"));
    r.mmd_before = j.at("mmd_before").get<double>();
    r.lambda = get_optional<double>(j, "lambda");
    r.mu = get_optional<double>(j, "mu");
    r.mmd_after = get_optional<double>(j, "mmd_after");
    r.converged = get_optional<bool>(j, "converged");
    r.iters = get_optional<int>(j, "iters");
    r.best = get_optional<bool>(j, "best");
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed report record: ") + e.what());
  }
}

std::string emit_jsonl(const std::vector<ExperimentRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += to_json(r).dump();
    out += '\n';
  }
  return out;
}

std::vector<ExperimentRecord> parse_jsonl(const std::string& text) {
  std::vector<ExperimentRecord> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    try {
      out.push_back(record_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(std::string("malformed JSON line: ") + e.what());
    }
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw FormatError("cannot open " + tmp.string() + " for writing");
    out << contents;
    if (!out) throw FormatError("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_jsonl(const std::filesystem::path& path, const std::vector<ExperimentRecord>& records) {
  write_file_atomic(path, emit_jsonl(records));
}

std::vector<ExperimentRecord> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open report " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_jsonl(buf.str());
}

std::vector<ExperimentRecord> experiment_records(const DomainPair& domains,
                                                 const ExperimentResult& result,
                                                 const SolverConfig& solver,
                                                 std::uint64_t seed) {
  ExperimentRecord base;
  base.source = domains.source_name;
  base.target = domains.target_name;
  base.method = "svm";
  base.seed = seed;
  base.report = result.baseline;
  base.mmd_before = result.mmd_before;

  ExperimentRecord tsrg = base;
  tsrg.method = "tsrg";
  tsrg.lambda = solver.lambda;
  tsrg.mu = solver.mu;
  tsrg.report = result.tsrg;
  tsrg.mmd_after = result.mmd_after;
  tsrg.converged = result.trace.converged;
  tsrg.iters = result.trace.iters_run;
  return {base, tsrg};
}

std::vector<ExperimentRecord> grid_records(const DomainPair& domains, const GridResult& grid,
                                           std::uint64_t seed) {
  std::vector<ExperimentRecord> out;
  ExperimentRecord base;
  base.source = domains.source_name;
  base.target = domains.target_name;
  base.method = "svm";
  base.seed = seed;
  base.report = grid.baseline;
  base.mmd_before = grid.mmd_before;
  out.push_back(base);
  for (const auto& row : grid.rows) {
    ExperimentRecord r = base;
    r.method = "tsrg";
    r.lambda = row.lambda;
    r.mu = row.mu;
    r.report = row.report;
    r.mmd_after = row.mmd_after;
    r.converged = row.converged;
    r.iters = row.iters;
    r.best = row.best;
    out.push_back(std::move(r));
  }
  return out;
}

std::string render_table(const std::vector<ExperimentRecord>& records) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-28s %-6s %10s %10s %8s %8s %10s %10s\n",
                "source -> target", "method", "lambda", "mu", "WAR", "UAR", "MMD", "MMD(G)");
  out << line;
  for (const auto& r : records) {
    const std::string pair = r.source + " -> " + r.target;
    const std::string method = r.method + (r.best.value_or(false) ? "*" : "");
    const std::string lambda = r.lambda ? format_double(*r.lambda) : "-";
    const std::string mu = r.mu ? format_double(*r.mu) : "-";
    char after[32] = "-";
    if (r.mmd_after) std::snprintf(after, sizeof(after), "%.4g", *r.mmd_after);
    std::snprintf(line, sizeof(line), "%-28s %-6s %10s %10s %8.4f %8.4f %10.4g %10s\n",
                  pair.c_str(), method.c_str(), lambda.c_str(), mu.c_str(), r.report.war,
                  r.report.uar, r.mmd_before, after);
    out << line;
  }
  return out.str();
}

std::string render_confusions(const std::vector<ExperimentRecord>& records) {
  std::ostringstream out;
  for (const auto& r : records) {
    out << r.source << " -> " << r.target << " [" << r.method;
    if (r.lambda) out << " lambda=" << format_double(*r.lambda);
    if (r.mu) out << " mu=" << format_double(*r.mu);
    out << "]\n" << render_confusion(r.report) << '\n';
  }
  return out.str();
}

std::string trace_csv(const SolverTrace& trace) {
  std::ostringstream out;
  out << "iter,objective,reconstruction,fg,l1,primal_residual,step,kappa\n";
  for (const auto& r : trace.records) {
    out << r.iter << ',' << format_double(r.objective) << ','
        << format_double(r.reconstruction) << ',' << format_double(r.fg) << ','
        << format_double(r.l1) << ',' << format_double(r.primal_residual) << ','
        << format_double(r.step) << ',' << format_double(r.kappa) << '\n';
  }
  return out.str();
}

}  // namespace tsrg::harness
