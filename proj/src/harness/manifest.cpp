#include "tsrg/harness/manifest.hpp"

#include <fstream>
#include <sstream>

#include "tsrg/clip_io.hpp"
#include "tsrg/errors.hpp"
#include "tsrg/harness/text.hpp"

namespace tsrg::harness {

std::map<std::string, std::size_t> DatasetManifest::class_counts() const {
  std::map<std::string, std::size_t> counts;
  for (const auto& e : entries) ++counts[e.label];
  return counts;
}

DatasetManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open manifest " + path.string());
  DatasetManifest manifest;
  manifest.name = path.stem().string();
  const auto base = path.parent_path();
  std::string line;
  bool seen_header = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '#') {
      constexpr std::string_view kName = "# name:";
      if (t.substr(0, kName.size()) == kName) manifest.name = std::string(trim(t.substr(kName.size())));
      continue;
    }
    const auto fields = split(t, ',');
    if (!seen_header) {
      seen_header = true;
      if (fields.size() >= 2 && fields[0] == "path" && fields[1] == "label") continue;
    }
    if (fields.size() < 2 || fields.size() > 3 || fields[0].empty() || fields[1].empty()) {
      throw IngestError(path.string() + ":" + std::to_string(line_no) +
                        ": expected path,label[,subject]");
    }
    std::filesystem::path entry_path = fields[0];
    if (entry_path.is_relative()) entry_path = base / entry_path;
    manifest.entries.push_back({entry_path, fields[1], fields.size() == 3 ? fields[2] : ""});
  }
  return manifest;
}

void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest) {
  std::ofstream out(path);
  if (!out) throw IngestError("cannot open " + path.string() + " for writing");
  if (!manifest.name.empty()) out << "# name: " << manifest.name << '\n';
  out << "path,label,subject\n";
  for (const auto& e : manifest.entries) {
    out << e.path.string() << ',' << e.label << ',' << e.subject << '\n';
  }
}

namespace {

Eigen::VectorXd read_precomputed(const std::filesystem::path& path) {
  if (path.extension() == ".bin") {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw IngestError("cannot open " + path.string());
    const auto bytes = static_cast<std::size_t>(in.tellg());
    if (bytes == 0 || bytes % sizeof(double) != 0) {
      throw IngestError(path.string() + ": size is not a whole number of f64 values");
    }
    Eigen::VectorXd v(static_cast<Eigen::Index>(bytes / sizeof(double)));
    in.seekg(0);
    in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(bytes));
    return v;
  }
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open " + path.string());
  std::string line;
  while (std::getline(in, line) && trim(line).empty()) {
  }
  const auto fields = split(trim(line), ',');
  if (fields.empty() || fields.front().empty()) {
    throw IngestError(path.string() + ": empty feature file");
  }
  Eigen::VectorXd v(static_cast<Eigen::Index>(fields.size()));
  for (std::size_t i = 0; i < fields.size(); ++i) v(static_cast<Eigen::Index>(i)) = parse_double(fields[i], path.string());
  return v;
}

}  // namespace

Samples ingest(const DatasetManifest& manifest, const FeatureMode& mode) {
  if (manifest.entries.empty()) {
    throw EmptyDatasetError("manifest '" + manifest.name + "' has no entries");
  }
  std::vector<Eigen::VectorXd> columns;
  std::vector<std::string> labels;
  columns.reserve(manifest.entries.size());
  for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
    const auto& e = manifest.entries[i];
    const std::string where = "manifest '" + manifest.name + "' entry " +
                              std::to_string(i + 1) + " (" + e.path.string() + ")";
    try {
      if (!std::filesystem::exists(e.path)) throw IngestError("file does not exist");
      Eigen::VectorXd v = std::holds_alternative<Precomputed>(mode)
                              ? read_precomputed(e.path)
                              : lbptop::extract(lbptop::load_clip(e.path),
                                                std::get<lbptop::LbpTopParams>(mode));
      if (!columns.empty() && v.size() != columns.front().size()) {
        throw DimensionError("dimension " + std::to_string(v.size()) + " differs from " +
                             std::to_string(columns.front().size()));
      }
      columns.push_back(std::move(v));
      labels.push_back(e.label);
    } catch (const Error& err) {
      throw IngestError(where + ": " + err.what());
    }
  }
  Eigen::MatrixXd x(columns.front().size(), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) x.col(static_cast<Eigen::Index>(j)) = columns[j];
  return {FeatureMatrix(std::move(x)), std::move(labels)};
}

void validate_counts(const std::map<std::string, std::size_t>& actual,
                     const std::map<std::string, std::size_t>& expected) {
  std::ostringstream problems;
  for (const auto& [label, count] : expected) {
    const auto it = actual.find(label);
    const std::size_t have = it == actual.end() ? 0 : it->second;
    if (have != count) {
      problems << ' ' << label << ": expected " << count << ", found " << have << ';';
    }
  }
  for (const auto& [label, count] : actual) {
    if (!expected.contains(label)) {
      problems << ' ' << label << ": unexpected class with " << count << " samples;";
    }
  }
  if (!problems.str().empty()) throw IngestError("class count mismatch:" + problems.str());
}

std::map<std::string, std::size_t> casme2_expected_counts() {
  return {{"Negative", 91}, {"Positive", 32}, {"Surprise", 25}};
}

}  // namespace tsrg::harness
