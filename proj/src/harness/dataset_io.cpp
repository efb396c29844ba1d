#include "tsrg/harness/dataset_io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "tsrg/errors.hpp"
#include "tsrg/harness/manifest.hpp"
#include "tsrg/harness/text.hpp"

namespace tsrg::harness {

static_assert(std::endian::native == std::endian::little,
              "packed feature I/O assumes a little-endian host");

void write_feature_csv(const std::filesystem::path& path, const Samples& samples) {
  std::ofstream out(path);
  if (!out) throw IngestError("cannot open " + path.string() + " for writing");
  const Eigen::MatrixXd& x = samples.features.data();
  for (Eigen::Index i = 0; i < x.rows(); ++i) out << 'f' << i << ',';
  out << "label\n";
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) out << format_double(x(i, j)) << ',';
    out << samples.labels[static_cast<std::size_t>(j)] << '\n';
  }
  if (!out) throw IngestError("failed writing " + path.string());
}

Samples read_feature_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open feature file " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw EmptyDatasetError(path.string() + ": empty file");
  const auto header = split(trim(line), ',');
  if (header.size() < 2) {
    throw IngestError(path.string() + ": header needs at least one feature and a label");
  }
  const std::size_t d = header.size() - 1;
  std::vector<double> values;
  std::vector<std::string> labels;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto trimmed = trim(line);
    if (trimmed.empty()) continue;
    const auto fields = split(trimmed, ',');
    if (fields.size() != d + 1) {
      throw IngestError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                        std::to_string(d + 1) + " fields, got " +
                        std::to_string(fields.size()));
    }
    for (std::size_t i = 0; i < d; ++i) {
      values.push_back(parse_double(fields[i], path.string() + ":" + std::to_string(line_no)));
    }
    labels.emplace_back(trim(fields[d]));
  }
  if (labels.empty()) throw EmptyDatasetError(path.string() + ": no samples");
  Eigen::MatrixXd x = Eigen::Map<Eigen::MatrixXd>(values.data(), static_cast<Eigen::Index>(d),
                                                  static_cast<Eigen::Index>(labels.size()));
  return {FeatureMatrix(std::move(x)), std::move(labels)};
}

void write_feature_bin(const std::filesystem::path& path, const Samples& samples) {
  const Eigen::MatrixXd& x = samples.features.data();
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IngestError("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(x.data()),
              static_cast<std::streamsize>(x.size() * sizeof(double)));
    if (!out) throw IngestError("failed writing " + path.string());
  }
  nlohmann::json sidecar = {{"format", "tsrg-features"},
                            {"n", x.cols()},
                            {"d", x.rows()},
                            {"dtype", "f64le"},
                            {"labels", samples.labels}};
  std::ofstream meta(path.string() + ".json");
  meta << sidecar.dump() << '\n';
}

Samples read_feature_bin(const std::filesystem::path& path) {
  const std::filesystem::path sidecar_path = path.string() + ".json";
  std::ifstream meta(sidecar_path);
  if (!meta) throw IngestError("missing sidecar " + sidecar_path.string());
  nlohmann::json sidecar;
  try {
    sidecar = nlohmann::json::parse(meta);
  } catch (const nlohmann::json::exception& e) {
    throw IngestError(sidecar_path.string() + ": " + e.what());
  }
  const auto n = sidecar.value("n", std::int64_t{0});
  const auto d = sidecar.value("d", std::int64_t{0});
  if (sidecar.value("dtype", std::string{}) != "f64le") {
    throw IngestError(sidecar_path.string() + ": unsupported dtype");
  }
  if (n == 0) throw EmptyDatasetError(path.string() + ": no samples");
  if (n < 0 || d < 1) throw IngestError(sidecar_path.string() + ": bad shape");
  auto labels = sidecar.at("labels").get<std::vector<std::string>>();
  if (static_cast<std::int64_t>(labels.size()) != n) {
    throw IngestError(sidecar_path.string() + ": label count differs from n");
  }
  Eigen::MatrixXd x(d, n);
  std::ifstream in(path, std::ios::binary);
  if (!in.read(reinterpret_cast<char*>(x.data()),
               static_cast<std::streamsize>(x.size() * sizeof(double)))) {
    throw IngestError(path.string() + ": truncated feature data");
  }
  return {FeatureMatrix(std::move(x)), std::move(labels)};
}

Samples load_samples(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IngestError("dataset not found: " + path.string());
  const auto ext = path.extension().string();
  if (ext == ".csv") return read_feature_csv(path);
  if (ext == ".bin") return read_feature_bin(path);
  if (ext == ".manifest") return ingest(read_manifest(path), Precomputed{});
  throw IngestError(path.string() + ": unknown dataset extension (want .csv, .bin, .manifest)");
}

void save_samples(const std::filesystem::path& path, const Samples& samples) {
  if (path.extension() == ".bin") {
    write_feature_bin(path, samples);
  } else {
    write_feature_csv(path, samples);
  }
}

std::vector<std::string> sorted_classes(const std::vector<std::string>& labels) {
  const std::set<std::string> unique(labels.begin(), labels.end());
  return {unique.begin(), unique.end()};
}

LabeledDataset encode(const Samples& samples, const std::vector<std::string>& class_names) {
  LabeledDataset out{samples.features, {}, class_names};
  out.labels.reserve(samples.labels.size());
  for (const auto& label : samples.labels) {
    const auto it = std::find(class_names.begin(), class_names.end(), label);
    if (it == class_names.end()) throw IngestError("unknown label '" + label + "'");
    out.labels.push_back(static_cast<int>(it - class_names.begin()));
  }
  out.validate(/*require_all_classes=*/false);
  return out;
}

}  // namespace tsrg::harness
