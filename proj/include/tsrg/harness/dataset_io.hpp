#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tsrg/classifier.hpp"
#include "tsrg/feature_matrix.hpp"

namespace tsrg::harness {

/// Samples with their original string labels, before class ids are assigned.
struct Samples {
  FeatureMatrix features;
  std::vector<std::string> labels;

  std::size_t size() const { return labels.size(); }
  bool operator==(const Samples&) const = default;
};

// Feature CSV: a header row (f0,...,f{d-1},label), then one sample per line
// with the label in the last column.
void write_feature_csv(const std::filesystem::path& path, const Samples& samples);
Samples read_feature_csv(const std::filesystem::path& path);

// Packed binary: n*d little-endian f64 values, sample-major, plus a JSON
// sidecar at <path>.json holding {"format","n","d","dtype","labels"}.
void write_feature_bin(const std::filesystem::path& path, const Samples& samples);
Samples read_feature_bin(const std::filesystem::path& path);

/// Dispatches on extension: .csv, .bin, or .manifest (precomputed features).
Samples load_samples(const std::filesystem::path& path);
void save_samples(const std::filesystem::path& path, const Samples& samples);

/// Distinct labels, sorted lexicographically.
std::vector<std::string> sorted_classes(const std::vector<std::string>& labels);

/// Assigns ids by position in `class_names`; unknown labels throw IngestError.
LabeledDataset encode(const Samples& samples, const std::vector<std::string>& class_names);

}  // namespace tsrg::harness
