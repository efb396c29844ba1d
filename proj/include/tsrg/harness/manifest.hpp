#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "tsrg/harness/dataset_io.hpp"
#include "tsrg/lbptop.hpp"

namespace tsrg::harness {

struct ManifestEntry {
  std::filesystem::path path;  // resolved against the manifest's directory
  std::string label;
  std::string subject;
};

/// Manifest text format: optional "# name: <name>" line, a header
/// "path,label,subject", then one entry per line. Blank lines and other
/// '#' lines are ignored.
struct DatasetManifest {
  std::string name;
  std::vector<ManifestEntry> entries;

  std::map<std::string, std::size_t> class_counts() const;
};

DatasetManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest);

struct Precomputed {};
using FeatureMode = std::variant<Precomputed, lbptop::LbpTopParams>;

/// Loads every entry in manifest order. Precomputed entries are single-sample
/// feature files (one comma-separated row, or raw f64 for .bin); LBP-TOP
/// entries are clips. Errors name the failing entry.
Samples ingest(const DatasetManifest& manifest, const FeatureMode& mode);

/// Throws IngestError listing every class whose count differs.
void validate_counts(const std::map<std::string, std::size_t>& actual,
                     const std::map<std::string, std::size_t>& expected);

/// Remapped CASME II class sizes (Negative, Positive, Surprise).
std::map<std::string, std::size_t> casme2_expected_counts();

}  // namespace tsrg::harness
