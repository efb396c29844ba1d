#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tsrg/harness/dataset_io.hpp"

namespace tsrg::harness {

/// old label -> new label, or nullopt to drop the sample.
struct LabelMap {
  std::map<std::string, std::optional<std::string>> rules;

  bool operator==(const LabelMap&) const = default;
};

/// "Happiness:Positive,Others:-" ('-' drops), or the preset name "casme2".
LabelMap parse_label_map(std::string_view text);
std::string format_label_map(const LabelMap& map);

/// CASME II onto the SMIC categories: Happiness -> Positive, Disgust and
/// Repression -> Negative, Surprise kept; Others, Fear and Sadness dropped.
LabelMap casme2_label_map();

struct MappedLabels {
  std::vector<std::string> labels;
  std::vector<std::size_t> kept;  // input index of each surviving label
};

/// Throws LabelMapError on a label with no rule.
MappedLabels apply_label_map(const std::vector<std::string>& labels, const LabelMap& map);
Samples apply_label_map(const Samples& samples, const LabelMap& map);

}  // namespace tsrg::harness
