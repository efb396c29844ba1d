#include "tsrg/harness/label_map.hpp"

#include "tsrg/errors.hpp"
#include "tsrg/harness/text.hpp"

namespace tsrg::harness {

LabelMap casme2_label_map() {
  LabelMap map;
  map.rules = {{"Happiness", "Positive"},
               {"Disgust", "Negative"},
               {"Repression", "Negative"},
               {"Surprise", "Surprise"},
               {"Others", std::nullopt},
               {"Fear", std::nullopt},
               {"Sadness", std::nullopt}};
  return map;
}

LabelMap parse_label_map(std::string_view text) {
  text = trim(text);
  if (text == "casme2") return casme2_label_map();
  LabelMap map;
  for (const auto& rule : split(text, ',')) {
    if (rule.empty()) continue;
    const auto colon = rule.find(':');
    if (colon == std::string::npos) {
      throw LabelMapError("label rule '" + rule + "' must look like old:new or old:-");
    }
    const std::string from(trim(std::string_view(rule).substr(0, colon)));
    const std::string to(trim(std::string_view(rule).substr(colon + 1)));
    if (from.empty() || to.empty()) throw LabelMapError("empty side in label rule '" + rule + "'");
    const auto target = to == "-" ? std::nullopt : std::optional<std::string>(to);
    const auto [it, inserted] = map.rules.emplace(from, target);
    if (!inserted && it->second != target) {
      throw LabelMapError("conflicting rules for label '" + from + "'");
    }
  }
  if (map.rules.empty()) throw LabelMapError("label map is empty");
  return map;
}

std::string format_label_map(const LabelMap& map) {
  std::string out;
  for (const auto& [from, to] : map.rules) {
    if (!out.empty()) out += ',';
    out += from + ':' + to.value_or("-");
  }
  return out;
}

MappedLabels apply_label_map(const std::vector<std::string>& labels, const LabelMap& map) {
  MappedLabels out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto it = map.rules.find(labels[i]);
    if (it == map.rules.end()) {
      throw LabelMapError("no label-map rule for '" + labels[i] + "' (sample " +
                          std::to_string(i + 1) + ")");
    }
    if (!it->second) continue;
    out.labels.push_back(*it->second);
    out.kept.push_back(i);
  }
  return out;
}

Samples apply_label_map(const Samples& samples, const LabelMap& map) {
  MappedLabels mapped = apply_label_map(samples.labels, map);
  if (mapped.kept.empty()) throw EmptyDatasetError("label map dropped every sample");
  std::vector<Eigen::Index> cols(mapped.kept.begin(), mapped.kept.end());
  return {samples.features.select(cols), std::move(mapped.labels)};
}

}  // namespace tsrg::harness
