#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace tsrg {

/// Confusion counts (rows = true class, columns = predicted) with the two
/// recall summaries: WAR is plain accuracy, UAR the unweighted mean of the
/// per-class recalls over classes that occur in the ground truth.
struct EvalReport {
  std::vector<std::vector<std::int64_t>> confusion;
  double war = 0.0;
  double uar = 0.0;
  std::vector<std::string> class_names;
  std::vector<int> absent_classes;  // classes with no true samples (excluded from UAR)

  std::int64_t total() const;
  /// Recall per class; NaN for absent classes.
  std::vector<double> recalls() const;

  bool operator==(const EvalReport&) const = default;
};

EvalReport evaluate(const std::vector<int>& true_labels,
                    const std::vector<int>& predicted, int k,
                    std::vector<std::string> class_names = {});

/// Report built directly from a confusion matrix.
EvalReport from_confusion(std::vector<std::vector<std::int64_t>> confusion,
                          std::vector<std::string> class_names = {});

/// Plain-text confusion table with rows normalized to percentages.
std::string render_confusion(const EvalReport& report);

nlohmann::json to_json(const EvalReport& report);
EvalReport eval_report_from_json(const nlohmann::json& j);

}  // namespace tsrg
