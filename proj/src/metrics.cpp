#include "tsrg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

#include "tsrg/errors.hpp"

namespace tsrg {

std::int64_t EvalReport::total() const {
  std::int64_t sum = 0;
  for (const auto& row : confusion) sum = std::accumulate(row.begin(), row.end(), sum);
  return sum;
}

std::vector<double> EvalReport::recalls() const {
  std::vector<double> out;
  out.reserve(confusion.size());
  for (std::size_t c = 0; c < confusion.size(); ++c) {
    const auto row_sum = std::accumulate(confusion[c].begin(), confusion[c].end(),
                                         std::int64_t{0});
    out.push_back(row_sum > 0 ? static_cast<double>(confusion[c][c]) /
                                    static_cast<double>(row_sum)
                              : std::numeric_limits<double>::quiet_NaN());
  }
  return out;
}

namespace {

std::vector<std::string> default_names(std::size_t k) {
  std::vector<std::string> names;
  for (std::size_t c = 0; c < k; ++c) names.push_back(std::to_string(c));
  return names;
}

void summarize(EvalReport& report) {
  const std::size_t k = report.confusion.size();
  std::int64_t total = 0;
  std::int64_t correct = 0;
  double recall_sum = 0.0;
  int present = 0;
  report.absent_classes.clear();
  for (std::size_t c = 0; c < k; ++c) {
    const auto row_sum = std::accumulate(report.confusion[c].begin(),
                                         report.confusion[c].end(), std::int64_t{0});
    total += row_sum;
    correct += report.confusion[c][c];
    if (row_sum == 0) {
      report.absent_classes.push_back(static_cast<int>(c));
      continue;
    }
    recall_sum += static_cast<double>(report.confusion[c][c]) / static_cast<double>(row_sum);
    ++present;
  }
  report.war = total > 0 ? static_cast<double>(correct) / static_cast<double>(total) : 0.0;
  report.uar = present > 0 ? recall_sum / present : 0.0;
}

}  // namespace

EvalReport from_confusion(std::vector<std::vector<std::int64_t>> confusion,
                          std::vector<std::string> class_names) {
  const std::size_t k = confusion.size();
  for (const auto& row : confusion) {
    if (row.size() != k) throw DimensionError("confusion matrix must be square");
    for (auto v : row) {
      if (v < 0) throw DimensionError("confusion counts must be non-negative");
    }
  }
  if (class_names.empty()) class_names = default_names(k);
  if (class_names.size() != k) {
    throw DimensionError("class_names size does not match the confusion matrix");
  }
  EvalReport report;
  report.confusion = std::move(confusion);
  report.class_names = std::move(class_names);
  summarize(report);
  return report;
}

EvalReport evaluate(const std::vector<int>& true_labels,
                    const std::vector<int>& predicted, int k,
                    std::vector<std::string> class_names) {
  if (true_labels.size() != predicted.size()) {
    throw DimensionError("evaluate: " + std::to_string(true_labels.size()) +
                         " true labels vs " + std::to_string(predicted.size()) +
                         " predictions");
  }
  if (k < 1) throw DimensionError("evaluate: k must be positive");
  std::vector<std::vector<std::int64_t>> confusion(
      static_cast<std::size_t>(k), std::vector<std::int64_t>(static_cast<std::size_t>(k), 0));
  for (std::size_t i = 0; i < true_labels.size(); ++i) {
    const int t = true_labels[i];
    const int p = predicted[i];
    if (t < 0 || t >= k || p < 0 || p >= k) {
      throw DimensionError("evaluate: label outside 0.." + std::to_string(k - 1));
    }
    ++confusion[t][p];
  }
  return from_confusion(std::move(confusion), std::move(class_names));
}

std::string render_confusion(const EvalReport& report) {
  std::size_t width = 9;
  for (const auto& name : report.class_names) width = std::max(width, name.size() + 2);
  std::ostringstream out;
  auto pad = [&](const std::string& s) {
    out << s << std::string(width > s.size() ? width - s.size() : 1, ' ');
  };
  pad("true\\pred");
  for (const auto& name : report.class_names) pad(name);
  out << '\n';
  char cell[32];
  for (std::size_t c = 0; c < report.confusion.size(); ++c) {
    pad(report.class_names[c]);
    const auto row_sum = std::accumulate(report.confusion[c].begin(),
                                         report.confusion[c].end(), std::int64_t{0});
    for (auto v : report.confusion[c]) {
      if (row_sum == 0) {
        pad("-");
      } else {
        std::snprintf(cell, sizeof(cell), "%.2f%%",
                      100.0 * static_cast<double>(v) / static_cast<double>(row_sum));
        pad(cell);
      }
    }
    out << '\n';
  }
  std::snprintf(cell, sizeof(cell), "%.4f", report.war);
  out << "WAR " << cell;
  std::snprintf(cell, sizeof(cell), "%.4f", report.uar);
  out << "  UAR " << cell << '\n';
  return out.str();
}

nlohmann::json to_json(const EvalReport& report) {
  return {{"war", report.war},
          {"uar", report.uar},
          {"class_names", report.class_names},
          {"confusion", report.confusion},
          {"absent_classes", report.absent_classes}};
}

EvalReport eval_report_from_json(const nlohmann::json& j) {
  return from_confusion(j.at("confusion").get<std::vector<std::vector<std::int64_t>>>(),
                        j.at("class_names").get<std::vector<std::string>>());
}

}  // namespace tsrg
