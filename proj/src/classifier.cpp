#include "tsrg/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "tsrg/errors.hpp"

namespace tsrg {

std::vector<std::size_t> LabeledDataset::class_counts() const {
  std::vector<std::size_t> counts(class_names.size(), 0);
  for (int label : labels) {
    if (label >= 0 && static_cast<std::size_t>(label) < counts.size()) ++counts[label];
  }
  return counts;
}

void LabeledDataset::validate(bool require_all_classes) const {
  if (static_cast<Eigen::Index>(labels.size()) != features.n()) {
    throw DimensionError("dataset has " + std::to_string(features.n()) +
                         " samples but " + std::to_string(labels.size()) + " labels");
  }
  const int k = static_cast<int>(class_names.size());
  for (int label : labels) {
    if (label < 0 || label >= k) {
      throw DimensionError("label id " + std::to_string(label) + " outside 0.." +
                           std::to_string(k - 1));
    }
  }
  if (require_all_classes) {
    const auto counts = class_counts();
    for (std::size_t c = 0; c < counts.size(); ++c) {
      if (counts[c] == 0) {
        throw EmptyClassError("class '" + class_names[c] + "' has no samples");
      }
    }
  }
}

bool LinearClassifier::operator==(const LinearClassifier& other) const {
  return weights.rows() == other.weights.rows() &&
         weights.cols() == other.weights.cols() && weights == other.weights &&
         biases.size() == other.biases.size() && biases == other.biases &&
         penalty_c == other.penalty_c && class_names == other.class_names;
}

namespace {

struct BinarySvm {
  Eigen::VectorXd w;  // d weights followed by the bias weight
};

// Dual coordinate descent for
//   min_w 1/2 |w|^2 + C sum_i max(0, 1 - y_i w.x_i)
// over augmented samples x_i = [features; 1].
BinarySvm solve_binary(const Eigen::MatrixXd& x, const std::vector<double>& y,
                       double c, const TrainOptions& options) {
  const Eigen::Index d = x.rows();
  const Eigen::Index n = x.cols();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(d + 1);
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd qdiag(n);
  for (Eigen::Index i = 0; i < n; ++i) qdiag(i) = x.col(i).squaredNorm() + 1.0;

  auto margin = [&](Eigen::Index i) {
    return w.head(d).dot(x.col(i)) + w(d);
  };

  for (int epoch = 0; epoch < options.max_epochs; ++epoch) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double g = y[i] * margin(i) - 1.0;
      double pg = g;
      if (alpha(i) <= 0.0) pg = std::min(g, 0.0);
      else if (alpha(i) >= c) pg = std::max(g, 0.0);
      if (pg == 0.0) continue;
      const double old = alpha(i);
      alpha(i) = std::clamp(old - g / qdiag(i), 0.0, c);
      const double delta = (alpha(i) - old) * y[i];
      w.head(d).noalias() += delta * x.col(i);
      w(d) += delta;
    }

    double hinge = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) hinge += std::max(0.0, 1.0 - y[i] * margin(i));
    const double half_norm = 0.5 * w.squaredNorm();
    const double primal = half_norm + c * hinge;
    const double dual = alpha.sum() - half_norm;
    if (primal - dual <= options.tolerance * std::max(1.0, std::abs(primal))) break;
  }
  return {std::move(w)};
}

}  // namespace

LinearClassifier train(const LabeledDataset& data, double penalty_c,
                       const TrainOptions& options) {
  if (!(std::isfinite(penalty_c) && penalty_c > 0.0)) {
    throw SpecError("penalty C must be positive");
  }
  if (data.num_classes() < 2) {
    throw EmptyClassError("training needs at least two classes");
  }
  data.validate(/*require_all_classes=*/true);

  const Eigen::Index k = static_cast<Eigen::Index>(data.num_classes());
  const Eigen::Index d = data.features.d();
  LinearClassifier model;
  model.weights.resize(k, d);
  model.biases.resize(k);
  model.penalty_c = penalty_c;
  model.class_names = data.class_names;

  std::vector<double> y(data.labels.size());
  for (Eigen::Index c = 0; c < k; ++c) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = data.labels[i] == c ? 1.0 : -1.0;
    const BinarySvm svm = solve_binary(data.features.data(), y, penalty_c, options);
    model.weights.row(c) = svm.w.head(d).transpose();
    model.biases(c) = svm.w(d);
  }
  return model;
}

Eigen::MatrixXd decision_scores(const LinearClassifier& model, const FeatureMatrix& x) {
  if (x.d() != model.dim()) {
    throw DimensionError("predict: classifier expects d=" + std::to_string(model.dim()) +
                         ", input has d=" + std::to_string(x.d()));
  }
  Eigen::MatrixXd scores = model.weights * x.data();
  scores.colwise() += model.biases;
  return scores;
}

std::vector<int> predict(const LinearClassifier& model, const FeatureMatrix& x) {
  const Eigen::MatrixXd scores = decision_scores(model, x);
  std::vector<int> out(static_cast<std::size_t>(x.n()));
  for (Eigen::Index j = 0; j < scores.cols(); ++j) {
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < scores.rows(); ++c) {
      if (scores(c, j) > scores(best, j)) best = c;
    }
    out[j] = static_cast<int>(best);
  }
  return out;
}

void save_classifier(const std::filesystem::path& path, const LinearClassifier& model) {
  nlohmann::json j;
  j["format"] = "tsrg-linear-classifier";
  j["version"] = 1;
  j["penalty_c"] = model.penalty_c;
  j["class_names"] = model.class_names;
  j["biases"] = std::vector<double>(model.biases.data(),
                                    model.biases.data() + model.biases.size());
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index c = 0; c < model.weights.rows(); ++c) {
    std::vector<double> row(static_cast<std::size_t>(model.weights.cols()));
    for (Eigen::Index i = 0; i < model.weights.cols(); ++i) row[i] = model.weights(c, i);
    rows.push_back(row);
  }
  j["weights"] = std::move(rows);
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  out << j.dump() << '\n';
}

LinearClassifier load_classifier(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    const nlohmann::json j = nlohmann::json::parse(in);
    if (j.at("format") != "tsrg-linear-classifier") {
      throw FormatError(path.string() + " is not a classifier file");
    }
    LinearClassifier model;
    model.penalty_c = j.at("penalty_c").get<double>();
    model.class_names = j.at("class_names").get<std::vector<std::string>>();
    const auto biases = j.at("biases").get<std::vector<double>>();
    const auto rows = j.at("weights").get<std::vector<std::vector<double>>>();
    const auto k = static_cast<Eigen::Index>(rows.size());
    const auto d = k > 0 ? static_cast<Eigen::Index>(rows.front().size()) : 0;
    if (static_cast<Eigen::Index>(biases.size()) != k ||
        static_cast<Eigen::Index>(model.class_names.size()) != k) {
      throw FormatError("classifier file has inconsistent class count");
    }
    model.weights.resize(k, d);
    model.biases = Eigen::Map<const Eigen::VectorXd>(biases.data(), k);
    for (Eigen::Index c = 0; c < k; ++c) {
      if (static_cast<Eigen::Index>(rows[c].size()) != d) {
        throw FormatError("classifier weight rows have unequal length");
      }
      for (Eigen::Index i = 0; i < d; ++i) model.weights(c, i) = rows[c][i];
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace tsrg
