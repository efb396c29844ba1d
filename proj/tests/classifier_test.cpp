#include "tsrg/classifier.hpp"

#include <cmath>
#include <filesystem>
#include <limits>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "tsrg/errors.hpp"

namespace tsrg {
namespace {

LabeledDataset blobs(const std::vector<Eigen::Vector2d>& centers, int per_class, double sigma,
                     std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  Eigen::MatrixXd x(2, static_cast<Eigen::Index>(centers.size()) * per_class);
  LabeledDataset data;
  Eigen::Index col = 0;
  for (std::size_t c = 0; c < centers.size(); ++c) {
    data.class_names.push_back("c" + std::to_string(c));
    for (int i = 0; i < per_class; ++i, ++col) {
      x(0, col) = centers[c](0) + noise(rng);
      x(1, col) = centers[c](1) + noise(rng);
      data.labels.push_back(static_cast<int>(c));
    }
  }
  data.features = FeatureMatrix(x);
  return data;
}

LabeledDataset triangle_blobs(std::uint64_t seed) {
  const double h = 4.0 * std::sqrt(3.0) / 2.0;
  return blobs({{0, 0}, {4, 0}, {2, h}}, 30, 0.3, seed);
}

double accuracy(const std::vector<int>& pred, const std::vector<int>& truth) {
  int hit = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hit += pred[i] == truth[i];
  return static_cast<double>(hit) / static_cast<double>(pred.size());
}

// Independent reference: nearest class centroid.
std::vector<int> nearest_centroid(const LabeledDataset& data) {
  const auto k = static_cast<Eigen::Index>(data.num_classes());
  const auto& x = data.features.data();
  Eigen::MatrixXd centroids = Eigen::MatrixXd::Zero(x.rows(), k);
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(k);
  for (Eigen::Index i = 0; i < x.cols(); ++i) {
    centroids.col(data.labels[i]) += x.col(i);
    counts(data.labels[i]) += 1.0;
  }
  for (Eigen::Index c = 0; c < k; ++c) centroids.col(c) /= counts(c);
  std::vector<int> out;
  for (Eigen::Index i = 0; i < x.cols(); ++i) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < k; ++c) {
      const double d = (x.col(i) - centroids.col(c)).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(c);
      }
    }
    out.push_back(best);
  }
  return out;
}

TEST(Train, SeparableBlobsPerfect) {
  const LabeledDataset data = blobs({{-5, 0}, {5, 0}}, 20, 0.5 / 2.0, 1);
  const LinearClassifier model = train(data, 1.0);
  EXPECT_EQ(accuracy(predict(model, data.features), data.labels), 1.0);
}

TEST(Train, TwoPointMargin) {
  Eigen::MatrixXd x(2, 2);
  x << 1, -1, 0, 0;
  const LabeledDataset data{FeatureMatrix(x), {0, 1}, {"pos", "neg"}};
  const LinearClassifier model = train(data, 1.0);
  EXPECT_EQ(predict(model, data.features), (std::vector<int>{0, 1}));
  EXPECT_GT(model.weights.row(0).dot(Eigen::Vector2d(1, 0)), 0.0);
}

TEST(Train, RepeatedPointsMargin) {
  Eigen::MatrixXd x(2, 6);
  x << 1, 1, 1, -1, -1, -1, 0, 0, 0, 0, 0, 0;
  const LabeledDataset data{FeatureMatrix(x), {0, 0, 0, 1, 1, 1}, {"pos", "neg"}};
  const LinearClassifier model = train(data, 1.0);
  EXPECT_EQ(accuracy(predict(model, data.features), data.labels), 1.0);
}

TEST(Train, TriangleBlobsMatchNearestCentroid) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const LabeledDataset data = triangle_blobs(100 + seed);
    const double oracle = accuracy(nearest_centroid(data), data.labels);
    const double svm = accuracy(predict(train(data, 1.0), data.features), data.labels);
    EXPECT_GE(oracle, 0.99) << "seed " << seed;
    EXPECT_GE(svm, 0.95) << "seed " << seed;
    EXPECT_GE(svm, oracle - 0.05) << "seed " << seed;
  }
}

TEST(Train, OverlappingBlobsNotFarBelowNearestCentroid) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const LabeledDataset data = blobs({{0, 0}, {1.5, 0}, {0.75, 1.3}}, 40, 0.6, 200 + seed);
    const double oracle = accuracy(nearest_centroid(data), data.labels);
    const double svm = accuracy(predict(train(data, 1.0), data.features), data.labels);
    EXPECT_GE(svm, oracle - 0.05) << "seed " << seed;
  }
}

TEST(Train, Deterministic) {
  const LabeledDataset data = blobs({{0, 0}, {1.5, 0}, {0.75, 1.3}}, 25, 0.6, 7);
  const LinearClassifier a = train(data, 1.0);
  const LinearClassifier b = train(data, 1.0);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.penalty_c, 1.0);
  EXPECT_EQ(a.class_names, data.class_names);
}

TEST(Train, ScalingWithRescaledPenaltyKeepsPredictions) {
  // Triangle centred on the origin: each one-vs-rest split is feasible without
  // a bias, so shrinking the regularized bias cannot flip predictions.
  const double h = 4.0 * std::sqrt(3.0) / 2.0;
  const LabeledDataset data =
      blobs({{-2, -h / 3}, {2, -h / 3}, {0, 2 * h / 3}}, 30, 0.3, 8);
  const std::vector<int> base = predict(train(data, 1.0), data.features);
  ASSERT_EQ(base, data.labels);
  for (double s : {0.1, 10.0}) {
    LabeledDataset scaled = data;
    scaled.features = FeatureMatrix(data.features.data() * s);
    // w -> w / s keeps every margin when C -> C / s^2.
    const LinearClassifier model = train(scaled, 1.0 / (s * s));
    EXPECT_EQ(predict(model, scaled.features), base) << "scale " << s;
  }
}

TEST(Train, RequiresEveryClass) {
  LabeledDataset data = triangle_blobs(10);
  for (int& l : data.labels) {
    if (l == 2) l = 1;
  }
  EXPECT_THROW(train(data, 1.0), EmptyClassError);
  LabeledDataset single{testing::random_features(2, 4, 11), {0, 0, 0, 0}, {"only"}};
  EXPECT_THROW(train(single, 1.0), EmptyClassError);
}

TEST(Train, RejectsBadPenalty) {
  EXPECT_THROW(train(triangle_blobs(12), 0.0), SpecError);
}

TEST(Predict, IdentityWeights) {
  LinearClassifier m;
  m.weights = Eigen::MatrixXd::Identity(2, 2);
  m.biases = Eigen::VectorXd::Zero(2);
  m.class_names = {"a", "b"};
  const FeatureMatrix x(Eigen::MatrixXd(Eigen::Vector2d(1, 0)));
  EXPECT_EQ(predict(m, x), std::vector<int>{0});
}

TEST(Predict, ZeroModelTiesGoToClassZero) {
  LinearClassifier m;
  m.weights = Eigen::MatrixXd::Zero(3, 4);
  m.biases = Eigen::VectorXd::Zero(3);
  m.class_names = {"a", "b", "c"};
  EXPECT_EQ(predict(m, testing::random_features(4, 6, 13)), std::vector<int>(6, 0));
}

TEST(Predict, BatchedScoresMatchNaiveLoop) {
  const LabeledDataset data = triangle_blobs(14);
  const LinearClassifier model = train(data, 1.0);
  const auto x = testing::random_features(2, 9, 15, 4.0);
  const Eigen::MatrixXd scores = decision_scores(model, x);
  for (Eigen::Index c = 0; c < model.num_classes(); ++c) {
    for (Eigen::Index i = 0; i < x.n(); ++i) {
      double s = model.biases(c);
      for (Eigen::Index j = 0; j < x.d(); ++j) s += model.weights(c, j) * x.data()(j, i);
      EXPECT_NEAR(scores(c, i), s, 1e-12 * (1.0 + std::abs(s)));
    }
  }
}

TEST(Predict, DimensionMismatchThrows) {
  const LinearClassifier model = train(triangle_blobs(16), 1.0);
  EXPECT_THROW(predict(model, testing::random_features(3, 2, 17)), DimensionError);
}

TEST(ClassifierIo, JsonRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "tsrg_classifier_test.json";
  const LinearClassifier model = train(triangle_blobs(18), 1.0);
  save_classifier(path, model);
  EXPECT_EQ(load_classifier(path), model);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace tsrg
