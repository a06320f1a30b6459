#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "rootlab/tree.hpp"

namespace rootlab {

struct ForestParams {
  int n_trees = 300;
  int max_depth = 8;
  int min_leaf = 5;
  bool bootstrap = true;
  bool feature_subsampling = true;  // floor(sqrt(n_features)) candidates per split
};

class RandomForest {
 public:
  RandomForest() = default;
  RandomForest(std::vector<DecisionTree> trees, int n_classes) : trees_(std::move(trees)), n_classes_(n_classes) {}

  const std::vector<DecisionTree>& trees() const { return trees_; }
  int n_classes() const { return n_classes_; }

  // Majority vote; ties go to the lowest class.
  std::vector<int> predict(const Eigen::MatrixXd& X) const;

  nlohmann::json to_json() const;
  static RandomForest from_json(const nlohmann::json& j);

 private:
  std::vector<DecisionTree> trees_;
  int n_classes_ = 0;
};

RandomForest fit_forest(const Eigen::MatrixXd& X, const std::vector<int>& y, const ForestParams& params,
                        std::uint64_t seed, int n_classes = 0, int jobs = 1);

struct GbmParams {
  int n_rounds = 200;
  double rate = 0.1;
  int max_depth = 3;
  int min_leaf = 1;
};

class GradientBoosting {
 public:
  GradientBoosting() = default;
  GradientBoosting(Eigen::VectorXd init, double rate, std::vector<std::vector<RegressionTree>> rounds)
      : init_(std::move(init)), rate_(rate), rounds_(std::move(rounds)) {}

  int n_classes() const { return static_cast<int>(init_.size()); }
  int n_rounds() const { return static_cast<int>(rounds_.size()); }

  // Additive class scores after the first `rounds` rounds (all when < 0).
  Eigen::MatrixXd decision_scores(const Eigen::MatrixXd& X, int rounds = -1) const;
  std::vector<int> predict(const Eigen::MatrixXd& X) const;

  // Mean softmax cross-entropy after each round, index 0 being the prior.
  std::vector<double> staged_loss(const Eigen::MatrixXd& X, const std::vector<int>& y) const;

  nlohmann::json to_json() const;
  static GradientBoosting from_json(const nlohmann::json& j);

 private:
  Eigen::VectorXd init_;
  double rate_ = 0.1;
  std::vector<std::vector<RegressionTree>> rounds_;  // [round][class]
};

GradientBoosting fit_gbm(const Eigen::MatrixXd& X, const std::vector<int>& y, const GbmParams& params,
                         int n_classes = 0);

// Row-wise argmax; ties go to the lowest column.
std::vector<int> argmax_rows(const Eigen::MatrixXd& scores);

// Row-wise softmax, shifted by the row maximum.
Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& scores);

}  // namespace rootlab
