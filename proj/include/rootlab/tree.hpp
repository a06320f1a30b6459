#pragma once

// CART trees.  Classification trees split on Gini impurity; regression trees
// (the GBM base learner) split on squared error.  Split candidates are the
// midpoints of consecutive distinct sorted values; a row goes left when
// x <= threshold.  Among equally good splits the lowest feature index wins,
// then the lowest threshold.

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include "json.hpp"

namespace rootlab {

struct TreeParams {
  int max_depth = 12;  // < 0: unlimited
  int min_leaf = 5;
  int max_features = 0;  // features tried per split; 0: all
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  int n_samples = 0;
  double impurity = 0.0;
  // Classification: per-class counts.  Regression: a single leaf value.
  std::vector<double> value;

  bool is_leaf() const { return feature < 0; }
};

class DecisionTree {
 public:
  DecisionTree() = default;
  DecisionTree(std::vector<TreeNode> nodes, int n_classes, int n_features)
      : nodes_(std::move(nodes)), n_classes_(n_classes), n_features_(n_features) {}

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  int n_classes() const { return n_classes_; }
  int n_features() const { return n_features_; }
  int depth() const;

  // Index of the leaf reached by a row.
  template <typename Row>
  int leaf_index(const Row& x) const {
    int i = 0;
    while (!nodes_[static_cast<std::size_t>(i)].is_leaf()) {
      const TreeNode& n = nodes_[static_cast<std::size_t>(i)];
      i = x(n.feature) <= n.threshold ? n.left : n.right;
    }
    return i;
  }

  template <typename Row>
  int predict_row(const Row& x) const {
    return majority(nodes_[static_cast<std::size_t>(leaf_index(x))]);
  }

  std::vector<int> predict(const Eigen::MatrixXd& X) const;

  // Total weighted Gini decrease per feature, normalized to sum to 1
  // (all zeros for a single-leaf tree).
  Eigen::VectorXd impurity_importance() const;

  static int majority(const TreeNode& leaf);

  nlohmann::json to_json() const;
  static DecisionTree from_json(const nlohmann::json& j);

 private:
  std::vector<TreeNode> nodes_;
  int n_classes_ = 0;
  int n_features_ = 0;
};

// Labels must lie in [0, n_classes).  `rows` (possibly with repeats, as in a
// bootstrap) selects the training rows; empty means all.  `rng` is required
// when params.max_features restricts the candidate features.
DecisionTree fit_tree(const Eigen::MatrixXd& X, const std::vector<int>& y, const TreeParams& params,
                      int n_classes = 0, std::span<const int> rows = {}, std::mt19937_64* rng = nullptr);

class RegressionTree {
 public:
  RegressionTree() = default;
  explicit RegressionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

  const std::vector<TreeNode>& nodes() const { return nodes_; }

  template <typename Row>
  double predict_row(const Row& x) const {
    int i = 0;
    while (!nodes_[static_cast<std::size_t>(i)].is_leaf()) {
      const TreeNode& n = nodes_[static_cast<std::size_t>(i)];
      i = x(n.feature) <= n.threshold ? n.left : n.right;
    }
    return nodes_[static_cast<std::size_t>(i)].value[0];
  }

  Eigen::VectorXd predict(const Eigen::MatrixXd& X) const;

  nlohmann::json to_json() const;
  static RegressionTree from_json(const nlohmann::json& j);

 private:
  std::vector<TreeNode> nodes_;
};

// Leaf value from the rows that reached the leaf; defaults to the target mean.
using LeafValueFn = std::function<double(std::span<const int> rows)>;

RegressionTree fit_regression_tree(const Eigen::MatrixXd& X, const Eigen::VectorXd& target, const TreeParams& params,
                                   const LeafValueFn& leaf_value = {});

}  // namespace rootlab
