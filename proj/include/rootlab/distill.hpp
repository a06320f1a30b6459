#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "rootlab/dataset.hpp"
#include "rootlab/model.hpp"
#include "rootlab/tree.hpp"

namespace rootlab {

struct DistillConfig {
  MlpParams teacher;
  TreeParams surrogate{4, 20, 0};
  double test_fraction = 0.2;
  int importance_repeats = 5;
  std::uint64_t seed = 0;
};

struct DistillReport {
  std::vector<std::string> feature_names;
  double nn_test_balanced_accuracy = 0.0;
  double tree_fidelity = 0.0;    // surrogate vs teacher on test rows
  double tree_standalone = 0.0;  // surrogate vs ground truth on test rows
  std::map<std::string, double> importance;           // permutation shares
  std::map<std::string, double> impurity_importance;  // surrogate Gini shares
  std::string rules_text;
  DecisionTree surrogate;

  nlohmann::json to_json() const;
};

// Stratified split, MLP teacher on the true train labels, surrogate tree on
// the teacher's train predictions.  `features` empty means every column.
DistillReport distill(const LabeledDataset& ds, const DistillConfig& config,
                      const std::vector<std::string>& features = {});

// Mean balanced-accuracy drop per feature over `repeats` shuffles, clamped at
// zero and normalized to shares (all zero when no feature matters).  Each
// repeat draws one row permutation and applies it to every column in turn.
using Predictor = std::function<std::vector<int>(const Eigen::MatrixXd&)>;
std::vector<double> permutation_importance(const Predictor& predict, const Eigen::MatrixXd& X,
                                           const std::vector<int>& y, std::uint64_t seed, int repeats);

// Depth-first if/else listing with leaf class, purity and size.  Thresholds
// print with 6 significant digits when that reads back as the same double,
// otherwise with 17.
std::string extract_rules(const DecisionTree& tree, const std::vector<std::string>& feature_names);

// Evaluates text produced by extract_rules against the named columns of X.
std::vector<int> evaluate_rules(const std::string& rules, const std::vector<std::string>& feature_names,
                                const Eigen::MatrixXd& X);

}  // namespace rootlab
