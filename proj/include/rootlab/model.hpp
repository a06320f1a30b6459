#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "rootlab/dataset.hpp"
#include "rootlab/ensemble.hpp"
#include "rootlab/linear.hpp"
#include "rootlab/mlp.hpp"
#include "rootlab/tree.hpp"

namespace rootlab {

enum class ModelFamily { kTree, kForest, kGbm, kLogReg, kMlp };

std::string model_family_name(ModelFamily f);
ModelFamily parse_model_family(const std::string& name);  // DataError when unknown

struct ModelSpec {
  ModelFamily family = ModelFamily::kTree;
  TreeParams tree;
  ForestParams forest;
  GbmParams gbm;
  LogRegParams logreg;
  MlpParams mlp;
  int jobs = 1;  // worker threads inside a single fit (forest only)

  static ModelSpec of(ModelFamily family) {
    ModelSpec s;
    s.family = family;
    return s;
  }
  nlohmann::json to_json() const;  // parameters of the selected family only
  static ModelSpec from_json(const nlohmann::json& j);
};

using ModelParameters = std::variant<DecisionTree, RandomForest, GradientBoosting, LogisticRegression, Mlp>;

class TrainedModel {
 public:
  static constexpr int kFormatVersion = 1;

  TrainedModel(ModelFamily family, ModelParameters params, std::vector<std::string> feature_names,
               std::optional<Standardizer> standardization, std::uint64_t train_seed);

  ModelFamily family() const { return family_; }
  const ModelParameters& parameters() const { return params_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  const std::optional<Standardizer>& standardization() const { return standardization_; }
  std::uint64_t train_seed() const { return train_seed_; }

  // X columns must follow feature_names().
  std::vector<int> predict(const Eigen::MatrixXd& X) const;
  // Selects the training columns by name; DataError when any is missing.
  std::vector<int> predict(const LabeledDataset& ds) const;

  nlohmann::json to_json() const;
  static TrainedModel from_json(const nlohmann::json& j);

 private:
  ModelFamily family_;
  ModelParameters params_;
  std::vector<std::string> feature_names_;
  std::optional<Standardizer> standardization_;
  std::uint64_t train_seed_;
};

TrainedModel fit_model(const ModelSpec& spec, const Eigen::MatrixXd& X, const std::vector<int>& y,
                       const std::vector<std::string>& feature_names, std::uint64_t seed, int n_classes = 0);

}  // namespace rootlab
