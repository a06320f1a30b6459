#pragma once

#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

namespace rootlab {

// Per-feature z-scoring; constant columns keep scale 1.
struct Standardizer {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;

  static Standardizer fit(const Eigen::MatrixXd& X);
  Eigen::MatrixXd apply(const Eigen::MatrixXd& X) const;

  nlohmann::json to_json() const;
  static Standardizer from_json(const nlohmann::json& j);
};

struct LogRegParams {
  double l2 = 1e-4;
  int max_iters = 1000;
  double tolerance = 1e-6;  // on the gradient norm
};

// Multinomial softmax regression, scores = X W^T + b.
struct LogisticRegression {
  Eigen::MatrixXd weights;  // classes x features
  Eigen::VectorXd bias;
  int iterations = 0;
  double gradient_norm = 0.0;

  Eigen::MatrixXd decision_scores(const Eigen::MatrixXd& X) const;
  std::vector<int> predict(const Eigen::MatrixXd& X) const;

  nlohmann::json to_json() const;
  static LogisticRegression from_json(const nlohmann::json& j);
};

struct LogRegGradient {
  double loss = 0.0;
  Eigen::MatrixXd d_weights;
  Eigen::VectorXd d_bias;
};

// Mean cross-entropy plus (l2 / 2) |W|^2 and its gradient.
LogRegGradient logreg_loss_and_gradient(const LogisticRegression& model, const Eigen::MatrixXd& X,
                                        const std::vector<int>& y, double l2);

// X is expected to be standardized already.
LogisticRegression fit_logreg(const Eigen::MatrixXd& X, const std::vector<int>& y, const LogRegParams& params,
                              int n_classes = 0);

}  // namespace rootlab
