#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

namespace rootlab {

struct MlpParams {
  std::vector<int> hidden{64, 64};
  double rate = 1e-3;
  int batch = 128;
  int max_epochs = 200;
  int patience = 20;
  double holdout = 0.1;  // fraction of training rows used for early stopping
};

// Dense ReLU network with a softmax output layer.
struct Mlp {
  std::vector<Eigen::MatrixXd> weights;  // out x in per layer
  std::vector<Eigen::VectorXd> biases;
  int epochs_run = 0;
  int best_epoch = 0;

  Eigen::MatrixXd decision_scores(const Eigen::MatrixXd& X) const;
  std::vector<int> predict(const Eigen::MatrixXd& X) const;

  nlohmann::json to_json() const;
  static Mlp from_json(const nlohmann::json& j);
};

struct MlpGradient {
  double loss = 0.0;
  std::vector<Eigen::MatrixXd> d_weights;
  std::vector<Eigen::VectorXd> d_biases;
};

// Mean softmax cross-entropy over the rows of X and its gradient.
MlpGradient mlp_loss_and_gradient(const Mlp& net, const Eigen::MatrixXd& X, const std::vector<int>& y);

// He-initialized network for the given layer sizes.
Mlp init_mlp(int n_inputs, const std::vector<int>& hidden, int n_classes, std::uint64_t seed);

// X is expected to be standardized already.
Mlp fit_mlp(const Eigen::MatrixXd& X, const std::vector<int>& y, const MlpParams& params, std::uint64_t seed,
            int n_classes = 0);

}  // namespace rootlab
