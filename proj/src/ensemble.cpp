#include "rootlab/ensemble.hpp"

#include <cmath>

#include "rootlab/dataset.hpp"
#include "rootlab/errors.hpp"
#include "rootlab/parallel.hpp"

namespace rootlab {

namespace {

constexpr std::uint64_t kForestStream = 0x666f72657374;  // "forest"

int infer_classes(const std::vector<int>& y, int n_classes) {
  if (y.empty()) throw DataError("empty training set");
  return std::max(n_classes, *std::max_element(y.begin(), y.end()) + 1);
}

}  // namespace

std::vector<int> argmax_rows(const Eigen::MatrixXd& scores) {
  std::vector<int> out(static_cast<std::size_t>(scores.rows()));
  for (Eigen::Index r = 0; r < scores.rows(); ++r) {
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < scores.cols(); ++c)
      if (scores(r, c) > scores(r, best)) best = c;
    out[static_cast<std::size_t>(r)] = static_cast<int>(best);
  }
  return out;
}

Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& scores) {
  Eigen::MatrixXd p = scores.colwise() - scores.rowwise().maxCoeff();
  p = p.array().exp();
  p.array().colwise() /= p.rowwise().sum().array();
  return p;
}

std::vector<int> RandomForest::predict(const Eigen::MatrixXd& X) const {
  Eigen::MatrixXi votes = Eigen::MatrixXi::Zero(X.rows(), n_classes_);
  for (const auto& tree : trees_)
    for (Eigen::Index r = 0; r < X.rows(); ++r) ++votes(r, tree.predict_row(X.row(r)));
  return argmax_rows(votes.cast<double>());
}

nlohmann::json RandomForest::to_json() const {
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& t : trees_) trees.push_back(t.to_json());
  return {{"n_classes", n_classes_}, {"trees", trees}};
}

RandomForest RandomForest::from_json(const nlohmann::json& j) {
  std::vector<DecisionTree> trees;
  for (const auto& t : j.at("trees")) trees.push_back(DecisionTree::from_json(t));
  return RandomForest(std::move(trees), j.at("n_classes").get<int>());
}

RandomForest fit_forest(const Eigen::MatrixXd& X, const std::vector<int>& y, const ForestParams& params,
                        std::uint64_t seed, int n_classes, int jobs) {
  const int k = infer_classes(y, n_classes);
  if (params.n_trees < 1) throw DataError("forest needs at least one tree");
  TreeParams tp{params.max_depth, params.min_leaf, 0};
  if (params.feature_subsampling)
    tp.max_features = std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(X.cols())))));

  std::vector<DecisionTree> trees(static_cast<std::size_t>(params.n_trees));
  parallel_for(params.n_trees, jobs, [&](int t) {
    std::mt19937_64 rng = row_stream(seed, static_cast<std::uint64_t>(t), kForestStream);
    std::vector<int> rows;
    if (params.bootstrap) {
      std::uniform_int_distribution<int> pick(0, static_cast<int>(X.rows()) - 1);
      rows.resize(static_cast<std::size_t>(X.rows()));
      for (auto& r : rows) r = pick(rng);
    }
    trees[static_cast<std::size_t>(t)] = fit_tree(X, y, tp, k, rows, &rng);
  });
  return RandomForest(std::move(trees), k);
}

Eigen::MatrixXd GradientBoosting::decision_scores(const Eigen::MatrixXd& X, int rounds) const {
  const int use = rounds < 0 ? n_rounds() : std::min(rounds, n_rounds());
  Eigen::MatrixXd F = init_.transpose().replicate(X.rows(), 1);
  for (int m = 0; m < use; ++m)
    for (int c = 0; c < n_classes(); ++c) F.col(c) += rate_ * rounds_[static_cast<std::size_t>(m)][static_cast<std::size_t>(c)].predict(X);
  return F;
}

std::vector<int> GradientBoosting::predict(const Eigen::MatrixXd& X) const { return argmax_rows(decision_scores(X)); }

std::vector<double> GradientBoosting::staged_loss(const Eigen::MatrixXd& X, const std::vector<int>& y) const {
  Eigen::MatrixXd F = init_.transpose().replicate(X.rows(), 1);
  std::vector<double> out;
  auto loss = [&] {
    const Eigen::MatrixXd p = softmax_rows(F);
    double s = 0.0;
    for (Eigen::Index r = 0; r < X.rows(); ++r) s -= std::log(std::max(p(r, y[static_cast<std::size_t>(r)]), 1e-300));
    return s / static_cast<double>(X.rows());
  };
  out.push_back(loss());
  for (const auto& round : rounds_) {
    for (int c = 0; c < n_classes(); ++c) F.col(c) += rate_ * round[static_cast<std::size_t>(c)].predict(X);
    out.push_back(loss());
  }
  return out;
}

nlohmann::json GradientBoosting::to_json() const {
  nlohmann::json rounds = nlohmann::json::array();
  for (const auto& round : rounds_) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& t : round) r.push_back(t.to_json());
    rounds.push_back(r);
  }
  return {{"init", std::vector<double>(init_.data(), init_.data() + init_.size())}, {"rate", rate_}, {"rounds", rounds}};
}

GradientBoosting GradientBoosting::from_json(const nlohmann::json& j) {
  const auto init = j.at("init").get<std::vector<double>>();
  std::vector<std::vector<RegressionTree>> rounds;
  for (const auto& r : j.at("rounds")) {
    rounds.emplace_back();
    for (const auto& t : r) rounds.back().push_back(RegressionTree::from_json(t));
  }
  return GradientBoosting(Eigen::Map<const Eigen::VectorXd>(init.data(), static_cast<Eigen::Index>(init.size())),
                          j.at("rate").get<double>(), std::move(rounds));
}

GradientBoosting fit_gbm(const Eigen::MatrixXd& X, const std::vector<int>& y, const GbmParams& params, int n_classes) {
  const int k = infer_classes(y, n_classes);
  const auto n = X.rows();
  if (params.n_rounds < 0 || !(params.rate > 0.0)) throw DataError("gbm needs n_rounds >= 0 and rate > 0");

  // Log class priors; empty classes get a floor so they stay reachable only by boosting.
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(k);
  for (int v : y) counts(v) += 1.0;
  Eigen::VectorXd init = (counts.array().max(0.5) / static_cast<double>(n)).log().matrix();

  Eigen::MatrixXd Y = Eigen::MatrixXd::Zero(n, k);
  for (Eigen::Index r = 0; r < n; ++r) Y(r, y[static_cast<std::size_t>(r)]) = 1.0;

  const TreeParams tp{params.max_depth, params.min_leaf, 0};
  const double shrink = static_cast<double>(k - 1) / static_cast<double>(k);
  Eigen::MatrixXd F = init.transpose().replicate(n, 1);
  std::vector<std::vector<RegressionTree>> rounds;
  rounds.reserve(static_cast<std::size_t>(params.n_rounds));
  for (int m = 0; m < params.n_rounds; ++m) {
    const Eigen::MatrixXd P = softmax_rows(F);
    const Eigen::MatrixXd R = Y - P;
    std::vector<RegressionTree> round;
    for (int c = 0; c < k; ++c) {
      const Eigen::VectorXd residual = R.col(c);
      auto leaf = [&](std::span<const int> rows) {
        double num = 0.0, den = 0.0;
        for (int r : rows) {
          const double g = residual(r);
          num += g;
          den += std::abs(g) * (1.0 - std::abs(g));
        }
        return den < 1e-150 ? 0.0 : shrink * num / den;
      };
      round.push_back(fit_regression_tree(X, residual, tp, leaf));
      F.col(c) += params.rate * round.back().predict(X);
    }
    if (!F.allFinite()) throw NumericError("gbm scores became non-finite");
    rounds.push_back(std::move(round));
  }
  return GradientBoosting(std::move(init), params.rate, std::move(rounds));
}

}  // namespace rootlab
