#include "rootlab/linear.hpp"

#include <cmath>

#include "rootlab/ensemble.hpp"
#include "rootlab/errors.hpp"

namespace rootlab {

namespace {

std::vector<double> to_vec(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Eigen::VectorXd from_vec(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

Standardizer Standardizer::fit(const Eigen::MatrixXd& X) {
  if (X.rows() == 0) throw DataError("cannot standardize an empty matrix");
  Standardizer s;
  s.mean = X.colwise().mean().transpose();
  s.scale = ((X.rowwise() - s.mean.transpose()).array().square().colwise().mean().sqrt()).transpose();
  for (Eigen::Index j = 0; j < s.scale.size(); ++j)
    if (!(s.scale(j) > 1e-12) || !std::isfinite(s.scale(j))) s.scale(j) = 1.0;
  return s;
}

Eigen::MatrixXd Standardizer::apply(const Eigen::MatrixXd& X) const {
  if (X.cols() != mean.size()) throw DataError("standardizer feature count mismatch");
  return ((X.rowwise() - mean.transpose()).array().rowwise() / scale.transpose().array()).matrix();
}

nlohmann::json Standardizer::to_json() const { return {{"mean", to_vec(mean)}, {"scale", to_vec(scale)}}; }

Standardizer Standardizer::from_json(const nlohmann::json& j) {
  return {from_vec(j.at("mean").get<std::vector<double>>()), from_vec(j.at("scale").get<std::vector<double>>())};
}

Eigen::MatrixXd LogisticRegression::decision_scores(const Eigen::MatrixXd& X) const {
  return (X * weights.transpose()).rowwise() + bias.transpose();
}

std::vector<int> LogisticRegression::predict(const Eigen::MatrixXd& X) const { return argmax_rows(decision_scores(X)); }

nlohmann::json LogisticRegression::to_json() const {
  nlohmann::json w = nlohmann::json::array();
  for (Eigen::Index c = 0; c < weights.rows(); ++c) w.push_back(to_vec(weights.row(c).transpose()));
  return {{"weights", w}, {"bias", to_vec(bias)}, {"iterations", iterations}, {"gradient_norm", gradient_norm}};
}

LogisticRegression LogisticRegression::from_json(const nlohmann::json& j) {
  LogisticRegression m;
  const auto rows = j.at("weights").get<std::vector<std::vector<double>>>();
  const Eigen::Index f = rows.empty() ? 0 : static_cast<Eigen::Index>(rows[0].size());
  m.weights.resize(static_cast<Eigen::Index>(rows.size()), f);
  for (std::size_t c = 0; c < rows.size(); ++c) m.weights.row(static_cast<Eigen::Index>(c)) = from_vec(rows[c]).transpose();
  m.bias = from_vec(j.at("bias").get<std::vector<double>>());
  m.iterations = j.value("iterations", 0);
  m.gradient_norm = j.value("gradient_norm", 0.0);
  return m;
}

LogRegGradient logreg_loss_and_gradient(const LogisticRegression& model, const Eigen::MatrixXd& X,
                                        const std::vector<int>& y, double l2) {
  const auto n = static_cast<double>(X.rows());
  const Eigen::MatrixXd S = model.decision_scores(X);
  Eigen::MatrixXd P = softmax_rows(S);
  const Eigen::VectorXd row_max = S.rowwise().maxCoeff();
  const Eigen::VectorXd log_norm = row_max.array() + (S.colwise() - row_max).array().exp().rowwise().sum().log();
  LogRegGradient g;
  for (Eigen::Index r = 0; r < X.rows(); ++r) {
    const int c = y[static_cast<std::size_t>(r)];
    g.loss += log_norm(r) - S(r, c);
    P(r, c) -= 1.0;
  }
  g.loss = g.loss / n + 0.5 * l2 * model.weights.squaredNorm();
  g.d_weights = P.transpose() * X / n + l2 * model.weights;
  g.d_bias = P.colwise().sum().transpose() / n;
  return g;
}

LogisticRegression fit_logreg(const Eigen::MatrixXd& X, const std::vector<int>& y, const LogRegParams& params,
                              int n_classes) {
  if (X.rows() == 0) throw DataError("fit_logreg: empty training set");
  const int k = std::max(n_classes, *std::max_element(y.begin(), y.end()) + 1);
  LogisticRegression m;
  m.weights = Eigen::MatrixXd::Zero(k, X.cols());
  m.bias = Eigen::VectorXd::Zero(k);

  constexpr double kArmijo = 1e-4;
  double step = 1.0;
  LogRegGradient g = logreg_loss_and_gradient(m, X, y, params.l2);
  int it = 0;
  for (; it < params.max_iters; ++it) {
    if (!std::isfinite(g.loss)) throw NumericError("logistic regression loss is not finite");
    const double gnorm2 = g.d_weights.squaredNorm() + g.d_bias.squaredNorm();
    if (std::sqrt(gnorm2) < params.tolerance) break;
    step = std::min(step * 2.0, 1e3);
    LogisticRegression trial;
    LogRegGradient tg;
    bool accepted = false;
    for (; step > 1e-20; step *= 0.5) {
      trial.weights = m.weights - step * g.d_weights;
      trial.bias = m.bias - step * g.d_bias;
      tg = logreg_loss_and_gradient(trial, X, y, params.l2);
      if (std::isfinite(tg.loss) && tg.loss <= g.loss - kArmijo * step * gnorm2) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;  // no representable descent left
    m.weights = std::move(trial.weights);
    m.bias = std::move(trial.bias);
    g = std::move(tg);
  }
  m.iterations = it;
  m.gradient_norm = std::sqrt(g.d_weights.squaredNorm() + g.d_bias.squaredNorm());
  return m;
}

}  // namespace rootlab
