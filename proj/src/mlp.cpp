#include "rootlab/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "rootlab/dataset.hpp"
#include "rootlab/ensemble.hpp"
#include "rootlab/errors.hpp"
#include "rootlab/metrics.hpp"

namespace rootlab {

namespace {

constexpr std::uint64_t kMlpStream = 0x6d6c70;  // "mlp"

struct Adam {
  double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  long t = 0;
  std::vector<Eigen::MatrixXd> mw, vw;
  std::vector<Eigen::VectorXd> mb, vb;

  explicit Adam(const Mlp& net) {
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
      mw.push_back(Eigen::MatrixXd::Zero(net.weights[l].rows(), net.weights[l].cols()));
      vw.push_back(mw.back());
      mb.push_back(Eigen::VectorXd::Zero(net.biases[l].size()));
      vb.push_back(mb.back());
    }
  }

  template <typename T>
  void update(T& param, const T& grad, T& m, T& v, double rate, double c1, double c2) {
    m = beta1 * m + (1.0 - beta1) * grad;
    v = beta2 * v + (1.0 - beta2) * grad.cwiseProduct(grad);
    param.array() -= rate * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
  }

  void step(Mlp& net, const MlpGradient& g, double rate) {
    ++t;
    const double c1 = 1.0 - std::pow(beta1, static_cast<double>(t));
    const double c2 = 1.0 - std::pow(beta2, static_cast<double>(t));
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
      update(net.weights[l], g.d_weights[l], mw[l], vw[l], rate, c1, c2);
      update(net.biases[l], g.d_biases[l], mb[l], vb[l], rate, c1, c2);
    }
  }
};

std::vector<double> flat(const Eigen::MatrixXd& m) { return {m.data(), m.data() + m.size()}; }

Eigen::MatrixXd gather_rows(const Eigen::MatrixXd& X, const std::vector<int>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), X.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = X.row(rows[i]);
  return out;
}

std::vector<int> gather(const std::vector<int>& y, const std::vector<int>& rows) {
  std::vector<int> out;
  out.reserve(rows.size());
  for (int r : rows) out.push_back(y[static_cast<std::size_t>(r)]);
  return out;
}

}  // namespace

Eigen::MatrixXd Mlp::decision_scores(const Eigen::MatrixXd& X) const {
  Eigen::MatrixXd h = X;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    Eigen::MatrixXd z = (h * weights[l].transpose()).rowwise() + biases[l].transpose();
    if (l + 1 < weights.size()) z = z.cwiseMax(0.0);
    h = std::move(z);
  }
  return h;
}

std::vector<int> Mlp::predict(const Eigen::MatrixXd& X) const { return argmax_rows(decision_scores(X)); }

nlohmann::json Mlp::to_json() const {
  nlohmann::json layers = nlohmann::json::array();
  for (std::size_t l = 0; l < weights.size(); ++l) {
    layers.push_back({{"rows", weights[l].rows()},
                      {"cols", weights[l].cols()},
                      {"weights", flat(weights[l])},
                      {"bias", flat(biases[l])}});
  }
  return {{"layers", layers}, {"epochs_run", epochs_run}, {"best_epoch", best_epoch}};
}

Mlp Mlp::from_json(const nlohmann::json& j) {
  Mlp net;
  for (const auto& layer : j.at("layers")) {
    const auto rows = layer.at("rows").get<Eigen::Index>();
    const auto cols = layer.at("cols").get<Eigen::Index>();
    const auto w = layer.at("weights").get<std::vector<double>>();
    const auto b = layer.at("bias").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(w.size()) != rows * cols || static_cast<Eigen::Index>(b.size()) != rows)
      throw DataError("malformed mlp layer");
    net.weights.push_back(Eigen::Map<const Eigen::MatrixXd>(w.data(), rows, cols));
    net.biases.push_back(Eigen::Map<const Eigen::VectorXd>(b.data(), rows));
  }
  net.epochs_run = j.value("epochs_run", 0);
  net.best_epoch = j.value("best_epoch", 0);
  return net;
}

MlpGradient mlp_loss_and_gradient(const Mlp& net, const Eigen::MatrixXd& X, const std::vector<int>& y) {
  const std::size_t L = net.weights.size();
  const auto n = static_cast<double>(X.rows());
  std::vector<Eigen::MatrixXd> acts{X};  // inputs to each layer
  Eigen::MatrixXd z;
  for (std::size_t l = 0; l < L; ++l) {
    z = (acts.back() * net.weights[l].transpose()).rowwise() + net.biases[l].transpose();
    if (l + 1 < L) acts.push_back(z.cwiseMax(0.0));
  }
  MlpGradient g;
  Eigen::MatrixXd delta = softmax_rows(z);
  const Eigen::VectorXd row_max = z.rowwise().maxCoeff();
  const Eigen::VectorXd log_norm = row_max.array() + (z.colwise() - row_max).array().exp().rowwise().sum().log();
  for (Eigen::Index r = 0; r < X.rows(); ++r) {
    const int c = y[static_cast<std::size_t>(r)];
    g.loss += log_norm(r) - z(r, c);
    delta(r, c) -= 1.0;
  }
  g.loss /= n;
  delta /= n;

  g.d_weights.resize(L);
  g.d_biases.resize(L);
  for (std::size_t l = L; l-- > 0;) {
    g.d_weights[l] = delta.transpose() * acts[l];
    g.d_biases[l] = delta.colwise().sum().transpose();
    if (l > 0) {
      Eigen::MatrixXd back = delta * net.weights[l];
      delta = back.cwiseProduct((acts[l].array() > 0.0).cast<double>().matrix());
    }
  }
  return g;
}

Mlp init_mlp(int n_inputs, const std::vector<int>& hidden, int n_classes, std::uint64_t seed) {
  std::mt19937_64 rng = row_stream(seed, 0, kMlpStream);
  Mlp net;
  std::vector<int> sizes{n_inputs};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(n_classes);
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    if (sizes[l + 1] < 1) throw DataError("mlp layer sizes must be positive");
    std::normal_distribution<double> dist(0.0, std::sqrt(2.0 / sizes[l]));
    Eigen::MatrixXd w(sizes[l + 1], sizes[l]);
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = dist(rng);
    net.weights.push_back(std::move(w));
    net.biases.push_back(Eigen::VectorXd::Zero(sizes[l + 1]));
  }
  return net;
}

Mlp fit_mlp(const Eigen::MatrixXd& X, const std::vector<int>& y, const MlpParams& params, std::uint64_t seed,
            int n_classes) {
  if (X.rows() == 0) throw DataError("fit_mlp: empty training set");
  if (params.batch < 1 || params.max_epochs < 0 || !(params.rate > 0.0)) throw DataError("invalid mlp parameters");
  const int k = std::max(n_classes, *std::max_element(y.begin(), y.end()) + 1);

  std::vector<int> fit_rows(y.size());
  std::iota(fit_rows.begin(), fit_rows.end(), 0);
  std::vector<int> holdout_rows;
  if (params.holdout > 0.0) {
    const Fold split = stratified_split(y, params.holdout, seed);
    if (!split.test.empty() && !split.train.empty()) {
      fit_rows = split.train;
      holdout_rows = split.test;
    }
  }
  const Eigen::MatrixXd Xh = gather_rows(X, holdout_rows);
  const std::vector<int> yh = gather(y, holdout_rows);

  Mlp net = init_mlp(static_cast<int>(X.cols()), params.hidden, k, seed);
  std::mt19937_64 rng = row_stream(seed, 1, kMlpStream);
  Adam adam(net);
  Mlp best = net;
  double best_score = -1.0;
  int since_best = 0;
  std::vector<int> order = fit_rows;
  int epoch = 0;
  for (; epoch < params.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(params.batch)) {
      const std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(params.batch));
      const std::vector<int> rows(order.begin() + static_cast<long>(start), order.begin() + static_cast<long>(stop));
      const MlpGradient g = mlp_loss_and_gradient(net, gather_rows(X, rows), gather(y, rows));
      if (!std::isfinite(g.loss))
        throw NumericError("mlp training diverged (non-finite loss); try a smaller learning rate");
      adam.step(net, g, params.rate);
    }
    if (holdout_rows.empty()) continue;
    const double score = balanced_accuracy(yh, net.predict(Xh));
    if (score > best_score) {
      best_score = score;
      best = net;
      best.best_epoch = epoch + 1;
      since_best = 0;
    } else if (++since_best >= params.patience) {
      ++epoch;
      break;
    }
  }
  if (holdout_rows.empty()) {
    best = net;
    best.best_epoch = epoch;
  }
  best.epochs_run = epoch;
  return best;
}

}  // namespace rootlab
