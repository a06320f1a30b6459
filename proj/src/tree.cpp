#include "rootlab/tree.hpp"

#include <algorithm>
#include <numeric>

#include "rootlab/errors.hpp"

namespace rootlab {

namespace {

constexpr double kMinGain = 1e-9;

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double score = 0.0;  // criterion-specific, larger is better
};

double midpoint(double lo, double hi) {
  const double mid = lo + 0.5 * (hi - lo);
  return mid < hi ? mid : lo;
}

// Candidate features for one node: all, or a random subset without replacement
// (returned in ascending order so tie-breaking stays by lowest index).
std::vector<int> candidate_features(int n_features, int max_features, std::mt19937_64* rng) {
  std::vector<int> feats(static_cast<std::size_t>(n_features));
  std::iota(feats.begin(), feats.end(), 0);
  if (max_features <= 0 || max_features >= n_features) return feats;
  if (!rng) throw DataError("feature subsampling requires a random stream");
  for (int i = 0; i < max_features; ++i) {
    std::uniform_int_distribution<int> pick(i, n_features - 1);
    std::swap(feats[static_cast<std::size_t>(i)], feats[static_cast<std::size_t>(pick(*rng))]);
  }
  feats.resize(static_cast<std::size_t>(max_features));
  std::sort(feats.begin(), feats.end());
  return feats;
}

class ClassificationBuilder {
 public:
  ClassificationBuilder(const Eigen::MatrixXd& X, const std::vector<int>& y, const TreeParams& params, int n_classes,
                        std::mt19937_64* rng)
      : X_(X), y_(y), params_(params), k_(n_classes), rng_(rng) {}

  std::vector<TreeNode> build(std::vector<int> rows) {
    rows_ = std::move(rows);
    grow(0, static_cast<int>(rows_.size()), 0);
    return std::move(nodes_);
  }

 private:
  std::vector<double> counts(int begin, int end) const {
    std::vector<double> c(static_cast<std::size_t>(k_), 0.0);
    for (int i = begin; i < end; ++i) c[static_cast<std::size_t>(y_[static_cast<std::size_t>(rows_[static_cast<std::size_t>(i)])])] += 1.0;
    return c;
  }

  static double sum_sq_over_n(const std::vector<double>& c, double n) {
    double s = 0.0;
    for (double v : c) s += v * v;
    return s / n;
  }

  int grow(int begin, int end, int depth) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    const std::vector<double> c = counts(begin, end);
    const double n = static_cast<double>(end - begin);
    const double parent_score = sum_sq_over_n(c, n);
    {
      TreeNode& node = nodes_.back();
      node.n_samples = end - begin;
      node.impurity = 1.0 - parent_score / n;
      node.value = c;
    }
    const bool pure = std::count_if(c.begin(), c.end(), [](double v) { return v > 0; }) <= 1;
    const bool depth_ok = params_.max_depth < 0 || depth < params_.max_depth;
    if (pure || !depth_ok || end - begin < 2 * std::max(1, params_.min_leaf)) return id;

    const Split best = find_split(begin, end, parent_score);
    if (best.feature < 0) return id;

    const auto mid_it = std::stable_partition(
        rows_.begin() + begin, rows_.begin() + end,
        [&](int r) { return X_(r, best.feature) <= best.threshold; });
    const int mid = static_cast<int>(mid_it - rows_.begin());

    const int left = grow(begin, mid, depth + 1);
    const int right = grow(mid, end, depth + 1);
    TreeNode& node = nodes_[static_cast<std::size_t>(id)];
    node.feature = best.feature;
    node.threshold = best.threshold;
    node.left = left;
    node.right = right;
    return id;
  }

  Split find_split(int begin, int end, double parent_score) {
    const int n = end - begin;
    const int min_leaf = std::max(1, params_.min_leaf);
    Split best;
    best.score = parent_score + kMinGain;
    std::vector<std::pair<double, int>> buf(static_cast<std::size_t>(n));
    std::vector<double> left(static_cast<std::size_t>(k_)), right;
    const std::vector<double> total = counts(begin, end);

    for (int f : candidate_features(static_cast<int>(X_.cols()), params_.max_features, rng_)) {
      for (int i = 0; i < n; ++i) {
        const int r = rows_[static_cast<std::size_t>(begin + i)];
        buf[static_cast<std::size_t>(i)] = {X_(r, f), y_[static_cast<std::size_t>(r)]};
      }
      std::sort(buf.begin(), buf.end());
      std::fill(left.begin(), left.end(), 0.0);
      right = total;
      double left_sq = 0.0, right_sq = 0.0;
      for (double v : right) right_sq += v * v;
      for (int i = 0; i + 1 < n; ++i) {
        const auto cls = static_cast<std::size_t>(buf[static_cast<std::size_t>(i)].second);
        left_sq += 2.0 * left[cls] + 1.0;
        right_sq -= 2.0 * right[cls] - 1.0;
        left[cls] += 1.0;
        right[cls] -= 1.0;
        const int n_left = i + 1;
        if (n_left < min_leaf) continue;
        if (n - n_left < min_leaf) break;
        const double v = buf[static_cast<std::size_t>(i)].first;
        const double next = buf[static_cast<std::size_t>(i + 1)].first;
        if (!(v < next)) continue;
        const double score = left_sq / n_left + right_sq / (n - n_left);
        if (score > best.score) {
          best.score = score;
          best.feature = f;
          best.threshold = midpoint(v, next);
        }
      }
    }
    return best;
  }

  const Eigen::MatrixXd& X_;
  const std::vector<int>& y_;
  TreeParams params_;
  int k_;
  std::mt19937_64* rng_;
  std::vector<int> rows_;
  std::vector<TreeNode> nodes_;
};

class RegressionBuilder {
 public:
  RegressionBuilder(const Eigen::MatrixXd& X, const Eigen::VectorXd& t, const TreeParams& params,
                    const LeafValueFn& leaf_value)
      : X_(X), t_(t), params_(params), leaf_value_(leaf_value) {}

  std::vector<TreeNode> build() {
    rows_.resize(static_cast<std::size_t>(X_.rows()));
    std::iota(rows_.begin(), rows_.end(), 0);
    grow(0, static_cast<int>(rows_.size()), 0);
    return std::move(nodes_);
  }

 private:
  int grow(int begin, int end, int depth) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    double sum = 0.0, sq = 0.0;
    for (int i = begin; i < end; ++i) {
      const double v = t_(rows_[static_cast<std::size_t>(i)]);
      sum += v;
      sq += v * v;
    }
    const double n = static_cast<double>(end - begin);
    {
      TreeNode& node = nodes_.back();
      node.n_samples = end - begin;
      node.impurity = sq / n - (sum / n) * (sum / n);
    }
    const bool depth_ok = params_.max_depth < 0 || depth < params_.max_depth;
    Split best;
    if (depth_ok && end - begin >= 2 * std::max(1, params_.min_leaf)) best = find_split(begin, end, sum * sum / n);

    if (best.feature < 0) {
      const std::span<const int> leaf_rows(rows_.data() + begin, static_cast<std::size_t>(end - begin));
      nodes_[static_cast<std::size_t>(id)].value = {leaf_value_ ? leaf_value_(leaf_rows) : sum / n};
      return id;
    }
    const auto mid_it = std::stable_partition(
        rows_.begin() + begin, rows_.begin() + end,
        [&](int r) { return X_(r, best.feature) <= best.threshold; });
    const int mid = static_cast<int>(mid_it - rows_.begin());
    const int left = grow(begin, mid, depth + 1);
    const int right = grow(mid, end, depth + 1);
    TreeNode& node = nodes_[static_cast<std::size_t>(id)];
    node.feature = best.feature;
    node.threshold = best.threshold;
    node.left = left;
    node.right = right;
    return id;
  }

  Split find_split(int begin, int end, double parent_score) {
    const int n = end - begin;
    const int min_leaf = std::max(1, params_.min_leaf);
    Split best;
    best.score = parent_score + kMinGain * (1.0 + std::abs(parent_score));
    std::vector<std::pair<double, double>> buf(static_cast<std::size_t>(n));
    double total = 0.0;
    for (int i = begin; i < end; ++i) total += t_(rows_[static_cast<std::size_t>(i)]);
    for (int f = 0; f < X_.cols(); ++f) {
      for (int i = 0; i < n; ++i) {
        const int r = rows_[static_cast<std::size_t>(begin + i)];
        buf[static_cast<std::size_t>(i)] = {X_(r, f), t_(r)};
      }
      std::sort(buf.begin(), buf.end());
      double left = 0.0;
      for (int i = 0; i + 1 < n; ++i) {
        left += buf[static_cast<std::size_t>(i)].second;
        const int n_left = i + 1;
        if (n_left < min_leaf) continue;
        if (n - n_left < min_leaf) break;
        const double v = buf[static_cast<std::size_t>(i)].first;
        const double next = buf[static_cast<std::size_t>(i + 1)].first;
        if (!(v < next)) continue;
        const double right = total - left;
        const double score = left * left / n_left + right * right / (n - n_left);
        if (score > best.score) {
          best.score = score;
          best.feature = f;
          best.threshold = midpoint(v, next);
        }
      }
    }
    return best;
  }

  const Eigen::MatrixXd& X_;
  const Eigen::VectorXd& t_;
  TreeParams params_;
  const LeafValueFn& leaf_value_;
  std::vector<int> rows_;
  std::vector<TreeNode> nodes_;
};

nlohmann::json nodes_to_json(const std::vector<TreeNode>& nodes) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& n : nodes) {
    arr.push_back({{"feature", n.feature},
                   {"threshold", n.threshold},
                   {"left", n.left},
                   {"right", n.right},
                   {"n_samples", n.n_samples},
                   {"impurity", n.impurity},
                   {"value", n.value}});
  }
  return arr;
}

std::vector<TreeNode> nodes_from_json(const nlohmann::json& arr) {
  std::vector<TreeNode> nodes;
  for (const auto& j : arr) {
    TreeNode n;
    n.feature = j.at("feature").get<int>();
    n.threshold = j.at("threshold").get<double>();
    n.left = j.at("left").get<int>();
    n.right = j.at("right").get<int>();
    n.n_samples = j.at("n_samples").get<int>();
    n.impurity = j.at("impurity").get<double>();
    n.value = j.at("value").get<std::vector<double>>();
    nodes.push_back(std::move(n));
  }
  return nodes;
}

}  // namespace

int DecisionTree::majority(const TreeNode& leaf) {
  return static_cast<int>(std::max_element(leaf.value.begin(), leaf.value.end()) - leaf.value.begin());
}

int DecisionTree::depth() const {
  std::vector<int> d(nodes_.size(), 0);
  int deepest = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const TreeNode& n = nodes_[i];
    if (n.is_leaf()) {
      deepest = std::max(deepest, d[i]);
      continue;
    }
    d[static_cast<std::size_t>(n.left)] = d[i] + 1;
    d[static_cast<std::size_t>(n.right)] = d[i] + 1;
  }
  return deepest;
}

std::vector<int> DecisionTree::predict(const Eigen::MatrixXd& X) const {
  if (X.cols() != n_features_) throw DataError("tree expects " + std::to_string(n_features_) + " features");
  std::vector<int> out(static_cast<std::size_t>(X.rows()));
  for (Eigen::Index r = 0; r < X.rows(); ++r) out[static_cast<std::size_t>(r)] = predict_row(X.row(r));
  return out;
}

Eigen::VectorXd DecisionTree::impurity_importance() const {
  Eigen::VectorXd imp = Eigen::VectorXd::Zero(n_features_);
  for (const auto& n : nodes_) {
    if (n.is_leaf()) continue;
    const TreeNode& l = nodes_[static_cast<std::size_t>(n.left)];
    const TreeNode& r = nodes_[static_cast<std::size_t>(n.right)];
    imp(n.feature) += n.n_samples * n.impurity - l.n_samples * l.impurity - r.n_samples * r.impurity;
  }
  const double total = imp.sum();
  if (total > 0.0) imp /= total;
  return imp;
}

nlohmann::json DecisionTree::to_json() const {
  return {{"n_classes", n_classes_}, {"n_features", n_features_}, {"nodes", nodes_to_json(nodes_)}};
}

DecisionTree DecisionTree::from_json(const nlohmann::json& j) {
  return DecisionTree(nodes_from_json(j.at("nodes")), j.at("n_classes").get<int>(), j.at("n_features").get<int>());
}

DecisionTree fit_tree(const Eigen::MatrixXd& X, const std::vector<int>& y, const TreeParams& params, int n_classes,
                      std::span<const int> rows, std::mt19937_64* rng) {
  if (X.rows() == 0) throw DataError("fit_tree: empty training set");
  if (static_cast<Eigen::Index>(y.size()) != X.rows()) throw DataError("fit_tree: label count mismatch");
  const int max_label = *std::max_element(y.begin(), y.end());
  if (*std::min_element(y.begin(), y.end()) < 0) throw DataError("fit_tree: negative class label");
  const int k = std::max(n_classes, max_label + 1);
  std::vector<int> idx;
  if (rows.empty()) {
    idx.resize(y.size());
    std::iota(idx.begin(), idx.end(), 0);
  } else {
    idx.assign(rows.begin(), rows.end());
  }
  ClassificationBuilder builder(X, y, params, k, rng);
  return DecisionTree(builder.build(std::move(idx)), k, static_cast<int>(X.cols()));
}

Eigen::VectorXd RegressionTree::predict(const Eigen::MatrixXd& X) const {
  Eigen::VectorXd out(X.rows());
  for (Eigen::Index r = 0; r < X.rows(); ++r) out(r) = predict_row(X.row(r));
  return out;
}

nlohmann::json RegressionTree::to_json() const { return {{"nodes", nodes_to_json(nodes_)}}; }

RegressionTree RegressionTree::from_json(const nlohmann::json& j) { return RegressionTree(nodes_from_json(j.at("nodes"))); }

RegressionTree fit_regression_tree(const Eigen::MatrixXd& X, const Eigen::VectorXd& target, const TreeParams& params,
                                   const LeafValueFn& leaf_value) {
  if (X.rows() == 0) throw DataError("fit_regression_tree: empty training set");
  RegressionBuilder builder(X, target, params, leaf_value);
  return RegressionTree(builder.build());
}

}  // namespace rootlab
