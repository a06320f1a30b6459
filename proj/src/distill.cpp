#include "rootlab/distill.hpp"

#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <sstream>

#include "rootlab/errors.hpp"
#include "rootlab/metrics.hpp"

namespace rootlab {

namespace {

constexpr std::uint64_t kImportanceStream = 0x7065726d;  // "perm"

std::string format_threshold(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", t);
  if (std::strtod(buf, nullptr) != t) std::snprintf(buf, sizeof buf, "%.17g", t);
  return buf;
}

void print_node(const DecisionTree& tree, const std::vector<std::string>& names, int id, int indent,
                std::ostringstream& os) {
  const TreeNode& n = tree.nodes()[static_cast<std::size_t>(id)];
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  if (n.is_leaf()) {
    const int cls = DecisionTree::majority(n);
    const double total = std::accumulate(n.value.begin(), n.value.end(), 0.0);
    char purity[32];
    std::snprintf(purity, sizeof purity, "%.4f", total > 0 ? n.value[static_cast<std::size_t>(cls)] / total : 0.0);
    os << pad << "predict class " << cls << "  # purity " << purity << ", n " << n.n_samples << "\n";
    return;
  }
  os << pad << "if " << names[static_cast<std::size_t>(n.feature)] << " <= " << format_threshold(n.threshold) << ":\n";
  print_node(tree, names, n.left, indent + 1, os);
  os << pad << "else:\n";
  print_node(tree, names, n.right, indent + 1, os);
}

struct RuleLine {
  int indent;
  std::string text;
};

class RuleParser {
 public:
  RuleParser(const std::string& rules, const std::vector<std::string>& names) : names_(names) {
    std::istringstream is(rules);
    std::string line;
    while (std::getline(is, line)) {
      if (line.find_first_not_of(' ') == std::string::npos) continue;
      const auto indent = line.find_first_not_of(' ');
      lines_.push_back({static_cast<int>(indent), line.substr(indent)});
    }
  }

  std::vector<TreeNode> parse() {
    parse_node(0);
    if (pos_ != lines_.size()) fail("trailing lines");
    return std::move(nodes_);
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw DataError("malformed rules near line " + std::to_string(pos_ + 1) + ": " + what);
  }

  int parse_node(int depth) {
    const int indent = 2 * depth;
    if (pos_ >= lines_.size()) fail("unexpected end");
    const RuleLine& l = lines_[pos_];
    if (l.indent != indent) fail("bad indentation");
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    if (l.text.rfind("predict class ", 0) == 0) {
      nodes_.back().value = {std::stod(l.text.substr(14))};
      ++pos_;
      return id;
    }
    if (l.text.rfind("if ", 0) != 0 || l.text.back() != ':') fail("expected 'if' or 'predict'");
    const auto op = l.text.find(" <= ");
    if (op == std::string::npos) fail("missing '<='");
    const std::string name = l.text.substr(3, op - 3);
    const auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) fail("unknown feature '" + name + "'");
    const int feature = static_cast<int>(it - names_.begin());
    const double threshold = std::strtod(l.text.substr(op + 4, l.text.size() - op - 5).c_str(), nullptr);
    ++pos_;
    const int left = parse_node(depth + 1);
    if (pos_ >= lines_.size() || lines_[pos_].indent != indent || lines_[pos_].text != "else:") fail("expected 'else:'");
    ++pos_;
    const int right = parse_node(depth + 1);
    TreeNode& n = nodes_[static_cast<std::size_t>(id)];
    n.feature = feature;
    n.threshold = threshold;
    n.left = left;
    n.right = right;
    return id;
  }

  const std::vector<std::string>& names_;
  std::vector<RuleLine> lines_;
  std::size_t pos_ = 0;
  std::vector<TreeNode> nodes_;
};

std::map<std::string, double> by_name(const std::vector<std::string>& names, const Eigen::VectorXd& v) {
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < names.size(); ++i) out[names[i]] = v(static_cast<Eigen::Index>(i));
  return out;
}

}  // namespace

std::vector<double> permutation_importance(const Predictor& predict, const Eigen::MatrixXd& X,
                                           const std::vector<int>& y, std::uint64_t seed, int repeats) {
  if (repeats < 1) throw DataError("permutation importance needs repeats >= 1");
  const double base = balanced_accuracy(y, predict(X));
  std::vector<double> drop(static_cast<std::size_t>(X.cols()), 0.0);
  std::vector<int> perm(static_cast<std::size_t>(X.rows()));
  for (int rep = 0; rep < repeats; ++rep) {
    std::mt19937_64 rng = row_stream(seed, static_cast<std::uint64_t>(rep), kImportanceStream);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Eigen::MatrixXd shuffled = X;
    for (Eigen::Index c = 0; c < X.cols(); ++c) {
      for (Eigen::Index r = 0; r < X.rows(); ++r) shuffled(r, c) = X(perm[static_cast<std::size_t>(r)], c);
      drop[static_cast<std::size_t>(c)] += base - balanced_accuracy(y, predict(shuffled));
      shuffled.col(c) = X.col(c);
    }
  }
  double total = 0.0;
  for (double& d : drop) {
    d = std::max(0.0, d / repeats);
    total += d;
  }
  if (total > 0.0)
    for (double& d : drop) d /= total;
  return drop;
}

std::string extract_rules(const DecisionTree& tree, const std::vector<std::string>& feature_names) {
  if (tree.nodes().empty()) throw DataError("tree is not fitted");
  if (static_cast<int>(feature_names.size()) != tree.n_features()) throw DataError("feature name count mismatch");
  std::ostringstream os;
  print_node(tree, feature_names, 0, 0, os);
  return os.str();
}

std::vector<int> evaluate_rules(const std::string& rules, const std::vector<std::string>& feature_names,
                                const Eigen::MatrixXd& X) {
  const std::vector<TreeNode> nodes = RuleParser(rules, feature_names).parse();
  std::vector<int> out(static_cast<std::size_t>(X.rows()));
  for (Eigen::Index r = 0; r < X.rows(); ++r) {
    int i = 0;
    while (!nodes[static_cast<std::size_t>(i)].is_leaf()) {
      const TreeNode& n = nodes[static_cast<std::size_t>(i)];
      i = X(r, n.feature) <= n.threshold ? n.left : n.right;
    }
    out[static_cast<std::size_t>(r)] = static_cast<int>(nodes[static_cast<std::size_t>(i)].value[0]);
  }
  return out;
}

nlohmann::json DistillReport::to_json() const {
  return {{"feature_names", feature_names},
          {"nn_test_balanced_accuracy", nn_test_balanced_accuracy},
          {"tree_fidelity", tree_fidelity},
          {"tree_standalone", tree_standalone},
          {"importance", importance},
          {"impurity_importance", impurity_importance},
          {"rules_text", rules_text},
          {"surrogate", surrogate.to_json()}};
}

DistillReport distill(const LabeledDataset& ds, const DistillConfig& config, const std::vector<std::string>& features) {
  if (ds.class_counts().size() < 2) throw DataError("distillation needs at least two classes");
  DistillReport rep;
  rep.feature_names = features.empty() ? ds.feature_names : features;
  const Eigen::MatrixXd X = ds.columns(rep.feature_names);
  const Fold split = stratified_split(ds.labels, config.test_fraction, config.seed);
  const auto rows_of = [&](const std::vector<int>& rows) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), X.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = X.row(rows[i]);
    return out;
  };
  const auto labels_of = [&](const std::vector<int>& rows) {
    std::vector<int> out;
    for (int r : rows) out.push_back(ds.labels[static_cast<std::size_t>(r)]);
    return out;
  };
  const Eigen::MatrixXd Xtr = rows_of(split.train), Xte = rows_of(split.test);
  const std::vector<int> ytr = labels_of(split.train), yte = labels_of(split.test);
  const int n_classes = ds.class_counts().rbegin()->first + 1;

  ModelSpec teacher_spec = ModelSpec::of(ModelFamily::kMlp);
  teacher_spec.mlp = config.teacher;
  const TrainedModel teacher = fit_model(teacher_spec, Xtr, ytr, rep.feature_names, config.seed, n_classes);
  const std::vector<int> teacher_train = teacher.predict(Xtr);
  const std::vector<int> teacher_test = teacher.predict(Xte);
  rep.nn_test_balanced_accuracy = balanced_accuracy(yte, teacher_test);

  rep.surrogate = fit_tree(Xtr, teacher_train, config.surrogate, n_classes);
  const std::vector<int> tree_test = rep.surrogate.predict(Xte);
  rep.tree_fidelity = agreement(tree_test, teacher_test);
  rep.tree_standalone = balanced_accuracy(yte, tree_test);

  const auto shares = permutation_importance([&](const Eigen::MatrixXd& M) { return rep.surrogate.predict(M); }, Xte,
                                             yte, config.seed, config.importance_repeats);
  rep.importance = by_name(rep.feature_names,
                           Eigen::Map<const Eigen::VectorXd>(shares.data(), static_cast<Eigen::Index>(shares.size())));
  rep.impurity_importance = by_name(rep.feature_names, rep.surrogate.impurity_importance());
  rep.rules_text = extract_rules(rep.surrogate, rep.feature_names);
  return rep;
}

}  // namespace rootlab
