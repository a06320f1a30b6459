#include <random>

#include "doctest.h"
#include "rootlab/distill.hpp"
#include "rootlab/errors.hpp"
#include "rootlab/metrics.hpp"

using namespace rootlab;

namespace {

Eigen::MatrixXd random_matrix(int n, int f, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  Eigen::MatrixXd X(n, f);
  for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = u(rng);
  return X;
}

std::vector<int> labels_from(const Eigen::MatrixXd& X) {
  std::vector<int> y;
  for (Eigen::Index r = 0; r < X.rows(); ++r) y.push_back(X(r, 0) > 0.3 ? (X(r, 2) > -1.0 ? 2 : 1) : 0);
  return y;
}

}  // namespace

TEST_CASE("depth-0 rules are a single prediction") {
  const Eigen::MatrixXd X = random_matrix(30, 2, 1);
  const auto tree = fit_tree(X, std::vector<int>(30, 2), TreeParams{});
  const std::string rules = extract_rules(tree, {"u", "v"});
  CHECK(std::count(rules.begin(), rules.end(), '\n') == 1);
  CHECK(rules.rfind("predict class 2", 0) == 0);
  CHECK(evaluate_rules(rules, {"u", "v"}, X) == std::vector<int>(30, 2));
}

TEST_CASE("printed rules reproduce the tree exactly") {
  for (unsigned seed = 0; seed < 5; ++seed) {
    const Eigen::MatrixXd X = random_matrix(400, 3, seed);
    const auto y = labels_from(X);
    const auto tree = fit_tree(X, y, TreeParams{5, 1, 0});
    const std::vector<std::string> names{"p", "q", "r"};
    const std::string rules = extract_rules(tree, names);
    CHECK(evaluate_rules(rules, names, X) == tree.predict(X));
    // Rows sitting exactly on either side of every threshold.
    Eigen::MatrixXd edge(2 * static_cast<Eigen::Index>(tree.nodes().size()), 3);
    edge.setZero();
    Eigen::Index k = 0;
    for (const auto& n : tree.nodes()) {
      if (n.is_leaf()) continue;
      edge(k++, n.feature) = n.threshold;
      edge(k++, n.feature) = std::nextafter(n.threshold, 1e300);
    }
    edge.conservativeResize(k, 3);
    CHECK(evaluate_rules(rules, names, edge) == tree.predict(edge));
  }
  CHECK_THROWS_AS(evaluate_rules("if zz <= 1:\n  predict class 0\nelse:\n  predict class 1\n", {"p"}, random_matrix(2, 1, 0)),
                  DataError);
}

TEST_CASE("rules show short thresholds when they read back exactly") {
  Eigen::MatrixXd X(4, 1);
  X << 0.0, 1.0, 2.0, 3.0;
  const auto tree = fit_tree(X, {0, 0, 1, 1}, TreeParams{1, 1, 0});
  const std::string rules = extract_rules(tree, {"crit8"});
  CHECK(rules.find("if crit8 <= 1.5:") != std::string::npos);
  CHECK(rules.find("purity 1.0000") != std::string::npos);
}

TEST_CASE("permutation importance") {
  Eigen::MatrixXd X = random_matrix(600, 4, 3);
  X.col(1).setConstant(2.5);
  const auto y = labels_from(X);
  const auto tree = fit_tree(X, y, TreeParams{6, 1, 0});
  const Predictor pred = [&](const Eigen::MatrixXd& M) { return tree.predict(M); };
  const auto shares = permutation_importance(pred, X, y, 9, 3);
  CHECK(shares[1] == 0.0);
  CHECK(std::accumulate(shares.begin(), shares.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(shares[0] > shares[3]);
  for (double s : shares) CHECK((s >= 0.0 && s <= 1.0));

  // Reordering the columns reorders the shares and nothing else.
  const std::vector<int> order{2, 0, 3, 1};
  Eigen::MatrixXd Xp(X.rows(), 4);
  for (int c = 0; c < 4; ++c) Xp.col(c) = X.col(order[static_cast<std::size_t>(c)]);
  const Predictor pred_p = [&](const Eigen::MatrixXd& M) {
    Eigen::MatrixXd back(M.rows(), 4);
    for (int c = 0; c < 4; ++c) back.col(order[static_cast<std::size_t>(c)]) = M.col(c);
    return tree.predict(back);
  };
  const auto shares_p = permutation_importance(pred_p, Xp, y, 9, 3);
  for (int c = 0; c < 4; ++c) CHECK(shares_p[static_cast<std::size_t>(c)] == doctest::Approx(shares[static_cast<std::size_t>(order[static_cast<std::size_t>(c)])]));

  CHECK_THROWS_AS(permutation_importance(pred, X, y, 9, 0), DataError);
  const auto flat = permutation_importance([](const Eigen::MatrixXd& M) { return std::vector<int>(static_cast<std::size_t>(M.rows()), 0); }, X, y, 1, 2);
  for (double s : flat) CHECK(s == 0.0);
}

TEST_CASE("a surrogate of a constant teacher agrees everywhere") {
  const Eigen::MatrixXd X = random_matrix(200, 3, 4);
  const std::vector<int> teacher(200, 1);
  const auto tree = fit_tree(X, teacher, TreeParams{4, 20, 0});
  CHECK(agreement(tree.predict(X), teacher) == 1.0);
}

TEST_CASE("surrogate training fidelity grows with depth") {
  const Eigen::MatrixXd X = random_matrix(800, 3, 5);
  const auto y = labels_from(X);
  double prev = 0.0;
  for (int depth = 0; depth <= 6; ++depth) {
    const auto tree = fit_tree(X, y, TreeParams{depth, 20, 0});
    const double fid = agreement(tree.predict(X), y);
    CHECK(fid >= prev);
    prev = fid;
  }
}

TEST_CASE("distillation end to end") {
  auto cfg = DatasetConfig::for_degree(5, 3000, 2);
  cfg.families = {Family::kCriticalPoints, Family::kNewton};
  const auto ds = generate(cfg);
  DistillConfig dc;
  dc.teacher.hidden = {8};
  dc.teacher.max_epochs = 20;
  dc.importance_repeats = 2;
  const auto rep = distill(ds, dc);
  for (double v : {rep.nn_test_balanced_accuracy, rep.tree_fidelity, rep.tree_standalone}) CHECK((v >= 0.0 && v <= 1.0));
  double total = 0.0;
  for (const auto& [name, share] : rep.importance) total += share;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rep.importance.size() == ds.feature_names.size());
  CHECK(rep.surrogate.depth() <= 4);
  const auto j = rep.to_json();
  CHECK(j.at("rules_text").get<std::string>() == rep.rules_text);
  CHECK(j.contains("tree_fidelity"));
  const auto again = distill(ds, dc);
  CHECK(again.to_json() == j);

  const auto single = ds.subset(std::vector<int>(10, 0));
  CHECK_THROWS_AS(distill(single, dc), DataError);
}
