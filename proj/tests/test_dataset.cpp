#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "rootlab/dataset.hpp"
#include "rootlab/roots.hpp"

namespace fs = std::filesystem;

namespace {

fs::path temp_path(const std::string& name) { return fs::temp_directory_path() / ("rootlab_test_" + name); }

}  // namespace

TEST_CASE("generation is a pure function of the config") {
  auto cfg = rootlab::DatasetConfig::for_degree(5, 300, 7);
  const auto a = rootlab::generate(cfg);
  const auto b = rootlab::generate(cfg);
  CHECK(a.features == b.features);
  CHECK(a.labels == b.labels);
  CHECK(a.feature_names.size() == 63);
  for (int y : a.labels) CHECK((y >= 0 && y <= 2));
  CHECK(a.features.allFinite());

  cfg.seed = 8;
  CHECK(rootlab::generate(cfg).features != a.features);
}

TEST_CASE("quadratic labels follow the discriminant") {
  const auto ds = rootlab::generate(rootlab::DatasetConfig::for_degree(2, 2000, 3));
  CHECK_FALSE(ds.config.monic);
  for (Eigen::Index r = 0; r < ds.rows(); ++r) {
    const double a = ds.coefficients(r, 0), b = ds.coefficients(r, 1), c = ds.coefficients(r, 2);
    CHECK((ds.labels[static_cast<std::size_t>(r)] == 0) == (b * b >= 4 * a * c));
  }
}

TEST_CASE("quintic class coverage and label audit") {
  const auto ds = rootlab::generate(rootlab::DatasetConfig::for_degree(5, 40000, 0));
  const auto counts = ds.class_counts();
  REQUIRE(counts.size() == 3);
  for (const auto& [cls, n] : counts) CHECK(n >= 400);

  int agree = 0;
  const int audit = 1000;
  for (int i = 0; i < audit; ++i) {
    const Eigen::Index row = static_cast<Eigen::Index>(i) * 40;
    const int exact = rootlab::exact_real_root_count(rootlab::to_rational(ds.polynomial(row)));
    agree += rootlab::class_label_for(5, exact) == ds.labels[static_cast<std::size_t>(row)];
  }
  CHECK(agree >= 999);
}

TEST_CASE("stratified k-fold") {
  std::vector<int> labels;
  for (int c = 0; c < 3; ++c)
    for (int i = 0; i < 100; ++i) labels.push_back(c);
  const auto folds = rootlab::stratified_kfold(labels, 5, 1);
  REQUIRE(folds.size() == 5);
  std::vector<int> seen(labels.size(), 0);
  for (const auto& f : folds) {
    int per_class[3] = {0, 0, 0};
    for (int r : f.test) {
      ++per_class[labels[static_cast<std::size_t>(r)]];
      ++seen[static_cast<std::size_t>(r)];
    }
    for (int c : per_class) CHECK(c == 20);
    CHECK(f.train.size() + f.test.size() == labels.size());
  }
  for (int s : seen) CHECK(s == 1);

  const auto again = rootlab::stratified_kfold(labels, 5, 1);
  for (std::size_t i = 0; i < folds.size(); ++i) CHECK(folds[i].test == again[i].test);

  labels.push_back(3);
  CHECK_THROWS_AS(rootlab::stratified_kfold(labels, 5, 1), rootlab::DataError);
}

TEST_CASE("stratified k-fold keeps proportions on imbalanced labels") {
  const auto ds = rootlab::generate(rootlab::DatasetConfig::for_degree(5, 3000, 4));
  const auto counts = ds.class_counts();
  const auto folds = rootlab::stratified_kfold(ds.labels, 5, 9);
  for (const auto& f : folds) {
    std::map<int, int> fc;
    for (int r : f.test) ++fc[ds.labels[static_cast<std::size_t>(r)]];
    for (const auto& [cls, n] : counts) CHECK(std::abs(fc[cls] - n / 5.0) <= 1.0);
  }
}

TEST_CASE("stratified subsample repairs class coverage") {
  std::vector<int> labels(1000, 1);
  labels[17] = 0;
  labels[500] = 2;
  bool repaired = false;
  const auto rows = rootlab::stratified_subsample(labels, 25, 3, &repaired);
  CHECK(rows.size() == 25);
  CHECK(repaired);
  std::set<int> classes;
  for (int r : rows) classes.insert(labels[static_cast<std::size_t>(r)]);
  CHECK(classes.size() == 3);
}

TEST_CASE("noise injection") {
  const auto ds = rootlab::generate(rootlab::DatasetConfig::for_degree(4, 200, 2));
  const auto same = rootlab::add_noise(ds, 0.0, 1);
  CHECK(same.features == ds.features);

  const auto n1 = rootlab::add_noise(ds, 0.5, 1);
  const auto n2 = rootlab::add_noise(ds, 0.5, 1);
  CHECK(n1.features == n2.features);
  CHECK(n1.labels == ds.labels);
  CHECK(n1.coefficients.col(0).isOnes());
  CHECK((n1.coefficients.col(1) - ds.coefficients.col(1)).norm() > 0.0);
  // Features are recomputed from the noisy coefficients.
  const auto fv = rootlab::dataset_features(n1.polynomial(5), n1.config.families);
  for (std::size_t j = 0; j < fv.values.size(); ++j)
    CHECK(n1.features(5, static_cast<Eigen::Index>(j)) == fv.values[j]);
  CHECK_THROWS_AS(rootlab::add_noise(ds, -1.0, 1), rootlab::DataError);
}

TEST_CASE("CSV round trip is lossless") {
  auto cfg = rootlab::DatasetConfig::for_degree(5, 50, 11);
  cfg.families = {rootlab::Family::kCriticalPoints};
  const auto ds = rootlab::generate(cfg);
  const auto path = temp_path(rootlab::default_csv_name(cfg));
  rootlab::write_csv(ds, path.string());

  std::ifstream is(path);
  std::string header;
  std::getline(is, header);
  CHECK(header.find("crit8") != std::string::npos);

  const auto back = rootlab::read_csv(path.string());
  CHECK(back.feature_names == ds.feature_names);
  CHECK(back.features == ds.features);
  CHECK(back.coefficients == ds.coefficients);
  CHECK(back.labels == ds.labels);
  CHECK(back.config.degree == 5);
  CHECK(back.config.families == cfg.families);
  fs::remove(path);

  const auto quad = rootlab::generate(rootlab::DatasetConfig::for_degree(2, 20, 1));
  const auto qpath = temp_path("quad.csv");
  rootlab::write_csv(quad, qpath.string());
  const auto qback = rootlab::read_csv(qpath.string());
  CHECK(qback.coefficients == quad.coefficients);
  CHECK_FALSE(qback.config.monic);
  fs::remove(qpath);
}

TEST_CASE("CSV errors name the row and column") {
  const auto path = temp_path("bad.csv");
  {
    std::ofstream os(path);
    os << "A,B,C,D,E\n1,2,3,4,5\n";
  }
  CHECK_THROWS_WITH_AS(rootlab::read_csv(path.string()), doctest::Contains("label"), rootlab::DataError);
  {
    std::ofstream os(path);
    os << "A,B,C,D,E,label\n1,2,3,4,5,0\n1,2,x,4,5,0\n";
  }
  CHECK_THROWS_WITH_AS(rootlab::read_csv(path.string()), doctest::Contains("row 3, column 'C'"), rootlab::DataError);
  fs::remove(path);
  CHECK(rootlab::default_csv_name(rootlab::DatasetConfig::for_degree(5, 40000, 0)) == "deg5_n40000_seed0.csv");
}
