#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rootlab/features.hpp"
#include "rootlab/polynomial.hpp"

namespace rootlab {

struct DatasetConfig {
  int degree = 5;
  int n_samples = 40000;
  double lo = -10.0;
  double hi = 10.0;
  std::uint64_t seed = 0;
  // Leading coefficient forced to 1.  The quadratic keeps a free a.
  bool monic = true;
  std::set<Family> families{kAllFamilies.begin(), kAllFamilies.end()};

  static DatasetConfig for_degree(int degree, int n_samples, std::uint64_t seed);
  void validate() const;
};

struct LabeledDataset {
  DatasetConfig config;
  std::vector<std::string> feature_names;
  Eigen::MatrixXd features;      // rows x columns, aligned with feature_names
  Eigen::MatrixXd coefficients;  // rows x (degree + 1), highest degree first
  std::vector<int> labels;
  int n_resampled = 0;

  Eigen::Index rows() const { return features.rows(); }
  int degree() const { return config.degree; }
  std::map<int, int> class_counts() const;
  Polynomial polynomial(Eigen::Index row) const;

  // Index of a named column; throws DataError when absent.
  Eigen::Index column(const std::string& name) const;
  Eigen::MatrixXd columns(const std::vector<std::string>& names) const;
  LabeledDataset subset(const std::vector<int>& rows) const;
};

// Per-row random stream derived from (seed, row, stream tag).
std::mt19937_64 row_stream(std::uint64_t seed, std::uint64_t row, std::uint64_t tag = 0);

// Seeded i.i.d. uniform coefficients, labeled by the numeric root profile.
LabeledDataset generate(const DatasetConfig& config);

// Builds a dataset from explicit polynomials (features and labels recomputed).
LabeledDataset from_polynomials(const DatasetConfig& config, const std::vector<Polynomial>& polys);

struct Fold {
  std::vector<int> train;
  std::vector<int> test;
};

// k disjoint, covering test folds with per-class counts within one sample of
// the global proportions.  Throws DataError if a class has fewer than k rows.
std::vector<Fold> stratified_kfold(const std::vector<int>& labels, int k, std::uint64_t seed);

// Stratified train/test split with the given test fraction.
Fold stratified_split(const std::vector<int>& labels, double test_fraction, std::uint64_t seed);

// Stratified subsample of n rows; every class present in `labels` keeps at
// least one row.  `repaired` reports whether coverage repair was needed.
std::vector<int> stratified_subsample(const std::vector<int>& labels, int n, std::uint64_t seed,
                                      bool* repaired = nullptr);

// Gaussian noise on every raw coefficient (leading 1 of monic rows untouched);
// features recomputed, labels kept from the clean polynomials.
LabeledDataset add_noise(const LabeledDataset& ds, double sigma, std::uint64_t seed);

// Header = feature names + "label"; values with 17 significant digits.
void write_csv(const LabeledDataset& ds, const std::string& path);
LabeledDataset read_csv(const std::string& path);

// deg{d}_n{n}_seed{s}.csv
std::string default_csv_name(const DatasetConfig& config);

}  // namespace rootlab
