#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "rootlab/mlp.hpp"
#include "rootlab/tree.hpp"

namespace rootlab {

enum class StressProtocol { kOod, kEfficiency, kNoise };

std::string protocol_name(StressProtocol p);
StressProtocol parse_protocol(const std::string& name);

inline const std::string kRawNn = "raw_nn";
inline const std::string kInvariantTree = "invariant_tree";

// Columns the invariant tree sees: the discriminant ratio (degrees 2 and 3),
// the quartic invariants with the depressed coefficients and signs, or the
// critical-point family.
std::vector<std::string> invariant_features_for(int degree);

struct StressConfig {
  std::vector<int> degrees{2, 3, 4, 5};
  std::vector<double> ood_ranges{10, 20, 50, 100};
  std::vector<int> train_sizes{25, 50, 100, 500, 1000, 5000};
  std::vector<double> noise_sigmas{0, 0.1, 0.5, 1.0, 2.0};
  std::vector<std::uint64_t> seeds{0, 1, 2};
  int k_folds = 5;
  int pool_size = 10000;  // per (degree, seed) training pool
  int test_size = 5000;  // fresh evaluation sets
  double train_range = 10.0;
  MlpParams nn;
  TreeParams tree{4, 1, 0};
  int jobs = 1;

  void validate() const;
  nlohmann::json to_json() const;
  static StressConfig from_json(const nlohmann::json& j);
};

struct StressCell {
  StressProtocol protocol;
  int degree;
  std::string model;  // kRawNn or kInvariantTree
  double x;           // range, train size or sigma
  double mean = 0.0;
  double ci95 = 0.0;
  std::vector<double> scores;
};

struct StressReport {
  std::vector<StressCell> cells;
  int coverage_repairs = 0;  // tiny subsamples that needed a row per class added

  // Throws DataError when the cell is absent.
  const StressCell& cell(StressProtocol p, int degree, const std::string& model, double x) const;
  void merge(const StressReport& other);

  nlohmann::json to_json() const;
  static StressReport from_json(const nlohmann::json& j);
  // protocol,degree,model,x,mean,ci95,n
  std::string to_csv() const;
};

// Runs the selected protocols.  OOD and noise share one set of cross-validated
// models per (degree, seed); the efficiency sweep trains on subsamples of the
// pool and scores on the in-range test set.
StressReport run_stress(const StressConfig& config, const std::set<StressProtocol>& protocols);

StressReport ood_sweep(const StressConfig& config);
StressReport data_efficiency_sweep(const StressConfig& config);
StressReport noise_sweep(const StressConfig& config);

}  // namespace rootlab
