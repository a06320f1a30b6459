#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "rootlab/dataset.hpp"
#include "rootlab/model.hpp"

namespace rootlab {

struct EvalReport {
  std::vector<double> per_fold_scores;
  double mean = 0.0;
  double ci95 = 0.0;  // 1.96 * sd / sqrt(number of fold scores)
  int n_seeds = 0;
  int k_folds = 0;

  static EvalReport from_scores(std::vector<double> scores, int n_seeds, int k_folds);
  nlohmann::json to_json() const;
  static EvalReport from_json(const nlohmann::json& j);
};

// For each seed: stratified k-fold on ds, fit on the train rows using the
// named feature columns, balanced accuracy on the test rows.  Folds run on up
// to `jobs` threads; scores are ordered by (seed, fold).
EvalReport cross_validate(const LabeledDataset& ds, const ModelSpec& spec, const std::vector<std::string>& features,
                          int k, const std::vector<std::uint64_t>& seeds, int jobs = 1);

std::vector<std::uint64_t> seed_range(std::uint64_t first, int count);

}  // namespace rootlab
