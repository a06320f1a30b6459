#include "rootlab/validation.hpp"

#include <cmath>
#include <numeric>

#include "rootlab/errors.hpp"
#include "rootlab/metrics.hpp"
#include "rootlab/parallel.hpp"

namespace rootlab {

EvalReport EvalReport::from_scores(std::vector<double> scores, int n_seeds, int k_folds) {
  EvalReport r;
  r.per_fold_scores = std::move(scores);
  r.n_seeds = n_seeds;
  r.k_folds = k_folds;
  const auto n = static_cast<double>(r.per_fold_scores.size());
  if (r.per_fold_scores.empty()) return r;
  r.mean = std::accumulate(r.per_fold_scores.begin(), r.per_fold_scores.end(), 0.0) / n;
  if (r.per_fold_scores.size() > 1) {
    double ss = 0.0;
    for (double s : r.per_fold_scores) ss += (s - r.mean) * (s - r.mean);
    r.ci95 = 1.96 * std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return r;
}

nlohmann::json EvalReport::to_json() const {
  return {{"per_fold_scores", per_fold_scores}, {"mean", mean}, {"ci95", ci95}, {"n_seeds", n_seeds},
          {"k_folds", k_folds}};
}

EvalReport EvalReport::from_json(const nlohmann::json& j) {
  return from_scores(j.at("per_fold_scores").get<std::vector<double>>(), j.at("n_seeds").get<int>(),
                     j.at("k_folds").get<int>());
}

std::vector<std::uint64_t> seed_range(std::uint64_t first, int count) {
  std::vector<std::uint64_t> out(static_cast<std::size_t>(std::max(0, count)));
  std::iota(out.begin(), out.end(), first);
  return out;
}

EvalReport cross_validate(const LabeledDataset& ds, const ModelSpec& spec, const std::vector<std::string>& features,
                          int k, const std::vector<std::uint64_t>& seeds, int jobs) {
  if (k < 2) throw DataError("cross-validation needs k >= 2");
  if (seeds.empty()) throw DataError("cross-validation needs at least one seed");
  const Eigen::MatrixXd X = ds.columns(features);
  const int n_classes = ds.class_counts().rbegin()->first + 1;

  std::vector<std::vector<Fold>> folds;
  for (auto seed : seeds) folds.push_back(stratified_kfold(ds.labels, k, seed));

  const int n_jobs = static_cast<int>(seeds.size()) * k;
  std::vector<double> scores(static_cast<std::size_t>(n_jobs));
  parallel_for(n_jobs, jobs, [&](int i) {
    const auto s = static_cast<std::size_t>(i / k);
    const Fold& f = folds[s][static_cast<std::size_t>(i % k)];
    Eigen::MatrixXd Xtr(static_cast<Eigen::Index>(f.train.size()), X.cols());
    std::vector<int> ytr;
    ytr.reserve(f.train.size());
    for (std::size_t r = 0; r < f.train.size(); ++r) {
      Xtr.row(static_cast<Eigen::Index>(r)) = X.row(f.train[r]);
      ytr.push_back(ds.labels[static_cast<std::size_t>(f.train[r])]);
    }
    Eigen::MatrixXd Xte(static_cast<Eigen::Index>(f.test.size()), X.cols());
    std::vector<int> yte;
    yte.reserve(f.test.size());
    for (std::size_t r = 0; r < f.test.size(); ++r) {
      Xte.row(static_cast<Eigen::Index>(r)) = X.row(f.test[r]);
      yte.push_back(ds.labels[static_cast<std::size_t>(f.test[r])]);
    }
    const std::uint64_t fit_seed = seeds[s] * 1000 + static_cast<std::uint64_t>(i % k);
    const TrainedModel model = fit_model(spec, Xtr, ytr, features, fit_seed, n_classes);
    scores[static_cast<std::size_t>(i)] = balanced_accuracy(yte, model.predict(Xte));
  });
  return EvalReport::from_scores(std::move(scores), static_cast<int>(seeds.size()), k);
}

}  // namespace rootlab
