#include "rootlab/model.hpp"

#include "rootlab/errors.hpp"

namespace rootlab {

namespace {

constexpr const char* kFormatTag = "rootlab-model";

bool standardized(ModelFamily f) { return f == ModelFamily::kLogReg || f == ModelFamily::kMlp; }

}  // namespace

std::string model_family_name(ModelFamily f) {
  switch (f) {
    case ModelFamily::kTree: return "tree";
    case ModelFamily::kForest: return "forest";
    case ModelFamily::kGbm: return "gbm";
    case ModelFamily::kLogReg: return "logreg";
    case ModelFamily::kMlp: return "mlp";
  }
  return "?";
}

ModelFamily parse_model_family(const std::string& name) {
  for (auto f : {ModelFamily::kTree, ModelFamily::kForest, ModelFamily::kGbm, ModelFamily::kLogReg, ModelFamily::kMlp})
    if (model_family_name(f) == name) return f;
  throw DataError("unknown model family '" + name + "' (expected tree, forest, gbm, logreg or mlp)");
}

nlohmann::json ModelSpec::to_json() const {
  nlohmann::json j{{"family", model_family_name(family)}};
  switch (family) {
    case ModelFamily::kTree:
      j["max_depth"] = tree.max_depth;
      j["min_leaf"] = tree.min_leaf;
      break;
    case ModelFamily::kForest:
      j["n_trees"] = forest.n_trees;
      j["max_depth"] = forest.max_depth;
      j["min_leaf"] = forest.min_leaf;
      j["bootstrap"] = forest.bootstrap;
      j["feature_subsampling"] = forest.feature_subsampling;
      break;
    case ModelFamily::kGbm:
      j["n_rounds"] = gbm.n_rounds;
      j["rate"] = gbm.rate;
      j["max_depth"] = gbm.max_depth;
      j["min_leaf"] = gbm.min_leaf;
      break;
    case ModelFamily::kLogReg:
      j["l2"] = logreg.l2;
      j["max_iters"] = logreg.max_iters;
      j["tolerance"] = logreg.tolerance;
      break;
    case ModelFamily::kMlp:
      j["hidden"] = mlp.hidden;
      j["rate"] = mlp.rate;
      j["batch"] = mlp.batch;
      j["max_epochs"] = mlp.max_epochs;
      j["patience"] = mlp.patience;
      j["holdout"] = mlp.holdout;
      break;
  }
  return j;
}

ModelSpec ModelSpec::from_json(const nlohmann::json& j) {
  ModelSpec s = of(parse_model_family(j.at("family").get<std::string>()));
  s.tree.max_depth = j.value("max_depth", s.tree.max_depth);
  s.tree.min_leaf = j.value("min_leaf", s.tree.min_leaf);
  s.forest.n_trees = j.value("n_trees", s.forest.n_trees);
  s.forest.max_depth = j.value("max_depth", s.forest.max_depth);
  s.forest.min_leaf = j.value("min_leaf", s.forest.min_leaf);
  s.forest.bootstrap = j.value("bootstrap", s.forest.bootstrap);
  s.forest.feature_subsampling = j.value("feature_subsampling", s.forest.feature_subsampling);
  s.gbm.n_rounds = j.value("n_rounds", s.gbm.n_rounds);
  s.gbm.rate = j.value("rate", s.gbm.rate);
  s.gbm.max_depth = j.value("max_depth", s.gbm.max_depth);
  s.gbm.min_leaf = j.value("min_leaf", s.gbm.min_leaf);
  s.logreg.l2 = j.value("l2", s.logreg.l2);
  s.logreg.max_iters = j.value("max_iters", s.logreg.max_iters);
  s.logreg.tolerance = j.value("tolerance", s.logreg.tolerance);
  s.mlp.hidden = j.value("hidden", s.mlp.hidden);
  s.mlp.rate = j.value("rate", s.mlp.rate);
  s.mlp.batch = j.value("batch", s.mlp.batch);
  s.mlp.max_epochs = j.value("max_epochs", s.mlp.max_epochs);
  s.mlp.patience = j.value("patience", s.mlp.patience);
  s.mlp.holdout = j.value("holdout", s.mlp.holdout);
  return s;
}

TrainedModel::TrainedModel(ModelFamily family, ModelParameters params, std::vector<std::string> feature_names,
                           std::optional<Standardizer> standardization, std::uint64_t train_seed)
    : family_(family),
      params_(std::move(params)),
      feature_names_(std::move(feature_names)),
      standardization_(std::move(standardization)),
      train_seed_(train_seed) {
  if (standardized(family_) != standardization_.has_value())
    throw DataError("standardization must be stored exactly for logreg and mlp models");
}

std::vector<int> TrainedModel::predict(const Eigen::MatrixXd& X) const {
  if (X.cols() != static_cast<Eigen::Index>(feature_names_.size()))
    throw DataError("model expects " + std::to_string(feature_names_.size()) + " features, got " +
                    std::to_string(X.cols()));
  const Eigen::MatrixXd Z = standardization_ ? standardization_->apply(X) : X;
  return std::visit([&](const auto& m) { return m.predict(Z); }, params_);
}

std::vector<int> TrainedModel::predict(const LabeledDataset& ds) const { return predict(ds.columns(feature_names_)); }

nlohmann::json TrainedModel::to_json() const {
  nlohmann::json j{{"format", kFormatTag},
                   {"version", kFormatVersion},
                   {"family", model_family_name(family_)},
                   {"feature_names", feature_names_},
                   {"train_seed", train_seed_},
                   {"parameters", std::visit([](const auto& m) { return m.to_json(); }, params_)}};
  if (standardization_) j["standardization"] = standardization_->to_json();
  return j;
}

TrainedModel TrainedModel::from_json(const nlohmann::json& j) {
  if (j.value("format", std::string()) != kFormatTag) throw DataError("not a rootlab model document");
  const int version = j.at("version").get<int>();
  if (version != kFormatVersion) throw DataError("unsupported model format version " + std::to_string(version));
  const ModelFamily family = parse_model_family(j.at("family").get<std::string>());
  const auto& p = j.at("parameters");
  ModelParameters params;
  switch (family) {
    case ModelFamily::kTree: params = DecisionTree::from_json(p); break;
    case ModelFamily::kForest: params = RandomForest::from_json(p); break;
    case ModelFamily::kGbm: params = GradientBoosting::from_json(p); break;
    case ModelFamily::kLogReg: params = LogisticRegression::from_json(p); break;
    case ModelFamily::kMlp: params = Mlp::from_json(p); break;
  }
  std::optional<Standardizer> st;
  if (j.contains("standardization")) st = Standardizer::from_json(j.at("standardization"));
  return TrainedModel(family, std::move(params), j.at("feature_names").get<std::vector<std::string>>(), std::move(st),
                      j.at("train_seed").get<std::uint64_t>());
}

TrainedModel fit_model(const ModelSpec& spec, const Eigen::MatrixXd& X, const std::vector<int>& y,
                       const std::vector<std::string>& feature_names, std::uint64_t seed, int n_classes) {
  if (X.cols() != static_cast<Eigen::Index>(feature_names.size()))
    throw DataError("feature name count does not match the matrix");
  if (static_cast<Eigen::Index>(y.size()) != X.rows()) throw DataError("label count does not match the matrix");
  switch (spec.family) {
    case ModelFamily::kTree:
      return {spec.family, fit_tree(X, y, spec.tree, n_classes), feature_names, std::nullopt, seed};
    case ModelFamily::kForest:
      return {spec.family, fit_forest(X, y, spec.forest, seed, n_classes, spec.jobs), feature_names, std::nullopt,
              seed};
    case ModelFamily::kGbm:
      return {spec.family, fit_gbm(X, y, spec.gbm, n_classes), feature_names, std::nullopt, seed};
    case ModelFamily::kLogReg: {
      Standardizer st = Standardizer::fit(X);
      auto m = fit_logreg(st.apply(X), y, spec.logreg, n_classes);
      return {spec.family, std::move(m), feature_names, std::move(st), seed};
    }
    case ModelFamily::kMlp: {
      Standardizer st = Standardizer::fit(X);
      auto m = fit_mlp(st.apply(X), y, spec.mlp, seed, n_classes);
      return {spec.family, std::move(m), feature_names, std::move(st), seed};
    }
  }
  throw DataError("unknown model family");
}

}  // namespace rootlab
