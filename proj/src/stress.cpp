#include "rootlab/stress.hpp"

#include <cstdio>
#include <map>
#include <sstream>
#include <tuple>

#include "rootlab/dataset.hpp"
#include "rootlab/errors.hpp"
#include "rootlab/metrics.hpp"
#include "rootlab/model.hpp"
#include "rootlab/parallel.hpp"
#include "rootlab/roots.hpp"
#include "rootlab/validation.hpp"

namespace rootlab {

namespace {

using CellKey = std::tuple<StressProtocol, int, std::string, double>;
using ScoreTable = std::map<CellKey, std::vector<double>>;

template <typename T>
void require_increasing(const std::vector<T>& v, const char* what) {
  if (v.empty()) throw DataError(std::string("stress config: ") + what + " is empty");
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i - 1] < v[i])) throw DataError(std::string("stress config: ") + what + " must be strictly increasing");
}

struct TrainedPair {
  TrainedModel nn;
  TrainedModel tree;
};

TrainedPair train_pair(const StressConfig& cfg, const LabeledDataset& train, std::uint64_t seed) {
  const int k = class_count_for(train.degree());
  ModelSpec nn_spec = ModelSpec::of(ModelFamily::kMlp);
  nn_spec.mlp = cfg.nn;
  ModelSpec tree_spec = ModelSpec::of(ModelFamily::kTree);
  tree_spec.tree = cfg.tree;
  const auto raw = raw_coefficient_names(train.degree());
  const auto inv = invariant_features_for(train.degree());
  return {fit_model(nn_spec, train.columns(raw), train.labels, raw, seed, k),
          fit_model(tree_spec, train.columns(inv), train.labels, inv, seed, k)};
}

void score_pair(const TrainedPair& m, const LabeledDataset& test, StressProtocol p, double x, ScoreTable& out) {
  out[{p, test.degree(), kRawNn, x}].push_back(balanced_accuracy(test.labels, m.nn.predict(test)));
  out[{p, test.degree(), kInvariantTree, x}].push_back(balanced_accuracy(test.labels, m.tree.predict(test)));
}

DatasetConfig stress_dataset(int degree, int n, double range, std::uint64_t seed) {
  DatasetConfig c = DatasetConfig::for_degree(degree, n, seed);
  c.lo = -range;
  c.hi = range;
  if (degree == 5) c.families = {Family::kCriticalPoints};
  return c;
}

struct UnitResult {
  ScoreTable scores;
  int repairs = 0;
};

UnitResult run_unit(const StressConfig& cfg, const std::set<StressProtocol>& protocols, int degree,
                    std::uint64_t seed) {
  UnitResult res;
  const std::uint64_t base = seed * 1000 + static_cast<std::uint64_t>(degree) * 10;
  const LabeledDataset pool = generate(stress_dataset(degree, cfg.pool_size, cfg.train_range, base));
  const LabeledDataset test = generate(stress_dataset(degree, cfg.test_size, cfg.train_range, base + 1));

  if (protocols.count(StressProtocol::kOod) || protocols.count(StressProtocol::kNoise)) {
    std::vector<LabeledDataset> ood_sets;
    if (protocols.count(StressProtocol::kOod))
      for (double r : cfg.ood_ranges)
        ood_sets.push_back(r == cfg.train_range ? test : generate(stress_dataset(degree, cfg.test_size, r, base + 1)));
    std::vector<LabeledDataset> noisy_sets;
    if (protocols.count(StressProtocol::kNoise))
      for (double s : cfg.noise_sigmas) noisy_sets.push_back(add_noise(test, s, base + 2));

    const auto folds = stratified_kfold(pool.labels, cfg.k_folds, seed);
    for (int f = 0; f < cfg.k_folds; ++f) {
      const TrainedPair m = train_pair(cfg, pool.subset(folds[static_cast<std::size_t>(f)].train), base * 100 + static_cast<std::uint64_t>(f));
      for (std::size_t i = 0; i < ood_sets.size(); ++i)
        score_pair(m, ood_sets[i], StressProtocol::kOod, cfg.ood_ranges[i], res.scores);
      for (std::size_t i = 0; i < noisy_sets.size(); ++i)
        score_pair(m, noisy_sets[i], StressProtocol::kNoise, cfg.noise_sigmas[i], res.scores);
    }
  }

  if (protocols.count(StressProtocol::kEfficiency)) {
    for (int n : cfg.train_sizes) {
      for (int r = 0; r < cfg.k_folds; ++r) {
        const std::uint64_t sub_seed = base * 100 + 50 + static_cast<std::uint64_t>(r);
        bool repaired = false;
        const auto rows = stratified_subsample(pool.labels, n, sub_seed, &repaired);
        res.repairs += repaired;
        const TrainedPair m = train_pair(cfg, pool.subset(rows), sub_seed);
        score_pair(m, test, StressProtocol::kEfficiency, n, res.scores);
      }
    }
  }
  return res;
}

}  // namespace

std::string protocol_name(StressProtocol p) {
  switch (p) {
    case StressProtocol::kOod: return "ood";
    case StressProtocol::kEfficiency: return "efficiency";
    case StressProtocol::kNoise: return "noise";
  }
  return "?";
}

StressProtocol parse_protocol(const std::string& name) {
  for (auto p : {StressProtocol::kOod, StressProtocol::kEfficiency, StressProtocol::kNoise})
    if (protocol_name(p) == name) return p;
  throw DataError("unknown stress protocol '" + name + "' (expected ood, efficiency or noise)");
}

std::vector<std::string> invariant_features_for(int degree) {
  switch (degree) {
    case 2:
    case 3: return {"disc_ratio"};
    case 4: return discriminant_feature_names(4);
    case 5: return family_feature_names(Family::kCriticalPoints);
    default: throw DataError("no invariant feature set for degree " + std::to_string(degree));
  }
}

void StressConfig::validate() const {
  for (int d : degrees) invariant_features_for(d);
  require_increasing(degrees, "degrees");
  require_increasing(ood_ranges, "ood_ranges");
  require_increasing(train_sizes, "train_sizes");
  require_increasing(noise_sigmas, "noise_sigmas");
  if (seeds.empty()) throw DataError("stress config: seeds is empty");
  if (ood_ranges.front() != train_range) throw DataError("stress config: the first OOD range must equal the training range");
  if (noise_sigmas.front() < 0.0) throw DataError("stress config: noise sigmas must be non-negative");
  if (train_sizes.front() < 1 || train_sizes.back() > pool_size)
    throw DataError("stress config: train sizes must lie in [1, pool_size]");
  if (k_folds < 2) throw DataError("stress config: k_folds must be at least 2");
  if (test_size < 1) throw DataError("stress config: test_size must be positive");
}

nlohmann::json StressConfig::to_json() const {
  return {{"degrees", degrees},
          {"ood_ranges", ood_ranges},
          {"train_sizes", train_sizes},
          {"noise_sigmas", noise_sigmas},
          {"seeds", seeds},
          {"k_folds", k_folds},
          {"pool_size", pool_size},
          {"test_size", test_size},
          {"train_range", train_range},
          {"nn", {{"hidden", nn.hidden}, {"rate", nn.rate}, {"batch", nn.batch}, {"max_epochs", nn.max_epochs},
                  {"patience", nn.patience}, {"holdout", nn.holdout}}},
          {"tree", {{"max_depth", tree.max_depth}, {"min_leaf", tree.min_leaf}}}};
}

StressConfig StressConfig::from_json(const nlohmann::json& j) {
  StressConfig c;
  c.degrees = j.value("degrees", c.degrees);
  c.ood_ranges = j.value("ood_ranges", c.ood_ranges);
  c.train_sizes = j.value("train_sizes", c.train_sizes);
  c.noise_sigmas = j.value("noise_sigmas", c.noise_sigmas);
  c.seeds = j.value("seeds", c.seeds);
  c.k_folds = j.value("k_folds", c.k_folds);
  c.pool_size = j.value("pool_size", c.pool_size);
  c.test_size = j.value("test_size", c.test_size);
  c.train_range = j.value("train_range", c.train_range);
  if (j.contains("nn")) {
    const auto& n = j.at("nn");
    c.nn.hidden = n.value("hidden", c.nn.hidden);
    c.nn.rate = n.value("rate", c.nn.rate);
    c.nn.batch = n.value("batch", c.nn.batch);
    c.nn.max_epochs = n.value("max_epochs", c.nn.max_epochs);
    c.nn.patience = n.value("patience", c.nn.patience);
    c.nn.holdout = n.value("holdout", c.nn.holdout);
  }
  if (j.contains("tree")) {
    c.tree.max_depth = j.at("tree").value("max_depth", c.tree.max_depth);
    c.tree.min_leaf = j.at("tree").value("min_leaf", c.tree.min_leaf);
  }
  return c;
}

const StressCell& StressReport::cell(StressProtocol p, int degree, const std::string& model, double x) const {
  for (const auto& c : cells)
    if (c.protocol == p && c.degree == degree && c.model == model && c.x == x) return c;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", x);
  throw DataError("no stress cell " + protocol_name(p) + "/" + std::to_string(degree) + "/" + model + "/" + buf);
}

void StressReport::merge(const StressReport& other) {
  for (const auto& c : other.cells) {
    bool found = false;
    for (auto& mine : cells) {
      if (mine.protocol == c.protocol && mine.degree == c.degree && mine.model == c.model && mine.x == c.x) {
        mine = c;
        found = true;
      }
    }
    if (!found) cells.push_back(c);
  }
  std::sort(cells.begin(), cells.end(), [](const StressCell& a, const StressCell& b) {
    return std::tie(a.protocol, a.degree, a.model, a.x) < std::tie(b.protocol, b.degree, b.model, b.x);
  });
  coverage_repairs += other.coverage_repairs;
}

nlohmann::json StressReport::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : cells)
    arr.push_back({{"protocol", protocol_name(c.protocol)},
                   {"degree", c.degree},
                   {"model", c.model},
                   {"x", c.x},
                   {"mean", c.mean},
                   {"ci95", c.ci95},
                   {"scores", c.scores}});
  return {{"cells", arr}, {"coverage_repairs", coverage_repairs}};
}

StressReport StressReport::from_json(const nlohmann::json& j) {
  StressReport r;
  for (const auto& c : j.at("cells"))
    r.cells.push_back({parse_protocol(c.at("protocol").get<std::string>()), c.at("degree").get<int>(),
                       c.at("model").get<std::string>(), c.at("x").get<double>(), c.at("mean").get<double>(),
                       c.at("ci95").get<double>(), c.value("scores", std::vector<double>{})});
  r.coverage_repairs = j.value("coverage_repairs", 0);
  return r;
}

std::string StressReport::to_csv() const {
  std::ostringstream os;
  os << "protocol,degree,model,x,mean,ci95,n\n";
  char buf[160];
  for (const auto& c : cells) {
    std::snprintf(buf, sizeof buf, "%s,%d,%s,%.17g,%.17g,%.17g,%zu\n", protocol_name(c.protocol).c_str(), c.degree,
                  c.model.c_str(), c.x, c.mean, c.ci95, c.scores.size());
    os << buf;
  }
  return os.str();
}

StressReport run_stress(const StressConfig& config, const std::set<StressProtocol>& protocols) {
  config.validate();
  std::vector<std::pair<int, std::uint64_t>> units;
  for (int d : config.degrees)
    for (auto s : config.seeds) units.emplace_back(d, s);

  std::vector<UnitResult> results(units.size());
  parallel_for(static_cast<int>(units.size()), config.jobs, [&](int i) {
    results[static_cast<std::size_t>(i)] =
        run_unit(config, protocols, units[static_cast<std::size_t>(i)].first, units[static_cast<std::size_t>(i)].second);
  });

  ScoreTable merged;
  StressReport report;
  for (const auto& r : results) {
    for (const auto& [key, scores] : r.scores) {
      auto& dst = merged[key];
      dst.insert(dst.end(), scores.begin(), scores.end());
    }
    report.coverage_repairs += r.repairs;
  }
  for (const auto& [key, scores] : merged) {
    const auto& [p, d, model, x] = key;
    const EvalReport e = EvalReport::from_scores(scores, static_cast<int>(config.seeds.size()), config.k_folds);
    report.cells.push_back({p, d, model, x, e.mean, e.ci95, scores});
  }
  return report;
}

StressReport ood_sweep(const StressConfig& config) { return run_stress(config, {StressProtocol::kOod}); }
StressReport data_efficiency_sweep(const StressConfig& config) { return run_stress(config, {StressProtocol::kEfficiency}); }
StressReport noise_sweep(const StressConfig& config) { return run_stress(config, {StressProtocol::kNoise}); }

}  // namespace rootlab
