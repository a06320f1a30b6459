#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "report.hpp"
#include "rootlab/audit.hpp"
#include "rootlab/distill.hpp"
#include "rootlab/errors.hpp"
#include "rootlab/model.hpp"
#include "rootlab/presets.hpp"
#include "rootlab/stress.hpp"
#include "rootlab/validation.hpp"

#ifndef ROOTLAB_VERSION
#define ROOTLAB_VERSION "0.0.0"
#endif

namespace rootlab::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const std::string kVersion = "rootlab " ROOTLAB_VERSION;

// JSON config files: top-level keys are global options, nested objects are
// subcommand sections.  A run manifest is accepted too (its "config" record).
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}"; }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    json j = json::parse(input);
    if (j.is_object() && j.value("format", "") == "rootlab-manifest") j = j.at("config");
    if (!j.is_object()) throw DataError("config file must hold a JSON object");
    std::vector<CLI::ConfigItem> items;
    walk(j, {}, items);
    return items;
  }

 private:
  static std::string scalar(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
  }

  static void walk(const json& j, const std::vector<std::string>& parents, std::vector<CLI::ConfigItem>& items) {
    for (const auto& [key, v] : j.items()) {
      if (v.is_null()) continue;
      if (v.is_object()) {
        auto p = parents;
        p.push_back(key);
        walk(v, p, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (v.is_array()) {
        for (const auto& e : v) item.inputs.push_back(scalar(e));
      } else {
        item.inputs.push_back(scalar(v));
      }
      items.push_back(std::move(item));
    }
  }
};

// Every option of a subcommand as given or defaulted, in a form the JSON
// config reader accepts back.
json option_record(const CLI::App* app) {
  json rec = json::object();
  for (const CLI::Option* o : app->get_options()) {
    const std::string name = o->get_single_name();
    if (name == "help" || name == "config" || name == "version") continue;
    const bool multi = o->get_expected_max() > 1;
    if (o->count() > 0) {
      const auto& r = o->results();
      rec[name] = multi ? json(r) : json(r.back());
      continue;
    }
    std::string d = o->get_default_str();
    if (d.empty() || d == "{}" || d == "[]") continue;
    if (multi && d.size() >= 2 && d.front() == '[' && d.back() == ']') {
      json arr = json::array();
      std::stringstream ss(d.substr(1, d.size() - 2));
      for (std::string part; std::getline(ss, part, ',');)
        if (!part.empty()) arr.push_back(part);
      rec[name] = arr;
    } else {
      rec[name] = d;
    }
  }
  return rec;
}

void write_text(const std::string& path, const std::string& text) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot write '" + path + "'");
  os << text;
  if (!os) throw DataError("failed writing '" + path + "'");
}

void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

json read_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open '" + path + "'");
  try {
    return json::parse(is);
  } catch (const json::parse_error& e) {
    throw DataError(path + ": " + e.what());
  }
}

std::string manifest_path(const std::string& artifact) {
  const fs::path p(artifact);
  return (p.parent_path() / (p.stem().string() + ".manifest.json")).string();
}

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100 * v);
  return buf;
}

std::string pct_ci(double mean, double ci) { return pct(mean) + " ± " + pct(ci); }

// Result of one subcommand, recorded in the run manifest.
struct Outcome {
  std::vector<std::string> artifacts;
  std::vector<std::uint64_t> seeds;
  json resolved = json::object();
  int exit_code = kExitOk;
};

struct ModelOverrides {
  int max_depth = 0, min_leaf = 0, max_features = 0, n_trees = 0, rounds = 0, batch = 0, epochs = 0, patience = 0,
      max_iters = 0;
  double rate = 0, holdout = 0, l2 = 0, tolerance = 0;
  std::vector<int> hidden;
  std::map<std::string, CLI::Option*> opts;

  void add_tree(CLI::App* app) {
    opts["max-depth"] = app->add_option("--max-depth", max_depth, "Tree depth (tree, forest, gbm)")->default_str("");
    opts["min-leaf"] = app->add_option("--min-leaf", min_leaf, "Minimum rows per leaf (tree, forest, gbm)")->default_str("");
    opts["max-features"] = app->add_option("--max-features", max_features, "Features tried per split, 0 = all (tree)")->default_str("");
    opts["n-trees"] = app->add_option("--n-trees", n_trees, "Forest size")->default_str("");
    opts["rounds"] = app->add_option("--rounds", rounds, "Boosting rounds")->default_str("");
    opts["l2"] = app->add_option("--l2", l2, "Logistic regression L2 penalty");
    opts["max-iters"] = app->add_option("--max-iters", max_iters, "Logistic regression iteration cap")->default_str("");
    opts["tolerance"] = app->add_option("--tolerance", tolerance, "Logistic regression gradient-norm tolerance")->default_str("");
  }

  void add_mlp(CLI::App* app, const std::string& rate_help) {
    opts["rate"] = app->add_option("--rate", rate, rate_help)->default_str("");
    opts["hidden"] = app->add_option("--hidden", hidden, "MLP hidden layer widths")->default_str("");
    opts["batch"] = app->add_option("--batch", batch, "MLP minibatch size")->default_str("");
    opts["epochs"] = app->add_option("--epochs", epochs, "MLP epoch cap")->default_str("");
    opts["patience"] = app->add_option("--patience", patience, "MLP early-stopping patience")->default_str("");
    opts["holdout"] = app->add_option("--holdout", holdout, "MLP early-stopping holdout fraction")->default_str("");
  }

  bool given(const std::string& name) const {
    const auto it = opts.find(name);
    return it != opts.end() && it->second->count() > 0;
  }

  void apply(MlpParams& m) const {
    if (given("rate")) m.rate = rate;
    if (given("hidden")) m.hidden = hidden;
    if (given("batch")) m.batch = batch;
    if (given("epochs")) m.max_epochs = epochs;
    if (given("patience")) m.patience = patience;
    if (given("holdout")) m.holdout = holdout;
  }

  void apply(ModelSpec& s) const {
    if (given("max-depth")) s.tree.max_depth = s.forest.max_depth = s.gbm.max_depth = max_depth;
    if (given("min-leaf")) s.tree.min_leaf = s.forest.min_leaf = s.gbm.min_leaf = min_leaf;
    if (given("max-features")) s.tree.max_features = max_features;
    if (given("n-trees")) s.forest.n_trees = n_trees;
    if (given("rounds")) s.gbm.n_rounds = rounds;
    if (given("l2")) s.logreg.l2 = l2;
    if (given("max-iters")) s.logreg.max_iters = max_iters;
    if (given("tolerance")) s.logreg.tolerance = tolerance;
    if (given("rate")) s.gbm.rate = rate;
    apply(s.mlp);
  }
};

ModelSpec preset_spec(const std::string& preset, ModelFamily family) {
  if (preset == "screening") return presets::screening(family);
  if (preset == "comparison") return presets::comparison(family);
  return ModelSpec::of(family);
}

const std::vector<std::string> kPresets = {"default", "screening", "comparison"};

std::uint64_t default_seed() {
  const char* env = std::getenv("ROOTLAB_SEED");
  if (!env || !*env) return 0;
  try {
    return std::stoull(env);
  } catch (const std::exception&) {
    throw DataError(std::string("ROOTLAB_SEED is not an unsigned integer: '") + env + "'");
  }
}

CLI::Option* add_seed(CLI::App* app, std::uint64_t& seed, const std::string& help) {
  return app->add_option("--seed", seed, help + " (default: ROOTLAB_SEED or 0)");
}

int resolve_jobs(int jobs) {
  if (jobs > 0) return jobs;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

}  // namespace

std::vector<std::string> resolve_features(const LabeledDataset& ds, const std::vector<std::string>& tokens,
                                          bool include_raw) {
  const auto raw = raw_coefficient_names(ds.degree());
  std::vector<std::string> out;
  const auto add = [&](const std::string& name) {
    ds.column(name);
    if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
  };
  if (include_raw)
    for (const auto& r : raw) add(r);
  for (const auto& t : tokens) {
    if (t.empty()) continue;
    if (t == "raw") {
      for (const auto& r : raw) add(r);
    } else if (t == "all") {
      for (const auto& n : ds.feature_names) add(n);
    } else if (t == "invariants") {
      for (const auto& n : discriminant_feature_names(ds.degree())) add(n);
    } else if (std::any_of(kAllFamilies.begin(), kAllFamilies.end(), [&](Family f) { return family_name(f) == t; })) {
      for (const auto& n : family_feature_names(parse_family(t))) add(n);
    } else {
      add(t);
    }
  }
  if (out.empty()) throw DataError("no feature columns selected");
  return out;
}

std::string feature_set_label(const std::vector<std::string>& tokens, bool include_raw) {
  std::vector<std::string> parts;
  if (include_raw) parts.push_back("raw");
  for (const auto& t : tokens)
    if (!t.empty() && std::find(parts.begin(), parts.end(), t) == parts.end()) parts.push_back(t);
  std::string label;
  for (const auto& p : parts) label += (label.empty() ? "" : "+") + p;
  return label;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Real-root configuration learning: datasets, models, distillation and stress tests", "rootlab"};
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON config file (command-line flags take precedence)");
  app.allow_config_extras(false);
  app.set_version_flag("--version", kVersion);
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  int jobs = 1;
  app.add_option("--jobs", jobs, "Worker threads, 0 = one per core")->check(CLI::NonNegativeNumber);

  std::uint64_t base_seed = 0;
  try {
    base_seed = default_seed();
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  // generate
  std::uint64_t g_seed = base_seed;
  auto* gen = app.add_subcommand("generate", "Seeded labeled dataset to CSV");
  int g_degree = 5, g_n = 0;
  double g_lo = -10, g_hi = 10;
  std::vector<std::string> g_families;
  std::string g_out;
  gen->add_option("--degree", g_degree, "Polynomial degree (2-5)")->check(CLI::Range(2, 5));
  gen->add_option("--n", g_n, "Rows, 0 = 40000 for quintics and 20000 otherwise")->check(CLI::NonNegativeNumber);
  add_seed(gen, g_seed, "Dataset seed");
  gen->add_option("--lo", g_lo, "Lower coefficient bound");
  gen->add_option("--hi", g_hi, "Upper coefficient bound");
  gen->add_option("--families", g_families, "Quintic feature families (default all)");
  gen->add_option("--out", g_out, "Output CSV (default deg{d}_n{n}_seed{s}.csv)");

  // featurize
  auto* feat = app.add_subcommand("featurize", "Recompute feature families for a dataset CSV");
  std::string f_in, f_out;
  std::vector<std::string> f_families;
  feat->add_option("--in", f_in, "Input CSV")->required()->check(CLI::ExistingFile);
  feat->add_option("--families", f_families, "Quintic feature families (default all)");
  feat->add_option("--out", f_out, "Output CSV")->required();

  // train
  std::uint64_t t_seed = base_seed;
  auto* train = app.add_subcommand("train", "Cross-validate one model and fit it on the full dataset");
  std::string t_data, t_model = "tree", t_preset = "default", t_out = "model.json", t_report = "report.json";
  std::vector<std::string> t_features;
  bool t_no_raw = false;
  int t_k = 5, t_seeds = 1;
  ModelOverrides t_over;
  train->add_option("--data", t_data, "Dataset CSV")->required()->check(CLI::ExistingFile);
  train->add_option("--model", t_model, "tree, forest, gbm, logreg or mlp");
  train->add_option("--features", t_features, "Feature tokens added to the raw coefficients");
  train->add_flag("--no-raw", t_no_raw, "Leave out the raw coefficients");
  train->add_option("--k", t_k, "Folds")->check(CLI::Range(2, 1000));
  train->add_option("--seeds", t_seeds, "Number of CV seeds")->check(CLI::PositiveNumber);
  add_seed(train, t_seed, "First CV seed");
  train->add_option("--preset", t_preset, "Hyperparameter preset")->check(CLI::IsMember(kPresets));
  t_over.add_tree(train);
  t_over.add_mlp(train, "Learning rate (mlp, gbm)");
  train->add_option("--out", t_out, "Model JSON");
  train->add_option("--report", t_report, "Evaluation report JSON");

  // screen
  std::uint64_t s_seed = base_seed;
  auto* screen = app.add_subcommand("screen", "Multi-model comparison on one feature set");
  std::string s_data, s_preset = "screening", s_out = "screen.json";
  std::vector<std::string> s_models{"mlp", "gbm", "forest", "tree", "logreg"}, s_features;
  bool s_no_raw = false;
  int s_k = 5, s_seeds = 3;
  ModelOverrides s_over;
  screen->add_option("--data", s_data, "Dataset CSV")->required()->check(CLI::ExistingFile);
  screen->add_option("--models", s_models, "Model families");
  screen->add_option("--features", s_features, "Feature tokens added to the raw coefficients");
  screen->add_flag("--no-raw", s_no_raw, "Leave out the raw coefficients");
  screen->add_option("--k", s_k, "Folds")->check(CLI::Range(2, 1000));
  screen->add_option("--seeds", s_seeds, "Number of CV seeds")->check(CLI::PositiveNumber);
  add_seed(screen, s_seed, "First CV seed");
  screen->add_option("--preset", s_preset, "Hyperparameter preset")->check(CLI::IsMember(kPresets));
  s_over.add_tree(screen);
  s_over.add_mlp(screen, "Learning rate (mlp, gbm)");
  screen->add_option("--out", s_out, "Screening JSON");

  // distill
  std::uint64_t d_seed = base_seed;
  auto* dist = app.add_subcommand("distill", "Distill an MLP teacher into a surrogate tree");
  std::string d_data, d_preset = "comparison", d_out = "distill.json", d_rules = "rules.txt";
  std::vector<std::string> d_features{"all"};
  bool d_raw = false;
  int d_depth = 4, d_min_leaf = 20, d_repeats = 5;
  double d_test = 0.2;
  ModelOverrides d_over;
  dist->add_option("--data", d_data, "Dataset CSV")->required()->check(CLI::ExistingFile);
  dist->add_option("--features", d_features, "Feature tokens for teacher and surrogate");
  dist->add_flag("--with-raw", d_raw, "Add the raw coefficients");
  add_seed(dist, d_seed, "Split, teacher and importance seed");
  dist->add_option("--preset", d_preset, "Teacher preset")->check(CLI::IsMember(kPresets));
  d_over.add_mlp(dist, "Teacher learning rate");
  dist->add_option("--depth", d_depth, "Surrogate depth")->check(CLI::NonNegativeNumber);
  dist->add_option("--min-leaf", d_min_leaf, "Surrogate minimum leaf size")->check(CLI::PositiveNumber);
  dist->add_option("--test-fraction", d_test, "Held-out fraction")->check(CLI::Range(0.01, 0.99));
  dist->add_option("--repeats", d_repeats, "Permutation-importance repeats")->check(CLI::PositiveNumber);
  dist->add_option("--out", d_out, "Distillation report JSON");
  dist->add_option("--rules", d_rules, "Surrogate rules text");

  // stress
  std::uint64_t st_seed = base_seed;
  auto* stress = app.add_subcommand("stress", "OOD, data-efficiency and noise sweeps");
  StressConfig st_cfg;
  std::vector<std::string> st_protocols{"ood", "efficiency", "noise"};
  std::vector<int> st_degrees, st_sizes;
  std::vector<double> st_ranges, st_sigmas;
  int st_seeds = 3;
  std::string st_out = "stress.json", st_csv = "stress.csv";
  ModelOverrides st_over;
  stress->add_option("--protocols", st_protocols, "ood, efficiency, noise");
  stress->add_option("--degrees", st_degrees, "Degrees (default 2 3 4 5)");
  stress->add_option("--ranges", st_ranges, "OOD range bounds (default 10 20 50 100)");
  stress->add_option("--sizes", st_sizes, "Training sizes (default 25 50 100 500 1000 5000)");
  stress->add_option("--sigmas", st_sigmas, "Noise levels (default 0 0.1 0.5 1 2)");
  stress->add_option("--seeds", st_seeds, "Number of seeds")->check(CLI::PositiveNumber);
  add_seed(stress, st_seed, "First seed");
  stress->add_option("--k", st_cfg.k_folds, "Folds")->check(CLI::Range(2, 1000));
  stress->add_option("--pool", st_cfg.pool_size, "Training pool rows per degree and seed");
  stress->add_option("--test-size", st_cfg.test_size, "Evaluation rows");
  stress->add_option("--train-range", st_cfg.train_range, "Training coefficient bound");
  st_over.add_mlp(stress, "Raw NN learning rate");
  stress->add_option("--tree-depth", st_cfg.tree.max_depth, "Invariant tree depth");
  stress->add_option("--tree-min-leaf", st_cfg.tree.min_leaf, "Invariant tree minimum leaf size");
  stress->add_option("--out", st_out, "Stress report JSON");
  stress->add_option("--csv", st_csv, "Tidy CSV");

  // report
  auto* rep = app.add_subcommand("report", "Markdown tables and SVG stress panels from run outputs");
  std::vector<std::string> r_inputs;
  std::string r_out = "report.md";
  rep->add_option("--inputs", r_inputs, "train, screen, distill, stress or verify JSON files and stress CSVs")
      ->required()
      ->check(CLI::ExistingFile);
  rep->add_option("--out", r_out, "Markdown file; SVG panels are written next to it");

  // verify
  std::uint64_t v_seed = base_seed;
  auto* ver = app.add_subcommand("verify", "Exact-oracle audit of labels and features on random quintics");
  int v_n = 10000;
  double v_range = 10;
  std::string v_out = "verify.json";
  ver->add_option("--n", v_n, "Quintics")->check(CLI::PositiveNumber);
  add_seed(ver, v_seed, "Audit seed");
  ver->add_option("--range", v_range, "Coefficient bound")->check(CLI::PositiveNumber);
  ver->add_option("--out", v_out, "Audit JSON");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: config: " << e.what() << "\n";
    return kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  const auto start = std::chrono::steady_clock::now();
  jobs = resolve_jobs(jobs);
  Outcome res;

  try {
    if (sub == gen) {
      const int n = g_n > 0 ? g_n : (g_degree == 5 ? 40000 : 20000);
      DatasetConfig cfg = DatasetConfig::for_degree(g_degree, n, g_seed);
      cfg.lo = g_lo;
      cfg.hi = g_hi;
      if (!g_families.empty()) cfg.families = parse_families(g_families);
      const LabeledDataset ds = generate(cfg);
      const std::string path = g_out.empty() ? default_csv_name(cfg) : g_out;
      if (fs::path(path).has_parent_path()) fs::create_directories(fs::path(path).parent_path());
      write_csv(ds, path);
      std::vector<std::string> fams;
      for (Family f : cfg.families) fams.emplace_back(family_name(f));
      json counts = json::object();
      for (const auto& [c, k] : ds.class_counts()) counts[std::to_string(c)] = k;
      res.resolved = {{"degree", cfg.degree}, {"n_samples", cfg.n_samples}, {"lo", cfg.lo},
                      {"hi", cfg.hi},         {"seed", cfg.seed},           {"monic", cfg.monic},
                      {"families", fams},     {"class_counts", counts},     {"n_resampled", ds.n_resampled}};
      res.artifacts = {path};
      res.seeds = {g_seed};
      out << "wrote " << ds.rows() << " rows to " << path << " (class counts " << counts.dump() << ", resampled "
          << ds.n_resampled << ")\n";
    } else if (sub == feat) {
      const LabeledDataset in = read_csv(f_in);
      std::vector<Polynomial> polys;
      for (Eigen::Index r = 0; r < in.rows(); ++r) polys.push_back(in.polynomial(r));
      DatasetConfig cfg = in.config;
      cfg.families = f_families.empty() ? std::set<Family>(kAllFamilies.begin(), kAllFamilies.end())
                                        : parse_families(f_families);
      LabeledDataset ds = from_polynomials(cfg, polys);
      ds.labels = in.labels;
      if (fs::path(f_out).has_parent_path()) fs::create_directories(fs::path(f_out).parent_path());
      write_csv(ds, f_out);
      res.resolved = {{"input", f_in}, {"degree", cfg.degree}, {"rows", ds.rows()}, {"columns", ds.feature_names}};
      res.artifacts = {f_out};
      out << "wrote " << ds.rows() << " rows x " << ds.feature_names.size() << " features to " << f_out << "\n";
    } else if (sub == train) {
      const LabeledDataset ds = read_csv(t_data);
      const auto features = resolve_features(ds, t_features, !t_no_raw);
      const std::string label = feature_set_label(t_features, !t_no_raw);
      const ModelFamily family = parse_model_family(t_model);
      ModelSpec spec = preset_spec(t_preset, family);
      t_over.apply(spec);
      const auto seeds = seed_range(t_seed, t_seeds);
      const EvalReport ev = cross_validate(ds, spec, features, t_k, seeds, jobs);
      spec.jobs = jobs;
      const TrainedModel model = fit_model(spec, ds.columns(features), ds.labels, features, t_seed);
      spec.jobs = 1;
      write_json(t_out, model.to_json());
      write_json(t_report, {{"kind", "train"},
                            {"data", t_data},
                            {"degree", ds.degree()},
                            {"model", model_family_name(family)},
                            {"feature_set", label},
                            {"features", features},
                            {"spec", spec.to_json()},
                            {"evaluation", ev.to_json()}});
      res.resolved = {{"spec", spec.to_json()}, {"features", features}, {"feature_set", label}, {"k", t_k}};
      res.artifacts = {t_out, t_report};
      res.seeds = seeds;
      out << model_family_name(family) << " [" << label << "] balanced accuracy " << pct_ci(ev.mean, ev.ci95) << " ("
          << t_seeds << " seed" << (t_seeds == 1 ? "" : "s") << " x " << t_k << " folds)\n";
    } else if (sub == screen) {
      const LabeledDataset ds = read_csv(s_data);
      const auto features = resolve_features(ds, s_features, !s_no_raw);
      const std::string label = feature_set_label(s_features, !s_no_raw);
      const auto seeds = seed_range(s_seed, s_seeds);
      json rows = json::array();
      for (const auto& m : s_models) {
        ModelSpec spec = preset_spec(s_preset, parse_model_family(m));
        s_over.apply(spec);
        const EvalReport ev = cross_validate(ds, spec, features, s_k, seeds, jobs);
        rows.push_back({{"model", model_family_name(spec.family)}, {"spec", spec.to_json()}, {"evaluation", ev.to_json()}});
        out << model_family_name(spec.family) << " " << pct_ci(ev.mean, ev.ci95) << "\n";
      }
      const json artifact = {{"kind", "screen"}, {"data", s_data},   {"degree", ds.degree()},
                             {"feature_set", label}, {"features", features}, {"rows", rows}};
      write_json(s_out, artifact);
      res.resolved = {{"features", features}, {"feature_set", label}, {"k", s_k}};
      res.artifacts = {s_out};
      res.seeds = seeds;
    } else if (sub == dist) {
      const LabeledDataset ds = read_csv(d_data);
      const auto features = resolve_features(ds, d_features, d_raw);
      DistillConfig cfg;
      cfg.teacher = preset_spec(d_preset, ModelFamily::kMlp).mlp;
      d_over.apply(cfg.teacher);
      cfg.surrogate.max_depth = d_depth;
      cfg.surrogate.min_leaf = d_min_leaf;
      cfg.test_fraction = d_test;
      cfg.importance_repeats = d_repeats;
      cfg.seed = d_seed;
      const DistillReport report = distill(ds, cfg, features);
      ModelSpec teacher = ModelSpec::of(ModelFamily::kMlp);
      teacher.mlp = cfg.teacher;
      const json config = {{"teacher", teacher.to_json()},
                           {"surrogate", {{"max_depth", d_depth}, {"min_leaf", d_min_leaf}}},
                           {"test_fraction", d_test},
                           {"importance_repeats", d_repeats},
                           {"seed", d_seed}};
      write_json(d_out, {{"kind", "distill"}, {"data", d_data}, {"config", config}, {"report", report.to_json()}});
      write_text(d_rules, report.rules_text);
      res.resolved = config;
      res.resolved["features"] = features;
      res.artifacts = {d_out, d_rules};
      res.seeds = {d_seed};
      out << "NN test balanced accuracy " << pct(report.nn_test_balanced_accuracy) << "\ntree fidelity "
          << pct(report.tree_fidelity) << "\ntree standalone " << pct(report.tree_standalone) << "\n\n"
          << report.rules_text;
    } else if (sub == stress) {
      if (!st_degrees.empty()) st_cfg.degrees = st_degrees;
      if (!st_ranges.empty()) st_cfg.ood_ranges = st_ranges;
      if (!st_sizes.empty()) st_cfg.train_sizes = st_sizes;
      if (!st_sigmas.empty()) st_cfg.noise_sigmas = st_sigmas;
      st_cfg.seeds = seed_range(st_seed, st_seeds);
      st_over.apply(st_cfg.nn);
      st_cfg.jobs = jobs;
      std::set<StressProtocol> protocols;
      for (const auto& p : st_protocols) protocols.insert(parse_protocol(p));
      const StressReport report = run_stress(st_cfg, protocols);
      json config = st_cfg.to_json();
      config.erase("jobs");
      std::vector<std::string> pnames;
      for (StressProtocol p : protocols) pnames.push_back(protocol_name(p));
      write_json(st_out, {{"kind", "stress"}, {"config", config}, {"protocols", pnames}, {"report", report.to_json()}});
      write_text(st_csv, report.to_csv());
      res.resolved = config;
      res.artifacts = {st_out, st_csv};
      res.seeds = st_cfg.seeds;
      out << "wrote " << report.cells.size() << " cells to " << st_out << " and " << st_csv << "\n";
    } else if (sub == rep) {
      std::vector<json> artifacts;
      StressReport csv_stress;
      bool have_csv = false;
      for (const auto& path : r_inputs) {
        if (fs::path(path).extension() == ".csv") {
          csv_stress.merge(read_stress_csv(path));
          have_csv = true;
          continue;
        }
        json j = read_json(path);
        static const std::set<std::string> kinds = {"train", "screen", "distill", "stress", "verify"};
        if (!j.is_object() || !kinds.count(j.value("kind", "")))
          throw DataError(path + ": not a train, screen, distill, stress or verify output");
        artifacts.push_back(std::move(j));
      }
      if (have_csv) artifacts.push_back({{"kind", "stress"}, {"report", csv_stress.to_json()}});
      StressReport all_stress;
      for (const auto& a : artifacts)
        if (a.at("kind") == "stress") all_stress.merge(StressReport::from_json(a.at("report")));
      const auto svgs = render_stress_svgs(all_stress);
      std::vector<std::string> names;
      const fs::path dir = fs::path(r_out).parent_path();
      res.artifacts = {r_out};
      for (const auto& [name, svg] : svgs) {
        names.push_back(name);
        const std::string path = (dir / name).string();
        write_text(path, svg);
        res.artifacts.push_back(path);
      }
      write_text(r_out, render_markdown(artifacts, names));
      res.resolved = {{"inputs", r_inputs}};
      out << "wrote " << r_out << " and " << svgs.size() << " SVG panel" << (svgs.size() == 1 ? "" : "s") << "\n";
    } else if (sub == ver) {
      const OracleAudit audit = run_oracle_audit(v_n, v_seed, v_range);
      write_json(v_out, {{"kind", "verify"}, {"audit", audit.to_json()}});
      res.resolved = {{"n", v_n}, {"seed", v_seed}, {"range", v_range}};
      res.artifacts = {v_out};
      res.seeds = {v_seed};
      out << "label agreement " << audit.label_agreements << "/" << audit.n << "\nsturm feature mismatches "
          << audit.sturm_feature_mismatches << "\ncrit8 above exact count " << audit.crit8_violations
          << "\ndescartes violations " << audit.descartes_violations << " of " << audit.descartes_checked
          << "\nnewton max relative error " << audit.newton_max_error << "\n"
          << (audit.passed() ? "PASS" : "FAIL") << "\n";
      if (!audit.passed()) res.exit_code = kExitNumeric;
    }

    json config = {{"jobs", jobs}, {sub->get_name(), option_record(sub)}};
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_json(manifest_path(res.artifacts.front()), {{"format", "rootlab-manifest"},
                                                      {"tool_version", kVersion},
                                                      {"command", sub->get_name()},
                                                      {"argv", args},
                                                      {"config", config},
                                                      {"resolved", res.resolved},
                                                      {"seeds", res.seeds},
                                                      {"artifacts", res.artifacts},
                                                      {"wall_time_seconds", wall}});
    return res.exit_code;
  } catch (const NumericError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace rootlab::cli
