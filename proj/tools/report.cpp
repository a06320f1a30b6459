#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "rootlab/errors.hpp"

namespace rootlab::cli {

namespace {

using nlohmann::json;

struct Score {
  double mean = 0.0;
  double ci95 = 0.0;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string pct(const Score& s) { return fmt("%.1f%%", 100 * s.mean) + " ± " + fmt("%.1f%%", 100 * s.ci95); }

Score score_of(const json& evaluation) { return {evaluation.at("mean").get<double>(), evaluation.at("ci95").get<double>()}; }

// Mean and 95% CI across repeated scalar measurements.
Score summarize(const std::vector<double>& v) {
  Score s;
  if (v.empty()) return s;
  for (double x : v) s.mean += x;
  s.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.ci95 = 1.96 * std::sqrt(ss / static_cast<double>(v.size() - 1)) / std::sqrt(static_cast<double>(v.size()));
  }
  return s;
}

const std::vector<std::string> kFamilyOrder = {"mlp", "gbm", "forest", "tree", "logreg"};

std::string display_name(const std::string& family) {
  if (family == "mlp") return "Neural network";
  if (family == "gbm") return "Gradient boosting";
  if (family == "forest") return "Random forest";
  if (family == "tree") return "Decision tree";
  if (family == "logreg") return "Logistic regression";
  return family;
}

std::string description(const std::string& family) {
  if (family == "mlp") return "Multi-layer perceptron (ReLU, softmax cross-entropy, Adam, early stopping)";
  if (family == "gbm") return "Softmax gradient boosting over shallow regression trees";
  if (family == "forest") return "Bagged CART trees with per-split feature subsampling";
  if (family == "tree") return "CART with Gini splits; explicit if/else rules";
  if (family == "logreg") return "Multinomial logistic regression with L2 penalty";
  return "";
}

struct Run {
  int degree;
  std::string model;
  std::string feature_set;
  Score score;
};

std::vector<Run> collect_runs(const std::vector<json>& artifacts) {
  std::vector<Run> runs;
  for (const auto& a : artifacts) {
    const std::string kind = a.value("kind", "");
    if (kind == "train")
      runs.push_back({a.at("degree").get<int>(), a.at("model").get<std::string>(), a.at("feature_set").get<std::string>(),
                      score_of(a.at("evaluation"))});
  }
  return runs;
}

void table_models(std::ostringstream& os, const std::vector<json>& artifacts) {
  std::set<std::string> seen;
  for (const auto& a : artifacts) {
    const std::string kind = a.value("kind", "");
    if (kind == "train") seen.insert(a.at("model").get<std::string>());
    if (kind == "screen")
      for (const auto& r : a.at("rows")) seen.insert(r.at("model").get<std::string>());
    if (kind == "distill") seen.insert({"mlp", "tree"});
  }
  if (seen.empty()) return;
  os << "## Table 1. Model families\n\n| Model | Description |\n|---|---|\n";
  for (const auto& f : kFamilyOrder)
    if (seen.count(f)) os << "| " << display_name(f) << " | " << description(f) << " |\n";
  os << "\n";
}

void table_screening(std::ostringstream& os, const std::vector<json>& artifacts) {
  for (const auto& a : artifacts) {
    if (a.value("kind", "") != "screen") continue;
    std::vector<std::pair<std::string, Score>> rows;
    for (const auto& r : a.at("rows")) rows.emplace_back(r.at("model").get<std::string>(), score_of(r.at("evaluation")));
    std::stable_sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) { return x.second.mean > y.second.mean; });
    os << "## Table 3. Degree " << a.at("degree").get<int>() << " screening (mean ± 95% CI)\n\n";
    os << "| Model | Balanced accuracy (" << a.at("feature_set").get<std::string>() << ") |\n|---|---|\n";
    for (const auto& [m, s] : rows) os << "| " << display_name(m) << " | " << pct(s) << " |\n";
    os << "\n";
  }
}

const Run* find_run(const std::vector<Run>& runs, int degree, const std::string& model, const std::string& fs) {
  const Run* out = nullptr;
  for (const auto& r : runs)
    if (r.degree == degree && r.model == model && r.feature_set == fs) out = &r;
  return out;
}

void table_gap(std::ostringstream& os, const std::vector<Run>& runs) {
  const std::vector<std::pair<std::string, std::string>> columns = {{"raw", "Raw coefficients"},
                                                                     {"raw+crit8", "With crit8"}};
  std::vector<std::pair<std::string, std::string>> present;
  for (const auto& c : columns)
    if (find_run(runs, 5, "mlp", c.first) && find_run(runs, 5, "tree", c.first)) present.push_back(c);
  if (present.empty()) return;
  os << "## Table 4. Neural network vs decision tree\n\n| Model |";
  for (const auto& c : present) os << " " << c.second << " |";
  os << "\n|---|";
  for (std::size_t i = 0; i < present.size(); ++i) os << "---|";
  os << "\n";
  for (const std::string model : {"mlp", "tree"}) {
    os << "| " << display_name(model) << " |";
    for (const auto& c : present) os << " " << pct(find_run(runs, 5, model, c.first)->score) << " |";
    os << "\n";
  }
  os << "| **Performance Gap** |";
  for (const auto& c : present) {
    const double gap = find_run(runs, 5, "mlp", c.first)->score.mean - find_run(runs, 5, "tree", c.first)->score.mean;
    os << " **" << fmt("%.1f", 100 * gap) << " points** |";
  }
  os << "\n\n";
}

void table_feature_sets(std::ostringstream& os, const std::vector<Run>& runs) {
  std::set<int> degrees;
  for (const auto& r : runs) degrees.insert(r.degree);
  for (int d : degrees) {
    std::vector<std::string> sets;
    std::set<std::string> models;
    for (const auto& r : runs) {
      if (r.degree != d) continue;
      models.insert(r.model);
      if (std::find(sets.begin(), sets.end(), r.feature_set) == sets.end()) sets.push_back(r.feature_set);
    }
    std::stable_partition(sets.begin(), sets.end(), [](const std::string& s) { return s == "raw"; });
    std::vector<std::string> cols;
    for (const auto& f : kFamilyOrder)
      if (models.count(f)) cols.push_back(f);
    os << "## Table 6. Degree " << d << " feature sets (mean ± 95% CI)\n\n| Feature set |";
    for (const auto& c : cols) os << " " << display_name(c) << " |";
    os << "\n|---|";
    for (std::size_t i = 0; i < cols.size(); ++i) os << "---|";
    os << "\n";
    for (const auto& s : sets) {
      os << "| " << s << " |";
      for (const auto& c : cols) {
        const Run* r = find_run(runs, d, c, s);
        os << " " << (r ? pct(r->score) : "") << " |";
      }
      os << "\n";
    }
    os << "\n";
  }
}

void table_distill(std::ostringstream& os, const std::vector<json>& artifacts) {
  std::vector<const json*> reps;
  for (const auto& a : artifacts)
    if (a.value("kind", "") == "distill") reps.push_back(&a.at("report"));
  if (reps.empty()) return;
  const auto metric = [&](const char* key) {
    std::vector<double> v;
    for (const json* r : reps) v.push_back(r->at(key).get<double>());
    return summarize(v);
  };
  os << "## Table 5. Distillation (" << reps.size() << " run" << (reps.size() == 1 ? "" : "s") << ")\n\n";
  os << "| Metric | Value |\n|---|---|\n";
  const auto cell = [&](const char* key) {
    const Score s = metric(key);
    return reps.size() == 1 ? fmt("%.1f%%", 100 * s.mean) : pct(s);
  };
  os << "| NN test balanced accuracy | " << cell("nn_test_balanced_accuracy") << " |\n";
  os << "| Tree test fidelity | " << cell("tree_fidelity") << " |\n";
  os << "| Tree standalone accuracy | " << cell("tree_standalone") << " |\n\n";

  const json& first = *reps.front();
  std::vector<std::pair<std::string, double>> imp;
  for (const auto& [k, v] : first.at("importance").items()) imp.emplace_back(k, v.get<double>());
  std::stable_sort(imp.begin(), imp.end(), [](const auto& x, const auto& y) { return x.second > y.second; });
  os << "Permutation importance (first run):\n\n| Feature | Share | Impurity share |\n|---|---|---|\n";
  for (std::size_t i = 0; i < imp.size() && i < 5; ++i) {
    if (imp[i].second <= 0) break;
    os << "| " << imp[i].first << " | " << fmt("%.3f", imp[i].second) << " | "
       << fmt("%.3f", first.at("impurity_importance").value(imp[i].first, 0.0)) << " |\n";
  }
  os << "\nSurrogate rules (first run):\n\n```\n" << first.at("rules_text").get<std::string>() << "```\n\n";
}

std::string panel_title(const std::string& model, StressProtocol p) {
  const std::string who = model == kRawNn ? "Raw NN" : "Invariant DT";
  switch (p) {
    case StressProtocol::kOod: return who + ": OOD Extrapolation";
    case StressProtocol::kEfficiency: return who + ": Data Efficiency";
    case StressProtocol::kNoise: return who + ": Noise Robustness";
  }
  return who;
}

std::string axis_label(StressProtocol p) {
  switch (p) {
    case StressProtocol::kOod: return "Range bound";
    case StressProtocol::kEfficiency: return "Training samples";
    case StressProtocol::kNoise: return "Noise sigma";
  }
  return "";
}

std::string panel_file(const std::string& model, StressProtocol p) {
  return "fig1_" + model + "_" + protocol_name(p) + ".svg";
}

void table_stress(std::ostringstream& os, const StressReport& rep, const std::vector<std::string>& svg_files) {
  if (rep.cells.empty()) return;
  os << "## Figure 1. Stress tests (balanced accuracy, mean ± 95% CI)\n\n";
  for (StressProtocol p : {StressProtocol::kOod, StressProtocol::kEfficiency, StressProtocol::kNoise}) {
    for (const std::string& model : {kRawNn, kInvariantTree}) {
      std::set<double> xs;
      std::set<int> degrees;
      for (const auto& c : rep.cells)
        if (c.protocol == p && c.model == model) {
          xs.insert(c.x);
          degrees.insert(c.degree);
        }
      if (xs.empty()) continue;
      os << "### " << panel_title(model, p) << "\n\n| " << axis_label(p) << " |";
      for (int d : degrees) os << " Degree " << d << " |";
      os << "\n|---|";
      for (std::size_t i = 0; i < degrees.size(); ++i) os << "---|";
      os << "\n";
      for (double x : xs) {
        os << "| " << fmt("%g", x) << " |";
        for (int d : degrees) {
          const auto it = std::find_if(rep.cells.begin(), rep.cells.end(), [&](const StressCell& c) {
            return c.protocol == p && c.model == model && c.degree == d && c.x == x;
          });
          os << " " << (it == rep.cells.end() ? "" : fmt("%.3f", it->mean) + " ± " + fmt("%.3f", it->ci95)) << " |";
        }
        os << "\n";
      }
      os << "\n";
      const std::string file = panel_file(model, p);
      if (std::find(svg_files.begin(), svg_files.end(), file) != svg_files.end())
        os << "![" << panel_title(model, p) << "](" << file << ")\n\n";
    }
  }
}

void table_verify(std::ostringstream& os, const std::vector<json>& artifacts) {
  for (const auto& a : artifacts) {
    if (a.value("kind", "") != "verify") continue;
    const json& au = a.at("audit");
    os << "## Oracle audit (" << au.at("n").get<int>() << " quintics, seed " << au.at("seed").get<std::uint64_t>()
       << ")\n\n| Check | Result |\n|---|---|\n";
    os << "| Numeric label vs exact Sturm count | " << fmt("%.4f", au.at("label_agreement").get<double>()) << " |\n";
    os << "| Sturm feature mismatches | " << au.at("sturm_feature_mismatches").get<int>() << " |\n";
    os << "| crit8 above exact count | " << au.at("crit8_violations").get<int>() << " |\n";
    os << "| Descartes bound or parity violations | " << au.at("descartes_violations").get<int>() << " of "
       << au.at("descartes_checked").get<int>() << " |\n";
    os << "| Newton power-sum max relative error | " << fmt("%.3g", au.at("newton_max_error").get<double>())
       << " |\n";
    os << "| Passed | " << (au.at("passed").get<bool>() ? "yes" : "no") << " |\n\n";
  }
}

}  // namespace

std::string render_markdown(const std::vector<json>& artifacts, const std::vector<std::string>& svg_files) {
  std::ostringstream os;
  os << "# rootlab report\n\n";
  const auto runs = collect_runs(artifacts);
  table_models(os, artifacts);
  table_screening(os, artifacts);
  table_gap(os, runs);
  table_distill(os, artifacts);
  table_feature_sets(os, runs);
  StressReport stress;
  for (const auto& a : artifacts)
    if (a.value("kind", "") == "stress") stress.merge(StressReport::from_json(a.at("report")));
  table_stress(os, stress, svg_files);
  table_verify(os, artifacts);
  return os.str();
}

std::map<std::string, std::string> render_stress_svgs(const StressReport& report) {
  static const char* kColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"};
  constexpr double kW = 420, kH = 320, kL = 60, kR = 100, kT = 36, kB = 48;
  constexpr double kYmin = 0.4, kYmax = 1.05;
  std::map<std::string, std::string> out;
  for (StressProtocol p : {StressProtocol::kOod, StressProtocol::kEfficiency, StressProtocol::kNoise}) {
    for (const std::string& model : {kRawNn, kInvariantTree}) {
      std::map<int, std::vector<const StressCell*>> lines;
      std::set<double> xs;
      for (const auto& c : report.cells)
        if (c.protocol == p && c.model == model) {
          lines[c.degree].push_back(&c);
          xs.insert(c.x);
        }
      if (xs.empty()) continue;
      const bool logx = p != StressProtocol::kNoise && *xs.begin() > 0;
      const auto tx = [&](double x) { return logx ? std::log10(x) : x; };
      double x0 = tx(*xs.begin()), x1 = tx(*xs.rbegin());
      if (x1 == x0) x1 = x0 + 1;
      const auto px = [&](double x) { return kL + (tx(x) - x0) / (x1 - x0) * (kW - kL - kR); };
      const auto py = [&](double y) {
        y = std::clamp(y, kYmin, kYmax);
        return kT + (kYmax - y) / (kYmax - kYmin) * (kH - kT - kB);
      };

      std::ostringstream s;
      s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
        << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
      s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
      s << "<text x=\"" << (kL + kW - kR) / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">"
        << panel_title(model, p) << "</text>\n";
      for (double y = 0.4; y <= 1.0001; y += 0.1) {
        s << "<line x1=\"" << kL << "\" x2=\"" << kW - kR << "\" y1=\"" << fmt("%.1f", py(y)) << "\" y2=\""
          << fmt("%.1f", py(y)) << "\" stroke=\"#ddd\" stroke-dasharray=\"3,3\"/>\n";
        s << "<text x=\"" << kL - 6 << "\" y=\"" << fmt("%.1f", py(y) + 4) << "\" text-anchor=\"end\">"
          << fmt("%.1f", y) << "</text>\n";
      }
      for (double x : xs) {
        const std::string label = p == StressProtocol::kOod ? "±" + fmt("%g", x) : fmt("%g", x);
        s << "<text x=\"" << fmt("%.1f", px(x)) << "\" y=\"" << kH - kB + 16 << "\" text-anchor=\"middle\">" << label
          << "</text>\n";
      }
      s << "<rect x=\"" << kL << "\" y=\"" << kT << "\" width=\"" << kW - kL - kR << "\" height=\"" << kH - kT - kB
        << "\" fill=\"none\" stroke=\"black\"/>\n";
      s << "<text x=\"" << (kL + kW - kR) / 2 << "\" y=\"" << kH - 10 << "\" text-anchor=\"middle\">" << axis_label(p)
        << "</text>\n";
      s << "<text transform=\"translate(16," << (kT + kH - kB) / 2
        << ") rotate(-90)\" text-anchor=\"middle\">Balanced accuracy</text>\n";

      int li = 0;
      for (auto& [degree, cells] : lines) {
        std::sort(cells.begin(), cells.end(), [](const StressCell* a, const StressCell* b) { return a->x < b->x; });
        const char* color = kColors[li % 6];
        s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (const auto* c : cells) s << fmt("%.1f", px(c->x)) << "," << fmt("%.1f", py(c->mean)) << " ";
        s << "\"/>\n";
        for (const auto* c : cells) {
          const std::string cx = fmt("%.1f", px(c->x));
          s << "<line x1=\"" << cx << "\" x2=\"" << cx << "\" y1=\"" << fmt("%.1f", py(c->mean - c->ci95))
            << "\" y2=\"" << fmt("%.1f", py(c->mean + c->ci95)) << "\" stroke=\"" << color << "\"/>\n";
          s << "<circle cx=\"" << cx << "\" cy=\"" << fmt("%.1f", py(c->mean)) << "\" r=\"3\" fill=\"" << color
            << "\"/>\n";
        }
        const double ly = kT + 14 + 18 * li;
        s << "<line x1=\"" << kW - kR + 10 << "\" x2=\"" << kW - kR + 30 << "\" y1=\"" << ly << "\" y2=\"" << ly
          << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        s << "<text x=\"" << kW - kR + 34 << "\" y=\"" << ly + 4 << "\">Degree " << degree << "</text>\n";
        ++li;
      }
      s << "</svg>\n";
      out[panel_file(model, p)] = s.str();
    }
  }
  return out;
}

StressReport read_stress_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(is, line) || line.rfind("protocol,degree,model,x,mean,ci95", 0) != 0)
    throw DataError(path + ": not a stress CSV (expected header protocol,degree,model,x,mean,ci95,n)");
  StressReport rep;
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() < 6) throw DataError(path + ": row " + std::to_string(line_no) + " has too few cells");
    try {
      rep.cells.push_back({parse_protocol(cells[0]), std::stoi(cells[1]), cells[2], std::stod(cells[3]),
                           std::stod(cells[4]), std::stod(cells[5]), {}});
    } catch (const std::logic_error&) {
      throw DataError(path + ": row " + std::to_string(line_no) + ": bad number");
    }
  }
  return rep;
}

}  // namespace rootlab::cli
