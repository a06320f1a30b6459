#include "rootlab/dataset.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "rootlab/roots.hpp"

namespace rootlab {

namespace {

constexpr int kMaxResamplesPerRow = 1000;

// 53-bit uniform on [0, 1); avoids implementation-defined distributions.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Polynomial draw_polynomial(const DatasetConfig& cfg, std::mt19937_64& rng) {
  std::vector<double> c(static_cast<std::size_t>(cfg.degree + 1));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = cfg.lo + (cfg.hi - cfg.lo) * unit_uniform(rng);
  if (cfg.monic) c[0] = 1.0;
  return Polynomial(std::move(c));
}

struct LabeledRow {
  FeatureVector features;
  int label;
};

LabeledRow label_and_featurize(const Polynomial& p, const std::set<Family>& families) {
  const RootProfile prof = classify_root_profile(p);
  return {dataset_features(p, families), prof.class_label};
}

void store_row(LabeledDataset& ds, Eigen::Index row, const Polynomial& p, const LabeledRow& lr) {
  for (std::size_t j = 0; j < lr.features.values.size(); ++j)
    ds.features(row, static_cast<Eigen::Index>(j)) = lr.features.values[j];
  for (int power = ds.config.degree; power >= 0; --power)
    ds.coefficients(row, ds.config.degree - power) = p.coefficient(power);
  ds.labels[static_cast<std::size_t>(row)] = lr.label;
}

LabeledDataset empty_like(const DatasetConfig& cfg, Eigen::Index rows) {
  LabeledDataset ds;
  ds.config = cfg;
  ds.feature_names = dataset_feature_names(cfg.degree, cfg.families);
  ds.features.resize(rows, static_cast<Eigen::Index>(ds.feature_names.size()));
  ds.coefficients.resize(rows, cfg.degree + 1);
  ds.labels.assign(static_cast<std::size_t>(rows), 0);
  return ds;
}

std::map<int, std::vector<int>> rows_by_class(const std::vector<int>& labels) {
  std::map<int, std::vector<int>> out;
  for (std::size_t i = 0; i < labels.size(); ++i) out[labels[i]].push_back(static_cast<int>(i));
  return out;
}

void format_double(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

int infer_degree(const std::vector<std::string>& names, bool* monic) {
  if (names.size() >= 3 && names[0] == "a" && names[1] == "b" && names[2] == "c") {
    *monic = false;
    return 2;
  }
  int degree = 0;
  while (degree < static_cast<int>(names.size()) && degree < 5 &&
         names[static_cast<std::size_t>(degree)] == std::string(1, static_cast<char>('A' + degree)))
    ++degree;
  if (degree < 3) throw DataError("CSV header does not start with raw coefficient columns (a,b,c or A,B,...)");
  *monic = true;
  return degree;
}

}  // namespace

DatasetConfig DatasetConfig::for_degree(int degree, int n_samples, std::uint64_t seed) {
  DatasetConfig cfg;
  cfg.degree = degree;
  cfg.n_samples = n_samples;
  cfg.seed = seed;
  cfg.monic = degree != 2;
  return cfg;
}

void DatasetConfig::validate() const {
  if (degree < 2 || degree > 5) throw DataError("degree must be in 2..5, got " + std::to_string(degree));
  if (!(lo < hi)) throw DataError("coefficient range requires lo < hi");
  if (n_samples <= 0) throw DataError("n_samples must be positive");
}

std::map<int, int> LabeledDataset::class_counts() const {
  std::map<int, int> out;
  for (int y : labels) ++out[y];
  return out;
}

Polynomial LabeledDataset::polynomial(Eigen::Index row) const {
  std::vector<double> c(static_cast<std::size_t>(coefficients.cols()));
  for (Eigen::Index j = 0; j < coefficients.cols(); ++j) c[static_cast<std::size_t>(j)] = coefficients(row, j);
  return Polynomial(std::move(c));
}

Eigen::Index LabeledDataset::column(const std::string& name) const {
  const auto it = std::find(feature_names.begin(), feature_names.end(), name);
  if (it == feature_names.end()) throw DataError("dataset has no column '" + name + "'");
  return static_cast<Eigen::Index>(it - feature_names.begin());
}

Eigen::MatrixXd LabeledDataset::columns(const std::vector<std::string>& names) const {
  Eigen::MatrixXd out(rows(), static_cast<Eigen::Index>(names.size()));
  for (std::size_t j = 0; j < names.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = features.col(column(names[j]));
  return out;
}

LabeledDataset LabeledDataset::subset(const std::vector<int>& row_ids) const {
  LabeledDataset out;
  out.config = config;
  out.config.n_samples = static_cast<int>(row_ids.size());
  out.feature_names = feature_names;
  out.features = features(row_ids, Eigen::placeholders::all);
  out.coefficients = coefficients(row_ids, Eigen::placeholders::all);
  out.labels.reserve(row_ids.size());
  for (int r : row_ids) out.labels.push_back(labels[static_cast<std::size_t>(r)]);
  return out;
}

std::mt19937_64 row_stream(std::uint64_t seed, std::uint64_t row, std::uint64_t tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(row), static_cast<std::uint32_t>(row >> 32),
                    static_cast<std::uint32_t>(tag)};
  return std::mt19937_64(seq);
}

LabeledDataset generate(const DatasetConfig& config) {
  config.validate();
  LabeledDataset ds = empty_like(config, config.n_samples);
  for (Eigen::Index row = 0; row < config.n_samples; ++row) {
    auto rng = row_stream(config.seed, static_cast<std::uint64_t>(row));
    for (int attempt = 0;; ++attempt) {
      const Polynomial p = draw_polynomial(config, rng);
      try {
        store_row(ds, row, p, label_and_featurize(p, config.families));
        break;
      } catch (const NumericError&) {
        if (attempt >= kMaxResamplesPerRow) throw;
        ++ds.n_resampled;
      }
    }
  }
  return ds;
}

LabeledDataset from_polynomials(const DatasetConfig& config, const std::vector<Polynomial>& polys) {
  DatasetConfig cfg = config;
  cfg.n_samples = static_cast<int>(polys.size());
  LabeledDataset ds = empty_like(cfg, static_cast<Eigen::Index>(polys.size()));
  for (std::size_t i = 0; i < polys.size(); ++i) {
    if (polys[i].degree() != cfg.degree) throw DataError("polynomial degree does not match dataset degree");
    store_row(ds, static_cast<Eigen::Index>(i), polys[i], label_and_featurize(polys[i], cfg.families));
  }
  return ds;
}

std::vector<Fold> stratified_kfold(const std::vector<int>& labels, int k, std::uint64_t seed) {
  if (k < 2) throw DataError("stratified_kfold requires k >= 2");
  const auto by_class = rows_by_class(labels);
  std::vector<Fold> folds(static_cast<std::size_t>(k));
  std::vector<int> fold_of(labels.size(), 0);
  std::mt19937_64 rng(seed);
  int offset = 0;
  for (const auto& [cls, members] : by_class) {
    if (static_cast<int>(members.size()) < k)
      throw DataError("class " + std::to_string(cls) + " has " + std::to_string(members.size()) +
                      " rows, fewer than k = " + std::to_string(k));
    std::vector<int> shuffled = members;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    // Round-robin, continuing where the previous class stopped so fold sizes stay level.
    for (std::size_t i = 0; i < shuffled.size(); ++i)
      fold_of[static_cast<std::size_t>(shuffled[i])] = static_cast<int>((offset + static_cast<int>(i)) % k);
    offset = (offset + static_cast<int>(shuffled.size())) % k;
  }
  for (std::size_t row = 0; row < labels.size(); ++row) {
    for (int f = 0; f < k; ++f) {
      auto& fold = folds[static_cast<std::size_t>(f)];
      (fold_of[row] == f ? fold.test : fold.train).push_back(static_cast<int>(row));
    }
  }
  return folds;
}

Fold stratified_split(const std::vector<int>& labels, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw DataError("test_fraction must lie in (0, 1)");
  std::mt19937_64 rng(seed);
  Fold out;
  for (const auto& [cls, members] : rows_by_class(labels)) {
    std::vector<int> shuffled = members;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto n_test = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(shuffled.size())));
    out.test.insert(out.test.end(), shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(n_test));
    out.train.insert(out.train.end(), shuffled.begin() + static_cast<std::ptrdiff_t>(n_test), shuffled.end());
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

std::vector<int> stratified_subsample(const std::vector<int>& labels, int n, std::uint64_t seed, bool* repaired) {
  if (n <= 0) throw DataError("subsample size must be positive");
  if (repaired) *repaired = false;
  if (n >= static_cast<int>(labels.size())) {
    std::vector<int> all(labels.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    return all;
  }
  const auto by_class = rows_by_class(labels);
  const double total = static_cast<double>(labels.size());

  // Largest-remainder allocation, then lift empty classes to one row.
  std::map<int, int> quota;
  std::vector<std::pair<double, int>> remainders;
  int assigned = 0;
  for (const auto& [cls, members] : by_class) {
    const double exact = n * static_cast<double>(members.size()) / total;
    quota[cls] = static_cast<int>(std::floor(exact));
    assigned += quota[cls];
    remainders.emplace_back(exact - std::floor(exact), cls);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; assigned < n && i < remainders.size(); ++i, ++assigned) ++quota[remainders[i].second];
  for (auto& [cls, q] : quota) {
    if (q > 0) continue;
    q = 1;
    if (repaired) *repaired = true;
    // Take the row from the currently largest quota.
    auto largest = std::max_element(quota.begin(), quota.end(),
                                    [](const auto& a, const auto& b) { return a.second < b.second; });
    if (largest->second > 1) --largest->second;
  }

  std::mt19937_64 rng(seed);
  std::vector<int> out;
  for (const auto& [cls, members] : by_class) {
    std::vector<int> shuffled = members;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const int take = std::min<int>(quota[cls], static_cast<int>(shuffled.size()));
    out.insert(out.end(), shuffled.begin(), shuffled.begin() + take);
  }
  std::sort(out.begin(), out.end());
  return out;
}

LabeledDataset add_noise(const LabeledDataset& ds, double sigma, std::uint64_t seed) {
  if (sigma < 0.0) throw DataError("noise sigma must be non-negative");
  if (sigma == 0.0) return ds;
  LabeledDataset out = ds;
  const int first_free = ds.config.monic ? 1 : 0;
  for (Eigen::Index row = 0; row < ds.rows(); ++row) {
    auto rng = row_stream(seed, static_cast<std::uint64_t>(row), /*tag=*/0x6e6f697365ULL);
    std::normal_distribution<double> noise(0.0, sigma);
    Polynomial p = ds.polynomial(row);
    std::vector<double> c = p.coeffs();
    for (std::size_t j = static_cast<std::size_t>(first_free); j < c.size(); ++j) c[j] += noise(rng);
    const Polynomial noisy(std::move(c));
    const FeatureVector fv = dataset_features(noisy, ds.config.families);
    for (std::size_t j = 0; j < fv.values.size(); ++j)
      out.features(row, static_cast<Eigen::Index>(j)) = fv.values[j];
    for (int power = ds.config.degree; power >= 0; --power)
      out.coefficients(row, ds.config.degree - power) = noisy.coefficient(power);
  }
  return out;
}

void write_csv(const LabeledDataset& ds, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot open '" + path + "' for writing");
  std::string line;
  for (const auto& name : ds.feature_names) {
    line += name;
    line += ',';
  }
  line += "label\n";
  os << line;
  for (Eigen::Index r = 0; r < ds.rows(); ++r) {
    line.clear();
    for (Eigen::Index c = 0; c < ds.features.cols(); ++c) {
      format_double(line, ds.features(r, c));
      line += ',';
    }
    line += std::to_string(ds.labels[static_cast<std::size_t>(r)]);
    line += '\n';
    os << line;
  }
  if (!os) throw DataError("failed writing '" + path + "'");
}

LabeledDataset read_csv(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(is, line)) throw DataError(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header = split_csv_line(line);
  const auto label_it = std::find(header.begin(), header.end(), "label");
  if (label_it == header.end()) throw DataError(path + ": missing 'label' column");
  const auto label_col = static_cast<std::size_t>(label_it - header.begin());

  std::vector<std::string> names;
  for (std::size_t i = 0; i < header.size(); ++i)
    if (i != label_col) names.push_back(header[i]);

  bool monic = true;
  const int degree = infer_degree(names, &monic);
  const int n_raw = degree == 2 ? 3 : degree;

  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw DataError(path + ": row " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                      " cells, expected " + std::to_string(header.size()));
    std::vector<double> values;
    values.reserve(names.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const std::string& cell = cells[i];
      char* end = nullptr;
      errno = 0;
      if (i == label_col) {
        const long v = std::strtol(cell.c_str(), &end, 10);
        if (cell.empty() || *end != '\0' || errno != 0)
          throw DataError(path + ": row " + std::to_string(line_no) + ", column 'label': bad integer '" + cell + "'");
        labels.push_back(static_cast<int>(v));
        continue;
      }
      const double v = std::strtod(cell.c_str(), &end);
      if (cell.empty() || *end != '\0' || !std::isfinite(v))
        throw DataError(path + ": row " + std::to_string(line_no) + ", column '" + header[i] + "': bad number '" +
                        cell + "'");
      values.push_back(v);
    }
    rows.push_back(std::move(values));
  }

  LabeledDataset ds;
  ds.config.degree = degree;
  ds.config.monic = monic;
  ds.config.n_samples = static_cast<int>(rows.size());
  ds.config.families.clear();
  for (Family f : kAllFamilies) {
    const auto& fn = family_feature_names(f);
    if (std::all_of(fn.begin(), fn.end(),
                    [&](const std::string& n) { return std::find(names.begin(), names.end(), n) != names.end(); }))
      ds.config.families.insert(f);
  }
  ds.feature_names = names;
  ds.labels = std::move(labels);
  ds.features.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(names.size()));
  ds.coefficients.resize(static_cast<Eigen::Index>(rows.size()), degree + 1);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto ri = static_cast<Eigen::Index>(r);
    for (std::size_t c = 0; c < names.size(); ++c) ds.features(ri, static_cast<Eigen::Index>(c)) = rows[r][c];
    if (monic) {
      ds.coefficients(ri, 0) = 1.0;
      for (int j = 0; j < n_raw; ++j) ds.coefficients(ri, j + 1) = rows[r][static_cast<std::size_t>(j)];
    } else {
      for (int j = 0; j < n_raw; ++j) ds.coefficients(ri, j) = rows[r][static_cast<std::size_t>(j)];
    }
  }
  return ds;
}

std::string default_csv_name(const DatasetConfig& config) {
  return "deg" + std::to_string(config.degree) + "_n" + std::to_string(config.n_samples) + "_seed" +
         std::to_string(config.seed) + ".csv";
}

}  // namespace rootlab
