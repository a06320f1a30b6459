#include "rootlab/features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rootlab/roots.hpp"

namespace rootlab {

namespace {

void require_degree(const Polynomial& p, int degree, const char* who) {
  if (p.degree() != degree)
    throw DataError(std::string(who) + ": expected degree " + std::to_string(degree) + ", got " +
                    std::to_string(p.degree()));
}

Polynomial to_monic(const Polynomial& p) {
  if (p.leading() == 1.0) return p;
  std::vector<double> c = p.coeffs();
  const double lead = c.front();
  for (double& v : c) v /= lead;
  c.front() = 1.0;
  return Polynomial(std::move(c));
}

// Quintic coefficients A..E of x^5 + A x^4 + B x^3 + C x^2 + D x + E.
struct QuinticCoeffs {
  double a, b, c, d, e;
};

QuinticCoeffs quintic_coeffs(const Polynomial& monic) {
  return {monic.coefficient(4), monic.coefficient(3), monic.coefficient(2), monic.coefficient(1),
          monic.coefficient(0)};
}

int coefficient_sign_changes(const std::vector<double>& seq) {
  std::vector<int> signs;
  signs.reserve(seq.size());
  for (double v : seq) signs.push_back(scalar_traits::sign(v));
  return detail::count_alternations(signs);
}

std::vector<double> real_parts_of_real_roots(const Polynomial& p) {
  std::vector<double> out;
  if (p.degree() < 1) return out;
  for (const auto& r : roots_numeric(p))
    if (std::abs(r.imag()) < kFeatureImagTolerance) out.push_back(r.real());
  std::sort(out.begin(), out.end());
  return out;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Population standard deviation; 0 for an empty set.
double stddev_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  const double m = mean_of(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(v.size()));
}

const std::vector<std::string> kSturmNames = {"sturm_v_neg_inf", "sturm_v_pos_inf", "sturm_real_roots",
                                              "sturm_v_m10",     "sturm_v_m1",      "sturm_v_0",
                                              "sturm_v_1",       "sturm_v_10"};
const std::vector<std::string> kDescartesNames = {"descartes_pos",      "descartes_neg",
                                                  "descartes_total",    "descartes_min_complex",
                                                  "descartes_pos_parity", "descartes_neg_parity"};
const std::vector<std::string> kNewtonNames = {"newton_s1",   "newton_s2",   "newton_s3",   "newton_s4",
                                               "newton_s5",   "newton_mean", "newton_var",  "newton_rho1",
                                               "newton_rho2", "newton_rho3"};
const std::vector<std::string> kCriticalNames = {"crit_count",    "crit_pos_min",   "crit_pos_max",
                                                 "crit_pos_mean", "crit_pos_std",   "crit_val_min",
                                                 "crit_val_max",  "crit_val_mean",  "inflection_count",
                                                 "crit8"};
const std::vector<std::string> kHybridNames = {
    "tschirnhaus_i2", "tschirnhaus_i3", "tschirnhaus_i4", "tschirnhaus_i5", "combo_abc_de",
    "combo_a2e_b2d_c3", "combo_ad_be", "combo_ae_cd", "diff_b2_ac", "diff_c2_bd",
    "diff_d2_ce", "ratio_a2_b", "ratio_a3_c", "ratio_a4_d", "ratio_a5_e", "ratio_b2_ac"};
const std::vector<std::string> kDecompositionNames = {
    "decomp_near_zero", "decomp_mag_ratio", "decomp_variance", "decomp_x_factor",
    "sylvester_m1",     "sylvester_m2",     "sylvester_m3",    "sylvester_m4"};

template <std::size_t N>
void append(FeatureVector& fv, const std::vector<std::string>& names, const std::array<double, N>& values) {
  fv.names.insert(fv.names.end(), names.begin(), names.end());
  fv.values.insert(fv.values.end(), values.begin(), values.end());
}

}  // namespace

double FeatureVector::at(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return values[i];
  throw DataError("feature '" + std::string(name) + "' not present");
}

Polynomial shift_argument(const Polynomial& p, double shift) {
  // Repeated synthetic division: coefficients of p(y + t) with t = -shift.
  std::vector<double> c = p.coeffs();
  const double t = -shift;
  const std::size_t n = c.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = 1; j < n - i; ++j) c[j] += t * c[j - 1];
  return Polynomial(std::move(c));
}

std::vector<double> power_sums(const Polynomial& monic, int k) {
  const int n = monic.degree();
  // Elementary symmetric polynomials: e_i = (-1)^i * a_{n-i} for a monic polynomial.
  std::vector<double> e(static_cast<std::size_t>(n + 1), 0.0);
  for (int i = 1; i <= n; ++i) e[static_cast<std::size_t>(i)] = ((i % 2) ? -1.0 : 1.0) * monic.coefficient(n - i);
  std::vector<double> s(static_cast<std::size_t>(k + 1), 0.0);
  for (int m = 1; m <= k; ++m) {
    double acc = 0.0;
    for (int i = 1; i < m && i <= n; ++i) {
      const double term = e[static_cast<std::size_t>(i)] * s[static_cast<std::size_t>(m - i)];
      acc += (i % 2) ? term : -term;
    }
    if (m <= n) acc += ((m % 2) ? 1.0 : -1.0) * m * e[static_cast<std::size_t>(m)];
    s[static_cast<std::size_t>(m)] = acc;
  }
  return {s.begin() + 1, s.end()};
}

DiscriminantFeatures discriminant_features(const Polynomial& p, CubicBetaForm beta_form) {
  DiscriminantFeatures f;
  f.degree = p.degree();
  switch (p.degree()) {
    case 2: {
      const double a = p.coefficient(2), b = p.coefficient(1), c = p.coefficient(0);
      f.ratio = b * b / guard(a * c);
      break;
    }
    case 3: {
      const Polynomial m = to_monic(p);
      const double A = m.coefficient(2), B = m.coefficient(1), C = m.coefficient(0);
      const double a3 = A / 3.0;
      f.alpha = a3 * a3 - B / 3.0;
      f.beta = beta_form == CubicBetaForm::kStandard ? 2.0 * a3 * a3 * a3 - a3 * B + C
                                                      : 2.0 * a3 * a3 * a3 - a3 * (B / 3.0) + C;
      f.ratio = f.beta * f.beta / guard(f.alpha * f.alpha * f.alpha);
      break;
    }
    case 4: {
      const Polynomial m = to_monic(p);
      const double a = 1.0, b = m.coefficient(3), c = m.coefficient(2), d = m.coefficient(1),
                   e = m.coefficient(0);
      f.inv_i = 12.0 * a * e - 3.0 * b * d + c * c;
      f.inv_j = 72.0 * a * c * e + 9.0 * b * c * d - 27.0 * a * d * d - 27.0 * b * b * e - 2.0 * c * c * c;
      f.delta_like = 4.0 * f.inv_i * f.inv_i * f.inv_i - f.inv_j * f.inv_j;
      const Polynomial dep = shift_argument(m, b / 4.0);
      f.depressed_p = dep.coefficient(2);
      f.depressed_q = dep.coefficient(1);
      f.depressed_r = dep.coefficient(0);
      f.sign_i = scalar_traits::sign(f.inv_i);
      f.sign_delta = scalar_traits::sign(f.delta_like);
      break;
    }
    default:
      throw DataError("discriminant_features: degree " + std::to_string(p.degree()) +
                      " has no closed-form feature set (use the quintic feature bank)");
  }
  return f;
}

std::vector<std::string> discriminant_feature_names(int degree) {
  switch (degree) {
    case 2: return {"disc_ratio"};
    case 3: return {"alpha", "beta", "disc_ratio"};
    case 4: return {"inv_i", "inv_j", "inv_delta", "dep_p", "dep_q", "dep_r", "sign_i", "sign_delta"};
    default:
      throw DataError("no discriminant features for degree " + std::to_string(degree));
  }
}

FeatureVector DiscriminantFeatures::to_vector() const {
  FeatureVector fv;
  fv.degree = degree;
  fv.names = discriminant_feature_names(degree);
  switch (degree) {
    case 2: fv.values = {ratio}; break;
    case 3: fv.values = {alpha, beta, ratio}; break;
    case 4:
      fv.values = {inv_i, inv_j, delta_like, depressed_p, depressed_q, depressed_r, sign_i, sign_delta};
      break;
    default: break;
  }
  return fv;
}

std::array<double, 8> sturm_features(const Polynomial& p) {
  require_degree(p, 5, "sturm_features");
  const auto chain = sturm_chain(p);
  const double neg = sign_changes_at_infinity(chain, -1);
  const double pos = sign_changes_at_infinity(chain, +1);
  return {neg,
          pos,
          neg - pos,
          static_cast<double>(sign_changes_at(chain, -10.0)),
          static_cast<double>(sign_changes_at(chain, -1.0)),
          static_cast<double>(sign_changes_at(chain, 0.0)),
          static_cast<double>(sign_changes_at(chain, 1.0)),
          static_cast<double>(sign_changes_at(chain, 10.0))};
}

std::array<double, 6> descartes_features(const Polynomial& p) {
  require_degree(p, 5, "descartes_features");
  std::vector<double> pos_seq = p.coeffs();
  std::vector<double> neg_seq = p.coeffs();
  // p(-x): flip the sign of odd powers.
  for (int power = 0; power <= 5; ++power)
    if (power % 2 == 1) neg_seq[static_cast<std::size_t>(5 - power)] *= -1.0;
  const int pos = coefficient_sign_changes(pos_seq);
  const int neg = coefficient_sign_changes(neg_seq);
  return {static_cast<double>(pos), static_cast<double>(neg), static_cast<double>(pos + neg),
          static_cast<double>(5 - (pos + neg)), static_cast<double>(pos % 2), static_cast<double>(neg % 2)};
}

std::array<double, 10> newton_features(const Polynomial& p) {
  require_degree(p, 5, "newton_features");
  const auto s = power_sums(to_monic(p), 5);
  const double mean = s[0] / 5.0;
  const double var = s[1] / 5.0 - mean * mean;
  const double g2 = guard(s[1]);
  return {s[0], s[1], s[2], s[3], s[4], mean, var, s[0] * s[0] / g2, s[2] * s[2] / (g2 * g2 * g2),
          s[3] / (g2 * g2)};
}

std::array<double, 10> critical_point_features(const Polynomial& p) {
  require_degree(p, 5, "critical_point_features");
  const Polynomial dp = derivative(p);
  const std::vector<double> crit = real_parts_of_real_roots(dp);
  const std::vector<double> inflections = real_parts_of_real_roots(derivative(dp));

  std::vector<double> values;
  values.reserve(crit.size());
  for (double c : crit) values.push_back(evaluate(p, c));

  std::vector<int> signs;
  signs.reserve(values.size());
  for (double v : values) signs.push_back(std::abs(v) < kCriticalValueZero ? 0 : scalar_traits::sign(v));
  const int crit8 = detail::count_alternations(signs);

  const auto min_or_zero = [](const std::vector<double>& v) {
    return v.empty() ? 0.0 : *std::min_element(v.begin(), v.end());
  };
  const auto max_or_zero = [](const std::vector<double>& v) {
    return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
  };
  return {static_cast<double>(crit.size()),
          min_or_zero(crit),
          max_or_zero(crit),
          mean_of(crit),
          stddev_of(crit),
          min_or_zero(values),
          max_or_zero(values),
          mean_of(values),
          static_cast<double>(inflections.size()),
          static_cast<double>(crit8)};
}

std::array<double, 16> hybrid_symbolic_features(const Polynomial& p) {
  require_degree(p, 5, "hybrid_symbolic_features");
  const Polynomial m = to_monic(p);
  const auto [A, B, C, D, E] = quintic_coeffs(m);
  // Tschirnhaus reduction x = y - A/5 removes the y^4 term.
  const Polynomial dep = shift_argument(m, A / 5.0);
  return {dep.coefficient(3),
          dep.coefficient(2),
          dep.coefficient(1),
          dep.coefficient(0),
          A * B * C - D * E,
          A * A * E - B * B * D + C * C * C,
          A * D - B * E,
          A * E - C * D,
          B * B - A * C,
          C * C - B * D,
          D * D - C * E,
          A * A / guard(B),
          A * A * A / guard(C),
          A * A * A * A / guard(D),
          A * A * A * A * A / guard(E),
          B * B / guard(A * C)};
}

std::array<double, 8> decomposition_features(const Polynomial& p) {
  require_degree(p, 5, "decomposition_features");
  const auto [A, B, C, D, E] = quintic_coeffs(to_monic(p));
  const std::array<double, 5> coeffs = {A, B, C, D, E};

  int near_zero = 0;
  double max_mag = 0.0;
  double min_nonzero = 0.0;
  bool have_nonzero = false;
  for (double c : coeffs) {
    const double mag = std::abs(c);
    if (mag < 0.1) ++near_zero;
    max_mag = std::max(max_mag, mag);
    if (mag > 0.0) {
      min_nonzero = have_nonzero ? std::min(min_nonzero, mag) : mag;
      have_nonzero = true;
    }
  }
  const double mag_ratio = have_nonzero ? max_mag / guard(min_nonzero) : 0.0;
  const double mean = (A + B + C + D + E) / 5.0;
  double var = 0.0;
  for (double c : coeffs) var += (c - mean) * (c - mean);
  var /= 5.0;

  const double s = 1.0 + A * A + B * B + C * C + D * D + E * E;
  return {static_cast<double>(near_zero),
          mag_ratio,
          var,
          std::abs(E) < 0.1 ? 1.0 : 0.0,
          std::abs(A * D - B * C) / s,
          std::abs(B * E - C * D) / s,
          std::abs(A * E - B * D) / s,
          std::abs(C * E - D * D) / s};
}

std::string_view family_name(Family f) {
  switch (f) {
    case Family::kSturm: return "sturm";
    case Family::kDescartes: return "descartes";
    case Family::kNewton: return "newton";
    case Family::kCriticalPoints: return "critical_points";
    case Family::kHybrid: return "hybrid";
    case Family::kDecomposition: return "decomposition";
  }
  return "";
}

Family parse_family(std::string_view name) {
  for (Family f : kAllFamilies)
    if (family_name(f) == name) return f;
  throw DataError("unknown feature family '" + std::string(name) +
                  "' (expected sturm, descartes, newton, critical_points, hybrid or decomposition)");
}

std::set<Family> parse_families(const std::vector<std::string>& names) {
  std::set<Family> out;
  for (const auto& n : names) {
    if (n == "all") {
      out.insert(kAllFamilies.begin(), kAllFamilies.end());
    } else if (!n.empty()) {
      out.insert(parse_family(n));
    }
  }
  return out;
}

const std::vector<std::string>& family_feature_names(Family f) {
  switch (f) {
    case Family::kSturm: return kSturmNames;
    case Family::kDescartes: return kDescartesNames;
    case Family::kNewton: return kNewtonNames;
    case Family::kCriticalPoints: return kCriticalNames;
    case Family::kHybrid: return kHybridNames;
    case Family::kDecomposition: return kDecompositionNames;
  }
  return kSturmNames;
}

std::vector<std::string> raw_coefficient_names(int degree) {
  if (degree == 2) return {"a", "b", "c"};
  if (degree < 2 || degree > 5) throw DataError("unsupported degree " + std::to_string(degree));
  std::vector<std::string> out;
  for (int i = 0; i < degree; ++i) out.emplace_back(1, static_cast<char>('A' + i));
  return out;
}

std::vector<std::string> assembled_feature_names(int degree, const std::set<Family>& families) {
  std::vector<std::string> names = raw_coefficient_names(degree);
  for (Family f : kAllFamilies) {
    if (!families.count(f)) continue;
    const auto& fn = family_feature_names(f);
    names.insert(names.end(), fn.begin(), fn.end());
  }
  return names;
}

FeatureVector assemble_features(const Polynomial& p, const std::set<Family>& families) {
  require_degree(p, 5, "assemble_features");
  FeatureVector fv;
  fv.degree = 5;
  fv.names = raw_coefficient_names(5);
  for (int power = 4; power >= 0; --power) fv.values.push_back(p.coefficient(power));
  for (Family f : kAllFamilies) {
    if (!families.count(f)) continue;
    switch (f) {
      case Family::kSturm: append(fv, kSturmNames, sturm_features(p)); break;
      case Family::kDescartes: append(fv, kDescartesNames, descartes_features(p)); break;
      case Family::kNewton: append(fv, kNewtonNames, newton_features(p)); break;
      case Family::kCriticalPoints: append(fv, kCriticalNames, critical_point_features(p)); break;
      case Family::kHybrid: append(fv, kHybridNames, hybrid_symbolic_features(p)); break;
      case Family::kDecomposition: append(fv, kDecompositionNames, decomposition_features(p)); break;
    }
  }
  return fv;
}

FeatureVector assemble_features(const Polynomial& p, const std::vector<std::string>& family_names) {
  return assemble_features(p, parse_families(family_names));
}

std::vector<std::string> dataset_feature_names(int degree, const std::set<Family>& families) {
  if (degree == 5) return assembled_feature_names(5, families);
  std::vector<std::string> names = raw_coefficient_names(degree);
  const auto disc = discriminant_feature_names(degree);
  names.insert(names.end(), disc.begin(), disc.end());
  return names;
}

FeatureVector dataset_features(const Polynomial& p, const std::set<Family>& families) {
  if (p.degree() == 5) return assemble_features(p, families);
  FeatureVector fv;
  fv.degree = p.degree();
  fv.names = raw_coefficient_names(p.degree());
  if (p.degree() == 2) {
    fv.values = {p.coefficient(2), p.coefficient(1), p.coefficient(0)};
  } else {
    for (int power = p.degree() - 1; power >= 0; --power) fv.values.push_back(p.coefficient(power));
  }
  const FeatureVector disc = discriminant_features(p).to_vector();
  fv.names.insert(fv.names.end(), disc.names.begin(), disc.names.end());
  fv.values.insert(fv.values.end(), disc.values.begin(), disc.values.end());
  return fv;
}

}  // namespace rootlab
