#pragma once

// Feature bank for real-root classification.
//
// Degrees 2-4 get closed-form discriminant features.  Quintics get the
// 63-entry bank: 5 raw coefficients followed by six families in a fixed
// order (sturm, descartes, newton, critical_points, hybrid, decomposition).
// Every ratio goes through the epsilon guard g(d) = sign(d) * max(|d|, 1e-9)
// so that all values stay finite.

#include <array>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "rootlab/polynomial.hpp"

namespace rootlab {

inline constexpr double kRatioGuard = 1e-9;
inline constexpr double kFeatureImagTolerance = 1e-8;
inline constexpr double kCriticalValueZero = 1e-9;

// sign(d) * max(|d|, 1e-9), with sign(0) taken as +1.
inline double guard(double d) {
  const double mag = std::max(std::abs(d), kRatioGuard);
  return d < 0.0 ? -mag : mag;
}

struct FeatureVector {
  int degree = 0;
  std::vector<std::string> names;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  // Throws DataError when the name is absent.
  double at(std::string_view name) const;
};

// Closed-form features for degrees 2-4.
enum class CubicBetaForm {
  kStandard,  // q = 2(A/3)^3 - (A/3)B + C, the depressed-cubic constant
  kAsPrinted  // 2(A/3)^3 - (A/3)(B/3) + C
};

struct DiscriminantFeatures {
  int degree = 0;
  // degree 2
  double ratio = 0.0;  // b^2/(ac) for degree 2; beta^2/alpha^3 for degree 3
  // degree 3
  double alpha = 0.0;
  double beta = 0.0;
  // degree 4
  double inv_i = 0.0;
  double inv_j = 0.0;
  double delta_like = 0.0;  // 4I^3 - J^2
  double depressed_p = 0.0;
  double depressed_q = 0.0;
  double depressed_r = 0.0;
  double sign_i = 0.0;
  double sign_delta = 0.0;

  FeatureVector to_vector() const;
};

DiscriminantFeatures discriminant_features(const Polynomial& p,
                                           CubicBetaForm beta_form = CubicBetaForm::kStandard);

// Column names produced by discriminant_features for a degree.
std::vector<std::string> discriminant_feature_names(int degree);

// Quintic families.  All require a degree-5 polynomial; the hybrid, newton and
// decomposition families additionally assume it is monic.
std::array<double, 8> sturm_features(const Polynomial& p);
std::array<double, 6> descartes_features(const Polynomial& p);
std::array<double, 10> newton_features(const Polynomial& p);
std::array<double, 10> critical_point_features(const Polynomial& p);
std::array<double, 16> hybrid_symbolic_features(const Polynomial& p);
std::array<double, 8> decomposition_features(const Polynomial& p);

// Power sums s_1..s_k of the roots of a monic polynomial via Newton's identities.
std::vector<double> power_sums(const Polynomial& monic, int k);

// Coefficients of p(y - shift), highest degree first (Taylor shift).
Polynomial shift_argument(const Polynomial& p, double shift);

enum class Family { kSturm, kDescartes, kNewton, kCriticalPoints, kHybrid, kDecomposition };

inline constexpr std::array<Family, 6> kAllFamilies = {Family::kSturm,          Family::kDescartes,
                                                       Family::kNewton,         Family::kCriticalPoints,
                                                       Family::kHybrid,         Family::kDecomposition};

std::string_view family_name(Family f);
// Accepts the canonical names (sturm, descartes, newton, critical_points,
// hybrid, decomposition); throws DataError otherwise.
Family parse_family(std::string_view name);
std::set<Family> parse_families(const std::vector<std::string>& names);

const std::vector<std::string>& family_feature_names(Family f);
// Raw coefficient column names for a degree: a,b,c for the quadratic,
// A,B,... for the monic degrees (the leading 1 is not stored).
std::vector<std::string> raw_coefficient_names(int degree);

// Raw coefficients followed by the selected families in canonical order.
FeatureVector assemble_features(const Polynomial& p, const std::set<Family>& families);
FeatureVector assemble_features(const Polynomial& p, const std::vector<std::string>& family_names);

// Column names assemble_features would produce.
std::vector<std::string> assembled_feature_names(int degree, const std::set<Family>& families);

// Full per-degree feature row used by the dataset generator: raw coefficients
// plus discriminant features (degrees 2-4) or the selected families (degree 5).
FeatureVector dataset_features(const Polynomial& p, const std::set<Family>& families);
std::vector<std::string> dataset_feature_names(int degree, const std::set<Family>& families);

}  // namespace rootlab
