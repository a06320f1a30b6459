#pragma once

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "rootlab/polynomial.hpp"

namespace rootlab {

inline constexpr double kLabelImagTolerance = 1e-10;
inline constexpr double kRootResidualBound = 1e-8;
inline constexpr int kRootIterationBudget = 200;

// All complex roots of p (with multiplicity), from the eigenvalues of the
// balanced companion matrix.  Every returned root r satisfies
//   |p(r)| / (1 + max|coeff| * max(1, |r|)^deg) <= 1e-8
// with p normalized to a monic leading coefficient; otherwise throws
// RootFindingError carrying the best residual seen.
std::vector<std::complex<double>> roots_numeric(const Polynomial& p);

// Normalized residual used by the contract above.
double normalized_residual(const Polynomial& p, std::complex<double> root);

struct RootProfile {
  int degree = 0;
  int n_real = 0;
  int n_complex = 0;
  int class_label = 0;
  // Smallest |Im| among roots classified real.
  double min_imag_margin = 0.0;
  // Smallest |Im| among roots classified complex (+inf if none).
  double min_complex_imag = 0.0;
  // Smallest pairwise distance between roots.
  double min_root_separation = 0.0;
  bool parity_repaired = false;
};

// Class label from the real-root count: (degree - n_real) / 2, i.e.
// degree 5: 5 real -> 0, 3 real -> 1, 1 real -> 2; degree 2: 2 -> 0, 0 -> 1.
int class_label_for(int degree, int n_real);
int class_count_for(int degree);

RootProfile classify_root_profile(const Polynomial& p, double imag_tol = kLabelImagTolerance);
RootProfile profile_from_roots(int degree, const std::vector<std::complex<double>>& roots,
                               double imag_tol = kLabelImagTolerance);

// Distinct real roots of p, in the open interval (lo, hi) if given, by an
// exact-rational Sturm chain on the squarefree part of p.
int exact_real_root_count(const RationalPolynomial& p,
                          const std::optional<std::pair<mpq_class, mpq_class>>& interval = std::nullopt);

}  // namespace rootlab
