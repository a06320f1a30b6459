#include "rootlab/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace rootlab {

namespace {

// Parlett-Reinsch balancing by powers of two (exact scalings).
void balance(Eigen::MatrixXd& m) {
  constexpr double kGamma = 0.95;
  const Eigen::Index n = m.rows();
  bool changed = true;
  while (changed) {
    changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double row_norm = m.row(i).lpNorm<1>() - std::abs(m(i, i));
      const double col_norm = m.col(i).lpNorm<1>() - std::abs(m(i, i));
      if (row_norm == 0.0 || col_norm == 0.0) continue;
      int exponent = 0;
      std::frexp(row_norm / col_norm, &exponent);
      exponent /= 2;
      if (exponent == 0) continue;
      const double scaled_col = std::ldexp(col_norm, exponent);
      const double scaled_row = std::ldexp(row_norm, -exponent);
      if (scaled_col + scaled_row < kGamma * (col_norm + row_norm)) {
        changed = true;
        m.row(i) *= std::ldexp(1.0, -exponent);
        m.col(i) *= std::ldexp(1.0, exponent);
      }
    }
  }
}

std::complex<double> newton_polish(const Polynomial& p, const Polynomial& dp, std::complex<double> z) {
  for (int it = 0; it < 8; ++it) {
    const auto fz = evaluate(p, z);
    const auto dfz = evaluate(dp, z);
    if (std::abs(dfz) == 0.0) break;
    const auto next = z - fz / dfz;
    if (!(std::abs(evaluate(p, next)) < std::abs(fz))) break;
    z = next;
  }
  return z;
}

Polynomial monic(const Polynomial& p) {
  std::vector<double> c = p.coeffs();
  const double lead = c.front();
  for (double& v : c) v /= lead;
  c.front() = 1.0;
  return Polynomial(std::move(c));
}

}  // namespace

double normalized_residual(const Polynomial& p, std::complex<double> root) {
  const Polynomial q = monic(p);
  const double scale = 1.0 + q.max_abs_coefficient() *
                                 std::pow(std::max(1.0, std::abs(root)), static_cast<double>(q.degree()));
  return std::abs(evaluate(q, root)) / scale;
}

std::vector<std::complex<double>> roots_numeric(const Polynomial& p) {
  if (p.is_zero()) throw DataError("roots_numeric: zero polynomial");
  const int n = p.degree();
  if (n == 0) return {};
  for (double c : p.coeffs())
    if (!std::isfinite(c)) throw DataError("roots_numeric: non-finite coefficient");

  const Polynomial q = monic(p);
  if (n == 1) return {std::complex<double>(-q.coeffs()[1], 0.0)};

  // Companion matrix: ones on the subdiagonal, -a_{i} in the last column.
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  companion.diagonal(-1).setOnes();
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -q.coefficient(i);
  balance(companion);

  Eigen::EigenSolver<Eigen::MatrixXd> solver;
  solver.setMaxIterations(kRootIterationBudget);
  solver.compute(companion, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw RootFindingError("roots_numeric: QR iteration did not converge",
                           std::numeric_limits<double>::infinity());

  const Eigen::VectorXcd ev = solver.eigenvalues();
  std::vector<std::complex<double>> roots(ev.data(), ev.data() + ev.size());

  const Polynomial dq = derivative(q);
  double worst = 0.0;
  for (auto& r : roots) {
    double res = normalized_residual(q, r);
    if (res > kRootResidualBound) {
      r = newton_polish(q, dq, r);
      res = normalized_residual(q, r);
    }
    worst = std::max(worst, res);
  }
  if (!(worst <= kRootResidualBound))
    throw RootFindingError("roots_numeric: residual contract violated", worst);
  return roots;
}

int class_label_for(int degree, int n_real) { return (degree - n_real) / 2; }

int class_count_for(int degree) { return degree / 2 + 1; }

RootProfile profile_from_roots(int degree, const std::vector<std::complex<double>>& roots, double imag_tol) {
  RootProfile prof;
  prof.degree = degree;
  prof.min_imag_margin = 0.0;
  prof.min_complex_imag = std::numeric_limits<double>::infinity();
  prof.min_root_separation = std::numeric_limits<double>::infinity();

  std::vector<bool> is_real(roots.size());
  double max_real_imag = 0.0;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const double im = std::abs(roots[i].imag());
    is_real[i] = im < imag_tol;
    if (is_real[i]) {
      ++prof.n_real;
      max_real_imag = std::max(max_real_imag, im);
    } else {
      prof.min_complex_imag = std::min(prof.min_complex_imag, im);
    }
    for (std::size_t j = 0; j < i; ++j)
      prof.min_root_separation = std::min(prof.min_root_separation, std::abs(roots[i] - roots[j]));
  }
  prof.n_complex = static_cast<int>(roots.size()) - prof.n_real;

  // Numerical-degeneracy repair: complex roots must pair up.
  if (prof.n_complex % 2 == 1) {
    std::size_t pick = roots.size();
    for (std::size_t i = 0; i < roots.size(); ++i) {
      if (is_real[i]) continue;
      if (pick == roots.size() || std::abs(roots[i].imag()) < std::abs(roots[pick].imag())) pick = i;
    }
    is_real[pick] = true;
    max_real_imag = std::max(max_real_imag, std::abs(roots[pick].imag()));
    ++prof.n_real;
    --prof.n_complex;
    prof.parity_repaired = true;
    prof.min_complex_imag = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < roots.size(); ++i)
      if (!is_real[i]) prof.min_complex_imag = std::min(prof.min_complex_imag, std::abs(roots[i].imag()));
  }
  // Diagnostic: the largest |Im| that was still accepted as real, i.e. how
  // close the real decision came to the tolerance.
  prof.min_imag_margin = max_real_imag;
  prof.class_label = class_label_for(degree, prof.n_real);
  return prof;
}

RootProfile classify_root_profile(const Polynomial& p, double imag_tol) {
  return profile_from_roots(p.degree(), roots_numeric(p), imag_tol);
}

int exact_real_root_count(const RationalPolynomial& p,
                          const std::optional<std::pair<mpq_class, mpq_class>>& interval) {
  if (p.is_zero()) throw DataError("exact_real_root_count: zero polynomial");
  if (p.degree() == 0) return 0;
  const RationalPolynomial sf = squarefree_part(p);
  const auto chain = sturm_chain(sf);
  if (!interval) return sign_changes_at_infinity(chain, -1) - sign_changes_at_infinity(chain, +1);

  const auto& [lo, hi] = *interval;
  if (!(lo < hi)) return 0;
  // V(lo) - V(hi) counts roots in (lo, hi]; drop hi itself for an open interval.
  int count = sign_changes_at(chain, lo) - sign_changes_at(chain, hi);
  if (sgn(evaluate(sf, hi)) == 0) --count;
  return count;
}

}  // namespace rootlab
