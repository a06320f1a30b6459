#pragma once

// Dense univariate polynomials over a generic scalar field.
//
// Coefficients are stored highest degree first, matching the usual written
// form a_n x^n + ... + a_0.  The same templates serve double (numeric mode)
// and mpq_class (exact mode); everything scalar-specific goes through the
// small set of overloads in `scalar_traits`.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "rootlab/errors.hpp"

namespace rootlab {

namespace scalar_traits {

inline int sign(double x) { return (x > 0.0) - (x < 0.0); }
inline int sign(const mpq_class& x) { return sgn(x); }

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const mpq_class& x) { return std::abs(x.get_d()); }

inline bool is_zero(double x) { return x == 0.0; }
inline bool is_zero(const mpq_class& x) { return sgn(x) == 0; }

}  // namespace scalar_traits

template <typename Scalar>
class BasicPolynomial {
 public:
  using scalar_type = Scalar;

  // The zero polynomial.
  BasicPolynomial() = default;

  explicit BasicPolynomial(std::vector<Scalar> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

  BasicPolynomial(std::initializer_list<Scalar> coeffs) : coeffs_(coeffs) { trim(); }

  static BasicPolynomial constant(const Scalar& c) { return BasicPolynomial({c}); }

  // -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }

  const std::vector<Scalar>& coeffs() const { return coeffs_; }
  const Scalar& leading() const { return coeffs_.front(); }

  // Coefficient of x^power (zero outside the stored range).
  Scalar coefficient(int power) const {
    if (power < 0 || power > degree()) return Scalar(0);
    return coeffs_[static_cast<std::size_t>(degree() - power)];
  }

  double max_abs_coefficient() const {
    double m = 0.0;
    for (const auto& c : coeffs_) m = std::max(m, scalar_traits::magnitude(c));
    return m;
  }

  friend bool operator==(const BasicPolynomial& a, const BasicPolynomial& b) {
    return a.coeffs_ == b.coeffs_;
  }

 private:
  void trim() {
    auto first = std::find_if(coeffs_.begin(), coeffs_.end(),
                              [](const Scalar& c) { return !scalar_traits::is_zero(c); });
    coeffs_.erase(coeffs_.begin(), first);
  }

  std::vector<Scalar> coeffs_;
};

using Polynomial = BasicPolynomial<double>;
using RationalPolynomial = BasicPolynomial<mpq_class>;

template <typename Scalar>
struct DivRem {
  BasicPolynomial<Scalar> quotient;
  BasicPolynomial<Scalar> remainder;
};

// Horner evaluation.  X may differ from the coefficient scalar, e.g.
// evaluating a real polynomial at a complex point.
template <typename Scalar, typename X>
X evaluate(const BasicPolynomial<Scalar>& p, const X& x) {
  X acc(0);
  for (const auto& c : p.coeffs()) acc = acc * x + X(c);
  return acc;
}

inline std::complex<double> evaluate(const Polynomial& p, const std::complex<double>& z) {
  std::complex<double> acc(0.0, 0.0);
  for (double c : p.coeffs()) acc = acc * z + c;
  return acc;
}

template <typename Scalar>
BasicPolynomial<Scalar> derivative(const BasicPolynomial<Scalar>& p) {
  const int n = p.degree();
  if (n <= 0) return {};
  std::vector<Scalar> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Scalar c = p.coeffs()[static_cast<std::size_t>(i)] * (n - i);
    out.push_back(std::move(c));
  }
  return BasicPolynomial<Scalar>(std::move(out));
}

template <typename Scalar>
BasicPolynomial<Scalar> negate(const BasicPolynomial<Scalar>& p) {
  std::vector<Scalar> out;
  out.reserve(p.coeffs().size());
  for (const auto& c : p.coeffs()) out.push_back(Scalar(-c));
  return BasicPolynomial<Scalar>(std::move(out));
}

template <typename Scalar>
BasicPolynomial<Scalar> operator*(const BasicPolynomial<Scalar>& a, const BasicPolynomial<Scalar>& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Scalar> out(a.coeffs().size() + b.coeffs().size() - 1, Scalar(0));
  for (std::size_t i = 0; i < a.coeffs().size(); ++i)
    for (std::size_t j = 0; j < b.coeffs().size(); ++j) out[i + j] += a.coeffs()[i] * b.coeffs()[j];
  return BasicPolynomial<Scalar>(std::move(out));
}

template <typename Scalar>
BasicPolynomial<Scalar> operator+(const BasicPolynomial<Scalar>& a, const BasicPolynomial<Scalar>& b) {
  const std::size_t n = std::max(a.coeffs().size(), b.coeffs().size());
  std::vector<Scalar> out(n, Scalar(0));
  const std::size_t oa = n - a.coeffs().size();
  const std::size_t ob = n - b.coeffs().size();
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) out[oa + i] += a.coeffs()[i];
  for (std::size_t i = 0; i < b.coeffs().size(); ++i) out[ob + i] += b.coeffs()[i];
  return BasicPolynomial<Scalar>(std::move(out));
}

// Long division.  The remainder is computed coefficient-wise so that its
// degree is strictly below den's in both modes; in floating mode leading
// remainder coefficients whose magnitude is at most `drop_below` are
// discarded as cancellation noise.
template <typename Scalar>
DivRem<Scalar> div_rem(const BasicPolynomial<Scalar>& num, const BasicPolynomial<Scalar>& den,
                       double drop_below = 0.0) {
  if (den.is_zero()) throw DataError("polynomial division by the zero polynomial");
  const int dn = den.degree();
  const int nn = num.degree();
  if (nn < dn) return {BasicPolynomial<Scalar>{}, num};

  std::vector<Scalar> work = num.coeffs();
  std::vector<Scalar> quot(static_cast<std::size_t>(nn - dn + 1), Scalar(0));
  const Scalar& lead = den.leading();
  for (std::size_t i = 0; i < quot.size(); ++i) {
    Scalar q = work[i] / lead;
    for (std::size_t j = 0; j < den.coeffs().size(); ++j) work[i + j] -= q * den.coeffs()[j];
    work[i] = Scalar(0);
    quot[i] = std::move(q);
  }
  std::vector<Scalar> rem(work.begin() + static_cast<std::ptrdiff_t>(quot.size()), work.end());
  if (drop_below > 0.0) {
    auto first = std::find_if(rem.begin(), rem.end(), [&](const Scalar& c) {
      return scalar_traits::magnitude(c) > drop_below;
    });
    rem.erase(rem.begin(), first);
  }
  return {BasicPolynomial<Scalar>(std::move(quot)), BasicPolynomial<Scalar>(std::move(rem))};
}

// Relative cutoff below which floating Sturm-chain terms count as zero.
inline constexpr double kSturmRelativeCutoff = 1e-12;

// Sturm chain p0 = p, p1 = p', p_{k+1} = -rem(p_{k-1}, p_k).  Terminates when
// the remainder vanishes.  For double coefficients, remainders whose
// coefficients all fall below 1e-12 * (1 + max|coeff of p|) count as zero.
template <typename Scalar>
std::vector<BasicPolynomial<Scalar>> sturm_chain(const BasicPolynomial<Scalar>& p) {
  if (p.degree() < 1) throw DataError("sturm_chain requires a nonconstant polynomial");
  double cutoff = 0.0;
  if constexpr (std::is_floating_point_v<Scalar>) {
    cutoff = kSturmRelativeCutoff * (1.0 + p.max_abs_coefficient());
  }
  std::vector<BasicPolynomial<Scalar>> chain{p, derivative(p)};
  while (chain.back().degree() > 0) {
    const auto& prev = chain[chain.size() - 2];
    const auto& cur = chain.back();
    auto rem = div_rem(prev, cur, cutoff).remainder;
    if (rem.is_zero()) break;
    chain.push_back(negate(rem));
  }
  return chain;
}

namespace detail {

inline int count_alternations(const std::vector<int>& signs) {
  int changes = 0;
  int last = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

}  // namespace detail

// Sign alternations of the chain at +inf (direction > 0) or -inf (direction < 0).
template <typename Scalar>
int sign_changes_at_infinity(const std::vector<BasicPolynomial<Scalar>>& chain, int direction) {
  std::vector<int> signs;
  signs.reserve(chain.size());
  for (const auto& q : chain) {
    if (q.is_zero()) {
      signs.push_back(0);
      continue;
    }
    int s = scalar_traits::sign(q.leading());
    if (direction < 0 && q.degree() % 2 == 1) s = -s;
    signs.push_back(s);
  }
  return detail::count_alternations(signs);
}

// Sign alternations of the chain at a finite point; zeros are skipped.
template <typename Scalar>
int sign_changes_at(const std::vector<BasicPolynomial<Scalar>>& chain, const Scalar& x) {
  std::vector<int> signs;
  signs.reserve(chain.size());
  for (const auto& q : chain) signs.push_back(scalar_traits::sign(evaluate(q, x)));
  return detail::count_alternations(signs);
}

// Double overload accepting +-infinity.
inline int sign_changes_at(const std::vector<Polynomial>& chain, double x) {
  if (std::isinf(x)) return sign_changes_at_infinity(chain, x > 0 ? 1 : -1);
  std::vector<int> signs;
  signs.reserve(chain.size());
  for (const auto& q : chain) signs.push_back(scalar_traits::sign(evaluate(q, x)));
  return detail::count_alternations(signs);
}

// Exact conversion; every finite double is a dyadic rational.
inline RationalPolynomial to_rational(const Polynomial& p) {
  std::vector<mpq_class> out;
  out.reserve(p.coeffs().size());
  for (double c : p.coeffs()) out.emplace_back(c);
  return RationalPolynomial(std::move(out));
}

inline Polynomial to_double(const RationalPolynomial& p) {
  std::vector<double> out;
  out.reserve(p.coeffs().size());
  for (const auto& c : p.coeffs()) out.push_back(c.get_d());
  return Polynomial(std::move(out));
}

// Monic gcd over Q via the Euclidean algorithm.
RationalPolynomial gcd(RationalPolynomial a, RationalPolynomial b);

// p / gcd(p, p'): same distinct roots, all simple.
RationalPolynomial squarefree_part(const RationalPolynomial& p);

std::string to_string(const Polynomial& p);

inline std::ostream& operator<<(std::ostream& os, const Polynomial& p) { return os << to_string(p); }

}  // namespace rootlab
