#include "rootlab/polynomial.hpp"

#include <cstdio>
#include <sstream>

namespace rootlab {

namespace {

RationalPolynomial make_monic(const RationalPolynomial& p) {
  if (p.is_zero()) return p;
  std::vector<mpq_class> out;
  out.reserve(p.coeffs().size());
  const mpq_class lead = p.leading();
  for (const auto& c : p.coeffs()) out.emplace_back(c / lead);
  return RationalPolynomial(std::move(out));
}

}  // namespace

RationalPolynomial gcd(RationalPolynomial a, RationalPolynomial b) {
  while (!b.is_zero()) {
    RationalPolynomial r = div_rem(a, b).remainder;
    a = std::move(b);
    b = make_monic(r);
  }
  return make_monic(a);
}

RationalPolynomial squarefree_part(const RationalPolynomial& p) {
  if (p.degree() < 1) return p;
  const RationalPolynomial g = gcd(p, derivative(p));
  if (g.degree() == 0) return p;
  return div_rem(p, g).quotient;
}

std::string to_string(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int power = p.degree(); power >= 0; --power) {
    const double c = p.coefficient(power);
    if (c == 0.0) continue;
    const double mag = std::abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (mag != 1.0 || power == 0) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.6g", mag);
      os << buf;
    }
    if (power >= 1) os << "x";
    if (power >= 2) os << "^" << power;
    first = false;
  }
  return os.str();
}

}  // namespace rootlab
