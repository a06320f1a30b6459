#include <random>

#include "doctest.h"
#include "rootlab/polynomial.hpp"
#include "rootlab/roots.hpp"

using rootlab::Polynomial;
using rootlab::RationalPolynomial;

namespace {

RationalPolynomial rat(std::initializer_list<long> coeffs) {
  std::vector<mpq_class> c;
  for (long v : coeffs) c.emplace_back(v);
  return RationalPolynomial(std::move(c));
}

RationalPolynomial random_integer_quintic(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> coeff(-10, 10);
  std::uniform_int_distribution<long> lead(1, 10);
  std::vector<mpq_class> c;
  c.emplace_back(lead(rng) * (rng() % 2 ? 1 : -1));
  for (int i = 0; i < 5; ++i) c.emplace_back(coeff(rng));
  return RationalPolynomial(std::move(c));
}

}  // namespace

TEST_CASE("evaluate uses Horner and matches hand values") {
  CHECK(rootlab::evaluate(Polynomial{1, 0, 1}, 0.0) == 1.0);
  CHECK(rootlab::evaluate(Polynomial{1, 0, -5, 0, 4, 0}, 2.0) == 0.0);
  CHECK(rootlab::evaluate(Polynomial{1, 0, -1, 0}, 0.5) == doctest::Approx(-0.375).epsilon(1e-15));
}

TEST_CASE("derivative applies the power rule") {
  // x^5 + A x^4 + B x^3 + C x^2 + D x + E with A..E = 2,3,5,7,11
  const Polynomial p{1, 2, 3, 5, 7, 11};
  CHECK(rootlab::derivative(p) == Polynomial{5, 8, 9, 10, 7});
  CHECK(rootlab::derivative(Polynomial{1, 0, 1}) == Polynomial{2, 0});
  CHECK(rootlab::derivative(Polynomial{1, 0, -1, 0}) == Polynomial{3, 0, -1});
  CHECK(rootlab::derivative(Polynomial{4}).is_zero());
}

TEST_CASE("div_rem in exact mode") {
  const auto [q, r] = rootlab::div_rem(rat({1, 0, -1, 0}), rat({3, 0, -1}));
  CHECK(q == RationalPolynomial({mpq_class(1, 3), mpq_class(0)}));
  CHECK(r == RationalPolynomial({mpq_class(-2, 3), mpq_class(0)}));

  const auto [q2, r2] = rootlab::div_rem(rat({1, 0, -1}), rat({1, -1}));
  CHECK(q2 == rat({1, 1}));
  CHECK(r2.is_zero());

  const auto [q3, r3] = rootlab::div_rem(rat({1, 0, 0}), rat({1, 0, 0}));
  CHECK(q3 == rat({1}));
  CHECK(r3.is_zero());

  CHECK_THROWS_AS(rootlab::div_rem(rat({1, 2}), RationalPolynomial{}), rootlab::DataError);
}

TEST_CASE("div_rem reconstructs the dividend") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-10, 10);
  std::uniform_int_distribution<int> deg(0, 7);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> a(static_cast<std::size_t>(deg(rng) + 1)), b(static_cast<std::size_t>(deg(rng) % 5 + 1));
    for (auto& v : a) v = u(rng);
    for (auto& v : b) v = u(rng);
    const Polynomial num(a), den(b);
    const auto [q, r] = rootlab::div_rem(num, den);
    CHECK(r.degree() < den.degree());
    const Polynomial back = q * den + r;
    const double scale = 1.0 + num.max_abs_coefficient() + q.max_abs_coefficient() * den.max_abs_coefficient();
    for (int k = 0; k <= num.degree(); ++k)
      CHECK(std::abs(back.coefficient(k) - num.coefficient(k)) <= 1e-9 * scale);

    // Exact mode reconstructs bit for bit.
    const auto rq = rootlab::to_rational(num);
    const auto rd = rootlab::to_rational(den);
    const auto exact = rootlab::div_rem(rq, rd);
    CHECK(exact.quotient * rd + exact.remainder == rq);
  }
}

TEST_CASE("sturm_chain on small examples") {
  const auto c1 = rootlab::sturm_chain(rat({1, 0, -1, 0}));
  REQUIRE(c1.size() == 4);
  CHECK(c1[0] == rat({1, 0, -1, 0}));
  CHECK(c1[1] == rat({3, 0, -1}));
  CHECK(c1[2] == RationalPolynomial({mpq_class(2, 3), mpq_class(0)}));
  CHECK(c1[3] == rat({1}));

  const auto c2 = rootlab::sturm_chain(rat({1, 0, 1}));
  REQUIRE(c2.size() == 3);
  CHECK(c2[2] == rat({-1}));

  const auto c3 = rootlab::sturm_chain(rat({1, 0, -1}));
  REQUIRE(c3.size() == 3);
  CHECK(c3[2] == rat({1}));

  // Floating mode agrees with the exact chain up to rounding.
  const auto cf = rootlab::sturm_chain(Polynomial{1, 0, -1, 0});
  REQUIRE(cf.size() == 4);
  CHECK(cf[2].coefficient(1) == doctest::Approx(2.0 / 3.0));
  CHECK(cf[3].coefficient(0) == doctest::Approx(1.0));
}

TEST_CASE("sign changes at infinities and finite points") {
  const auto chain = rootlab::sturm_chain(Polynomial{1, 0, -1, 0});
  CHECK(rootlab::sign_changes_at(chain, -INFINITY) == 3);
  CHECK(rootlab::sign_changes_at(chain, INFINITY) == 0);
  const auto c2 = rootlab::sturm_chain(Polynomial{1, 0, 1});
  CHECK(rootlab::sign_changes_at(c2, -INFINITY) == 1);
  CHECK(rootlab::sign_changes_at(c2, INFINITY) == 1);
  // Zeros are skipped: at x = 0 the chain of x^3 - x reads 0, -1, 0, +1.
  CHECK(rootlab::sign_changes_at(chain, 0.0) == 1);
}

TEST_CASE("exact_real_root_count") {
  CHECK(rootlab::exact_real_root_count(rat({1, 0, -5, 0, 4, 0})) == 5);
  CHECK(rootlab::exact_real_root_count(rat({1, 0, 1})) == 0);
  CHECK(rootlab::exact_real_root_count(rat({1, 0, -1, 0}), std::pair{mpq_class(0), mpq_class(2)}) == 1);
  // Open interval: endpoints that are roots are excluded.
  CHECK(rootlab::exact_real_root_count(rat({1, 0, -1, 0}), std::pair{mpq_class(-1), mpq_class(1)}) == 1);
  // Multiple roots are counted once: (x-1)^2 (x+2)
  CHECK(rootlab::exact_real_root_count(rat({1, 0, -3, 2})) == 2);
  CHECK_THROWS_AS(rootlab::exact_real_root_count(RationalPolynomial{}), rootlab::DataError);
}

TEST_CASE("Sturm consistency on random integer quintics") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 10000; ++trial) {
    const RationalPolynomial p = random_integer_quintic(rng);
    const int exact = rootlab::exact_real_root_count(p);

    // The raw chain (not made squarefree) still counts distinct roots.
    const auto chain = rootlab::sturm_chain(p);
    const int raw = rootlab::sign_changes_at_infinity(chain, -1) - rootlab::sign_changes_at_infinity(chain, +1);
    REQUIRE(raw == exact);

    // Cauchy bound: all roots lie in (-M, M); splitting at 0 is additive.
    mpq_class bound = 0;
    for (const auto& c : p.coeffs()) bound = std::max(bound, mpq_class(abs(c / p.leading())));
    bound += 1;
    const int left = rootlab::exact_real_root_count(p, std::pair{mpq_class(-bound), mpq_class(0)});
    const int right = rootlab::exact_real_root_count(p, std::pair{mpq_class(0), mpq_class(bound)});
    const int at_zero = sgn(p.coefficient(0)) == 0 ? 1 : 0;
    REQUIRE(left + right + at_zero == exact);
  }
}

TEST_CASE("squarefree part and gcd") {
  // (x-1)^2 (x+2)^3
  const auto p = rat({1, 4, 1, -10, -4, 8});
  const auto sf = rootlab::squarefree_part(p);
  CHECK(sf.degree() == 2);
  CHECK(rootlab::gcd(rat({1, 0, -1}), rat({1, -1})) == rat({1, -1}));
}
