#include <algorithm>
#include <iostream>
#include <random>

#include "doctest.h"
#include "rootlab/roots.hpp"

using rootlab::Polynomial;
using cd = std::complex<double>;

namespace {

bool contains_root(const std::vector<cd>& roots, cd target, double tol) {
  return std::any_of(roots.begin(), roots.end(), [&](cd r) { return std::abs(r - target) <= tol; });
}

Polynomial random_monic_quintic(std::mt19937_64& rng, double range) {
  std::uniform_real_distribution<double> u(-range, range);
  std::vector<double> c{1.0};
  for (int i = 0; i < 5; ++i) c.push_back(u(rng));
  return Polynomial(c);
}

}  // namespace

TEST_CASE("roots_numeric on factored examples") {
  auto r = rootlab::roots_numeric(Polynomial{1, 0, -1});
  REQUIRE(r.size() == 2);
  CHECK(contains_root(r, {1, 0}, 1e-12));
  CHECK(contains_root(r, {-1, 0}, 1e-12));

  r = rootlab::roots_numeric(Polynomial{1, 0, 1});
  REQUIRE(r.size() == 2);
  CHECK(contains_root(r, {0, 1}, 1e-12));
  CHECK(contains_root(r, {0, -1}, 1e-12));

  // x(x^2-1)(x^2-4)
  r = rootlab::roots_numeric(Polynomial{1, 0, -5, 0, 4, 0});
  REQUIRE(r.size() == 5);
  for (double x : {0.0, 1.0, -1.0, 2.0, -2.0}) CHECK(contains_root(r, {x, 0}, 1e-8));

  // Non-monic input is normalized.
  r = rootlab::roots_numeric(Polynomial{2, -6});
  REQUIRE(r.size() == 1);
  CHECK(r[0].real() == doctest::Approx(3.0));

  CHECK_THROWS_AS(rootlab::roots_numeric(Polynomial{}), rootlab::DataError);
}

TEST_CASE("classify_root_profile") {
  auto prof = rootlab::classify_root_profile(Polynomial{1, 0, 1});
  CHECK(prof.n_real == 0);
  CHECK(prof.n_complex == 2);
  CHECK(prof.class_label == 1);

  prof = rootlab::classify_root_profile(Polynomial{1, 0, -5, 0, 4, 0});
  CHECK(prof.n_real == 5);
  CHECK(prof.class_label == 0);

  // x^5 + x is strictly increasing: one real root.
  prof = rootlab::classify_root_profile(Polynomial{1, 0, 0, 0, 1, 0});
  CHECK(prof.n_real == 1);
  CHECK(prof.class_label == 2);

  CHECK(rootlab::class_label_for(4, 4) == 0);
  CHECK(rootlab::class_label_for(4, 2) == 1);
  CHECK(rootlab::class_label_for(4, 0) == 2);
  CHECK(rootlab::class_label_for(3, 1) == 1);
}

TEST_CASE("parity repair reclassifies the nearest-to-real complex root") {
  // Three roots with one spurious complex value: odd complex count.
  const std::vector<cd> roots = {{1.0, 0.0}, {2.0, 5e-10}, {3.0, 0.0}};
  const auto prof = rootlab::profile_from_roots(3, roots);
  CHECK(prof.parity_repaired);
  CHECK(prof.n_real == 3);
  CHECK(prof.n_complex == 0);
}

TEST_CASE("residual contract and conjugate symmetry on random quintics") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5000; ++trial) {
    const Polynomial p = random_monic_quintic(rng, trial % 2 ? 10.0 : 100.0);
    const auto roots = rootlab::roots_numeric(p);
    REQUIRE(roots.size() == 5);
    for (const auto& r : roots) {
      REQUIRE(rootlab::normalized_residual(p, r) <= 1e-8);
      if (r.imag() != 0.0) REQUIRE(contains_root(roots, std::conj(r), 1e-8 * (1.0 + std::abs(r))));
    }
  }
}

TEST_CASE("numeric labels agree with the exact Sturm count") {
  std::mt19937_64 rng(99);
  const int n = 10000;
  int agree = 0;
  for (int trial = 0; trial < n; ++trial) {
    const Polynomial p = random_monic_quintic(rng, 10.0);
    const auto prof = rootlab::classify_root_profile(p);
    const int exact = rootlab::exact_real_root_count(rootlab::to_rational(p));
    if (prof.n_real == exact) {
      ++agree;
      continue;
    }
    std::cerr << "label disagreement: " << p << " numeric=" << prof.n_real << " exact=" << exact
              << " max_real_imag=" << prof.min_imag_margin << " min_complex_imag=" << prof.min_complex_imag
              << " separation=" << prof.min_root_separation << "\n";
    const bool near_tolerance = prof.min_complex_imag <= 10 * rootlab::kLabelImagTolerance ||
                                prof.min_imag_margin >= rootlab::kLabelImagTolerance / 10;
    CHECK((near_tolerance || prof.min_root_separation < 1e-6));
  }
  CHECK(static_cast<double>(agree) / n >= 0.999);
}
