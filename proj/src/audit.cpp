#include "rootlab/audit.hpp"

#include <cmath>
#include <complex>

#include "rootlab/dataset.hpp"
#include "rootlab/errors.hpp"
#include "rootlab/features.hpp"
#include "rootlab/roots.hpp"

namespace rootlab {

namespace {

constexpr std::uint64_t kAuditStream = 0x6175646974;  // "audit"

}  // namespace

bool OracleAudit::passed() const {
  return n > 0 && label_agreement() >= kAuditLabelAgreement && sturm_feature_mismatches == 0 &&
         crit8_violations == 0 && descartes_violations == 0 && newton_max_error <= kAuditNewtonTolerance;
}

nlohmann::json OracleAudit::to_json() const {
  return {{"n", n},
          {"seed", seed},
          {"range", range},
          {"label_agreements", label_agreements},
          {"label_agreement", label_agreement()},
          {"sturm_feature_mismatches", sturm_feature_mismatches},
          {"crit8_violations", crit8_violations},
          {"descartes_checked", descartes_checked},
          {"descartes_violations", descartes_violations},
          {"newton_max_error", newton_max_error},
          {"passed", passed()}};
}

OracleAudit run_oracle_audit(int n, std::uint64_t seed, double range) {
  if (n < 1) throw DataError("audit needs at least one sample");
  OracleAudit a;
  a.n = n;
  a.seed = seed;
  a.range = range;
  for (int i = 0; i < n; ++i) {
    std::mt19937_64 rng = row_stream(seed, static_cast<std::uint64_t>(i), kAuditStream);
    std::uniform_real_distribution<double> u(-range, range);
    std::vector<double> c{1.0};
    for (int k = 0; k < 5; ++k) c.push_back(u(rng));
    const Polynomial p(c);
    const RationalPolynomial rp = to_rational(p);
    const int exact = exact_real_root_count(rp);

    a.label_agreements += classify_root_profile(p).n_real == exact;
    const auto sturm = sturm_features(p);
    a.sturm_feature_mismatches += static_cast<int>(sturm[2]) != exact;
    a.crit8_violations += critical_point_features(p)[9] > exact;

    if (p.coefficient(0) != 0.0 && squarefree_part(rp).degree() == 5) {
      mpq_class bound = 1;
      for (const auto& x : rp.coeffs()) bound += abs(x);
      const int positive = exact_real_root_count(rp, std::pair{mpq_class(0), bound});
      const int v = static_cast<int>(descartes_features(p)[0]);
      ++a.descartes_checked;
      a.descartes_violations += positive > v || (v - positive) % 2 != 0;
    }

    const auto sums = power_sums(p, 5);
    const auto roots = roots_numeric(p);
    for (int k = 1; k <= 5; ++k) {
      std::complex<double> acc = 0;
      for (const auto& r : roots) acc += std::pow(r, k);
      const double s = sums[static_cast<std::size_t>(k - 1)];
      a.newton_max_error = std::max(a.newton_max_error, std::abs(acc.real() - s) / (1.0 + std::abs(s)));
    }
  }
  return a;
}

}  // namespace rootlab
