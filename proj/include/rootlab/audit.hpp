#pragma once

#include <cstdint>

#include "json.hpp"

namespace rootlab {

// Exact-arithmetic audit of the numeric pipeline on random monic quintics
// with coefficients uniform in [-range, range].
struct OracleAudit {
  int n = 0;
  std::uint64_t seed = 0;
  double range = 10.0;
  int label_agreements = 0;         // numeric n_real == exact Sturm count
  int sturm_feature_mismatches = 0;  // V(-inf) - V(+inf) != exact count
  int crit8_violations = 0;          // crit8 > exact count
  int descartes_checked = 0;         // squarefree samples with p(0) != 0
  int descartes_violations = 0;      // bound or parity broken
  double newton_max_error = 0.0;     // power sums vs sums of root powers, relative

  double label_agreement() const { return n ? static_cast<double>(label_agreements) / n : 0.0; }
  bool passed() const;
  nlohmann::json to_json() const;
};

inline constexpr double kAuditLabelAgreement = 0.999;
inline constexpr double kAuditNewtonTolerance = 1e-6;

OracleAudit run_oracle_audit(int n, std::uint64_t seed, double range = 10.0);

}  // namespace rootlab
