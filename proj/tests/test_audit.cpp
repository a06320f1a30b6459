#include "doctest.h"
#include "rootlab/audit.hpp"
#include "rootlab/errors.hpp"

TEST_CASE("oracle audit passes on random quintics") {
  const auto a = rootlab::run_oracle_audit(3000, 11);
  CHECK(a.n == 3000);
  CHECK(a.label_agreement() >= rootlab::kAuditLabelAgreement);
  CHECK(a.sturm_feature_mismatches == 0);
  CHECK(a.crit8_violations == 0);
  CHECK(a.descartes_checked > 2900);
  CHECK(a.descartes_violations == 0);
  CHECK(a.newton_max_error <= rootlab::kAuditNewtonTolerance);
  CHECK(a.passed());
  CHECK(a.to_json()["passed"].get<bool>());
}

TEST_CASE("oracle audit is deterministic and rejects empty runs") {
  CHECK(rootlab::run_oracle_audit(200, 3).to_json() == rootlab::run_oracle_audit(200, 3).to_json());
  CHECK(rootlab::run_oracle_audit(200, 3).to_json() != rootlab::run_oracle_audit(200, 4).to_json());
  CHECK_THROWS_AS(rootlab::run_oracle_audit(0, 3), rootlab::DataError);
}
