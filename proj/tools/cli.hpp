#pragma once

#include <iostream>
#include <string>
#include <vector>

#include "rootlab/dataset.hpp"

namespace rootlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitNumeric = 3;

// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr);
int run(int argc, const char* const* argv);

// Feature tokens: "raw" (coefficients), "all" (every column), a
// family name, "invariants" (the discriminant set of degrees 2 to 4) or a
// column name.  Raw coefficients lead the list when `include_raw` is set.
std::vector<std::string> resolve_features(const LabeledDataset& ds, const std::vector<std::string>& tokens,
                                          bool include_raw);
// "raw", "raw+crit8", "critical_points", ...
std::string feature_set_label(const std::vector<std::string>& tokens, bool include_raw);

}  // namespace rootlab::cli
