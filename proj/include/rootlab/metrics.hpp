#pragma once

#include <vector>

namespace rootlab {

// Unweighted mean of per-class recall over the classes present in y_true.
double balanced_accuracy(const std::vector<int>& y_true, const std::vector<int>& y_pred);

// Fraction of positions where the two label vectors agree.
double agreement(const std::vector<int>& a, const std::vector<int>& b);

}  // namespace rootlab
