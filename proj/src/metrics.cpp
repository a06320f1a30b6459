#include "rootlab/metrics.hpp"

#include <map>

#include "rootlab/errors.hpp"

namespace rootlab {

double balanced_accuracy(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
  if (y_true.empty()) throw DataError("balanced_accuracy: empty input");
  if (y_true.size() != y_pred.size()) throw DataError("balanced_accuracy: length mismatch");
  std::map<int, std::pair<long, long>> per_class;  // hits, total
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    auto& [hits, total] = per_class[y_true[i]];
    ++total;
    hits += y_true[i] == y_pred[i];
  }
  double sum = 0.0;
  for (const auto& [cls, ht] : per_class) sum += static_cast<double>(ht.first) / static_cast<double>(ht.second);
  return sum / static_cast<double>(per_class.size());
}

double agreement(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.empty()) throw DataError("agreement: empty input");
  if (a.size() != b.size()) throw DataError("agreement: length mismatch");
  long same = 0;
  for (std::size_t i = 0; i < a.size(); ++i) same += a[i] == b[i];
  return static_cast<double>(same) / static_cast<double>(a.size());
}

}  // namespace rootlab
