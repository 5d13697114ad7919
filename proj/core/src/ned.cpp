#include "lexdisc/ned.h"

#include <algorithm>

#include "lexdisc/errors.h"

namespace lexdisc {

int editDistance(std::span<const std::string> x, std::span<const std::string> y) {
  std::size_t nx = x.size(), ny = y.size();
  std::vector<int> prev(ny + 1), curr(ny + 1);
  for (std::size_t j = 0; j <= ny; ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= nx; ++i) {
    curr[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= ny; ++j) {
      int substitute = prev[j - 1] + (x[i - 1] == y[j - 1] ? 0 : 1);
      int remove = prev[j] + 1;
      int insert = curr[j - 1] + 1;
      curr[j] = std::min({substitute, remove, insert});
    }
    std::swap(prev, curr);
  }
  return prev[ny];
}

double ned(std::span<const std::string> x, std::span<const std::string> y) {
  std::size_t longer = std::max(x.size(), y.size());
  if (longer == 0) throw UsageError("ned: both sequences are empty");
  return static_cast<double>(editDistance(x, y)) / static_cast<double>(longer);
}

double meanNed(const std::vector<std::vector<std::string>>& types) {
  if (types.size() < 2) {
    throw InsufficientDataError("meanNed: need at least two types");
  }
  double sum = 0.0;
  long long n = 0;
  for (std::size_t i = 0; i < types.size(); ++i) {
    for (std::size_t j = i + 1; j < types.size(); ++j) {
      sum += ned(types[i], types[j]);
      ++n;
    }
  }
  return sum / static_cast<double>(n);
}

}  // namespace lexdisc
