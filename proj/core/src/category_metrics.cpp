#include "lexdisc/category_metrics.h"

#include "lexdisc/errors.h"

namespace lexdisc {

std::vector<std::size_t> medoids(const std::vector<std::size_t>& tokens,
                                 const DistanceTable& table) {
  if (tokens.empty()) throw UsageError("medoids: empty category");
  if (tokens.size() == 1) return tokens;

  std::vector<double> mean(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < tokens.size(); ++j) {
      if (j != i) sum += table.at(tokens[i], tokens[j]);
    }
    mean[i] = sum / static_cast<double>(tokens.size() - 1);
  }
  double best = mean[0];
  for (double m : mean) best = std::min(best, m);

  std::vector<std::size_t> result;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (mean[i] == best) result.push_back(tokens[i]);
  }
  return result;
}

PairScore separation(const std::vector<std::size_t>& a_tokens,
                     const std::vector<std::size_t>& b_tokens,
                     const DistanceTable& table, std::string type_a,
                     std::string type_b) {
  std::vector<std::size_t> ma = medoids(a_tokens, table);
  std::vector<std::size_t> mb = medoids(b_tokens, table);

  PairScore pair;
  pair.type_a = std::move(type_a);
  pair.type_b = std::move(type_b);
  double sum = 0.0;
  for (std::size_t a : ma) {
    for (std::size_t b : mb) {
      sum += table.at(a, b);
      ++pair.n;
    }
  }
  pair.score = sum / static_cast<double>(pair.n);
  return pair;
}

std::optional<double> variability(const std::vector<std::size_t>& tokens,
                                  const DistanceTable& table) {
  if (tokens.size() < 2) return std::nullopt;
  double sum = 0.0;
  long long n = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    for (std::size_t j = i + 1; j < tokens.size(); ++j) {
      sum += table.at(tokens[i], tokens[j]);
      ++n;
    }
  }
  return sum / static_cast<double>(n);
}

}  // namespace lexdisc
