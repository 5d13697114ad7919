#include "lexdisc/abx.h"

#include <algorithm>
#include <unordered_set>

#include "lexdisc/errors.h"

namespace lexdisc {

namespace {

/// Adds the credit of all triplets whose x ranges over `own`, comparing
/// each remaining own-category token against every other-category token.
void scoreSide(const std::vector<std::size_t>& own,
               const std::vector<std::size_t>& other,
               const DistanceTable& table, double& credit, long long& n) {
  for (std::size_t x : own) {
    for (std::size_t same : own) {
      if (same == x) continue;
      double d_same = table.at(same, x);
      for (std::size_t diff : other) {
        double d_diff = table.at(diff, x);
        if (d_same < d_diff) {
          credit += 1.0;
        } else if (d_same == d_diff) {
          credit += 0.5;
        }
        ++n;
      }
    }
  }
}

}  // namespace

std::optional<PairScore> abxPair(const std::vector<std::size_t>& a_tokens,
                                 const std::vector<std::size_t>& b_tokens,
                                 const DistanceTable& table,
                                 std::string type_a, std::string type_b) {
  if (a_tokens.empty() || b_tokens.empty()) {
    throw UsageError("abxPair: empty category");
  }
  std::unordered_set<std::size_t> seen(a_tokens.begin(), a_tokens.end());
  if (seen.size() != a_tokens.size()) {
    throw UsageError("abxPair: repeated token in category A");
  }
  for (std::size_t t : b_tokens) {
    if (!seen.insert(t).second) {
      throw UsageError("abxPair: categories share a token");
    }
  }
  if (seen.size() != a_tokens.size() + b_tokens.size()) {
    throw UsageError("abxPair: repeated token in category B");
  }

  if (a_tokens.size() < 2 && b_tokens.size() < 2) return std::nullopt;

  PairScore pair;
  pair.type_a = std::move(type_a);
  pair.type_b = std::move(type_b);
  double credit = 0.0;
  scoreSide(a_tokens, b_tokens, table, credit, pair.n);
  scoreSide(b_tokens, a_tokens, table, credit, pair.n);
  pair.score = credit / static_cast<double>(pair.n);
  return pair;
}

double abxAggregate(std::span<const PairScore> pairs) {
  if (pairs.empty()) {
    throw InsufficientDataError("abxAggregate: no scored pairs");
  }
  std::vector<double> scores;
  scores.reserve(pairs.size());
  for (const PairScore& p : pairs) scores.push_back(p.score);
  std::sort(scores.begin(), scores.end());
  double sum = 0.0;
  for (double s : scores) sum += s;
  return sum / static_cast<double>(scores.size());
}

}  // namespace lexdisc
