#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lexdisc/distance.h"

// Token-level ABX discriminability. For a pair of categories (A, B), every
// triplet (a, b, x) with a, x distinct tokens of A and b a token of B asks
// whether x sits closer to its own category's token: credit 1 if
// d(a, x) < d(b, x), 0.5 on a tie, 0 otherwise. The symmetric triplets
// with x drawn from B are included, and the pair score is mean credit.

namespace lexdisc {

/// One scored category pair. n counts the comparisons behind the score:
/// triplets for ABX, medoid pairs for separation.
struct PairScore {
  std::string type_a;
  std::string type_b;
  double score = 0.0;
  long long n = 0;
};

/// Scores one category pair given token indices into a distance table.
/// The categories must be non-empty and disjoint. Returns nullopt when
/// both categories are singletons (no triplet exists); callers report
/// such pairs as skipped.
std::optional<PairScore> abxPair(const std::vector<std::size_t>& a_tokens,
                                 const std::vector<std::size_t>& b_tokens,
                                 const DistanceTable& table,
                                 std::string type_a = "",
                                 std::string type_b = "");

/// Unweighted mean of pair scores; every pair counts equally no matter
/// how many triplets it contains. Scores are accumulated in sorted order,
/// so the value is exactly invariant under permutations of the input.
/// An empty list raises InsufficientDataError.
double abxAggregate(std::span<const PairScore> pairs);

}  // namespace lexdisc
