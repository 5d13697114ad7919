#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lexdisc/abx.h"
#include "lexdisc/distance.h"

// Category geometry: medoid-based separation between two categories and
// within-category acoustic variability.

namespace lexdisc {

/// All tokens minimizing the mean distance to the rest of the category
/// (ties kept, exact comparison). A singleton category is its own medoid.
/// Results preserve the order tokens were given in.
std::vector<std::size_t> medoids(const std::vector<std::size_t>& tokens,
                                 const DistanceTable& table);

/// Mean distance over the cross product of the two categories' medoid
/// sets. n is the number of medoid pairs averaged.
PairScore separation(const std::vector<std::size_t>& a_tokens,
                     const std::vector<std::size_t>& b_tokens,
                     const DistanceTable& table, std::string type_a = "",
                     std::string type_b = "");

/// Mean pairwise distance within a category, or nullopt for categories
/// with fewer than two tokens (callers report those as skipped).
std::optional<double> variability(const std::vector<std::size_t>& tokens,
                                  const DistanceTable& table);

}  // namespace lexdisc
