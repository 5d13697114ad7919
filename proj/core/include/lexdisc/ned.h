#pragma once

#include <span>
#include <string>
#include <vector>

// Phonemic distinctness of a type inventory. Edit distance treats each
// phoneme symbol as one atomic unit, so multi-character symbols cost the
// same as single characters.

namespace lexdisc {

/// Levenshtein distance (unit-cost insert, delete, substitute) between
/// two symbol sequences.
int editDistance(std::span<const std::string> x, std::span<const std::string> y);

/// Edit distance divided by the longer length, in [0, 1]. Both sequences
/// empty is an error (the ratio is undefined).
double ned(std::span<const std::string> x, std::span<const std::string> y);

/// Mean NED over all unordered pairs of types. Needs at least two types.
double meanNed(const std::vector<std::vector<std::string>>& types);

}  // namespace lexdisc
