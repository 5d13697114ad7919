#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lexdisc/manifest.h"

// Repeated sub-lexicon sampling. Each sample draws a fixed number of
// distinct types without replacement, each draw proportional to the
// remaining types' token counts. Sample s of a lexicon is driven by an
// RNG keyed on (seed, speaker, register, s), so a run that only needs
// sample s can reproduce it without generating the others, and two
// experiments over the same lexicon and seed see identical samples.

namespace lexdisc {

struct SampledLexicon {
  const Lexicon* parent = nullptr;
  int sample_index = 0;
  uint64_t seed = 0;
  std::vector<std::string> type_keys;  // sorted, distinct
};

/// Draws n_samples independent sub-lexicons of target_size distinct
/// types. target_size must be in [1, number of types].
std::vector<SampledLexicon> sampleLexicons(const Lexicon& lexicon,
                                           int target_size, int n_samples,
                                           uint64_t seed);

}  // namespace lexdisc
