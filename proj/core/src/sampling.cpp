#include "lexdisc/sampling.h"

#include <algorithm>

#include "lexdisc/errors.h"
#include "lexdisc/rng.h"

namespace lexdisc {

std::vector<SampledLexicon> sampleLexicons(const Lexicon& lexicon,
                                           int target_size, int n_samples,
                                           uint64_t seed) {
  const auto n_types = static_cast<int>(lexicon.types.size());
  if (target_size < 1) throw UsageError("sampleLexicons: target_size must be positive");
  if (target_size > n_types) {
    throw UsageError("sampleLexicons: target_size " + std::to_string(target_size) +
                     " exceeds type count " + std::to_string(n_types) +
                     " for speaker " + lexicon.speaker_id + " register " +
                     lexicon.register_label);
  }
  if (n_samples < 0) throw UsageError("sampleLexicons: n_samples must be non-negative");

  // Stable draw order: sorted type keys with their token counts.
  std::vector<const WordType*> types;
  types.reserve(lexicon.types.size());
  for (const auto& [key, type] : lexicon.types) types.push_back(&type);

  std::vector<SampledLexicon> samples;
  samples.reserve(static_cast<std::size_t>(n_samples));
  for (int s = 0; s < n_samples; ++s) {
    PortableRng rng(sampleStreamKey(seed, lexicon.speaker_id,
                                    lexicon.register_label,
                                    static_cast<uint64_t>(s)));
    std::vector<const WordType*> remaining = types;
    std::vector<uint64_t> weight(remaining.size());
    uint64_t total = 0;
    for (std::size_t i = 0; i < remaining.size(); ++i) {
      weight[i] = static_cast<uint64_t>(remaining[i]->tokens.size());
      total += weight[i];
    }

    SampledLexicon sample;
    sample.parent = &lexicon;
    sample.sample_index = s;
    sample.seed = seed;
    sample.type_keys.reserve(static_cast<std::size_t>(target_size));
    for (int draw = 0; draw < target_size; ++draw) {
      uint64_t r = rng.below(total);
      std::size_t idx = 0;
      uint64_t cumulative = weight[0];
      while (r >= cumulative) cumulative += weight[++idx];
      sample.type_keys.push_back(remaining[idx]->type_key);
      total -= weight[idx];
      remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(idx));
      weight.erase(weight.begin() + static_cast<std::ptrdiff_t>(idx));
    }
    std::sort(sample.type_keys.begin(), sample.type_keys.end());
    samples.push_back(std::move(sample));
  }
  return samples;
}

}  // namespace lexdisc
