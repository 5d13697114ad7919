#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "lexdisc/errors.h"
#include "lexdisc/hashing.h"

namespace lexdisc {

/// Derives the RNG stream key for one (seed, speaker, register, sample)
/// tuple: FNV-1a over seed as eight little-endian bytes, the speaker id,
/// a NUL, the register label, a NUL, then the sample index as eight
/// little-endian bytes. The byte-level layout is fixed so that sample
/// membership can be reproduced outside this library.
inline uint64_t sampleStreamKey(uint64_t seed, std::string_view speaker_id,
                                std::string_view register_label,
                                uint64_t sample_index) {
  uint64_t h = fnv1a64U64(seed);
  h = fnv1a64(speaker_id, h);
  h = fnv1a64(std::string_view("\0", 1), h);
  h = fnv1a64(register_label, h);
  h = fnv1a64(std::string_view("\0", 1), h);
  h = fnv1a64U64(sample_index, h);
  return h;
}

/// std::mt19937_64 behind a small draw interface that is bit-identical
/// across platforms. Bounded draws use rejection, not
/// std::uniform_int_distribution, whose algorithm is
/// implementation-defined.
class PortableRng {
 public:
  explicit PortableRng(uint64_t key) : engine_(key) {}

  uint64_t next() { return engine_(); }

  /// Uniform on [0, bound); bound must be positive.
  uint64_t below(uint64_t bound) {
    if (bound == 0) throw UsageError("PortableRng::below: bound must be positive");
    // Reject the low partial block so every residue is equally likely.
    uint64_t reject_below = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
      uint64_t x = next();
      if (x >= reject_below) return x % bound;
    }
  }

  /// Uniform on [0, 1) with 53 random bits.
  double unitReal() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace lexdisc
