#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

// FNV-1a 64-bit hashing. Used for cache keys and for deriving RNG stream
// keys, so the byte-level definition is part of the reproducibility
// contract and must not change.

namespace lexdisc {

inline constexpr uint64_t kFnv64Offset = 14695981039346656037ull;
inline constexpr uint64_t kFnv64Prime = 1099511628211ull;

constexpr uint64_t fnv1a64(std::string_view bytes, uint64_t h = kFnv64Offset) {
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= kFnv64Prime;
  }
  return h;
}

/// Absorbs a 64-bit value as eight little-endian bytes.
constexpr uint64_t fnv1a64U64(uint64_t value, uint64_t h = kFnv64Offset) {
  for (int i = 0; i < 8; ++i) {
    h ^= (value >> (8 * i)) & 0xffu;
    h *= kFnv64Prime;
  }
  return h;
}

/// Hash of a file's full contents. Throws Error if the file cannot be read.
uint64_t fnv1a64File(const std::string& path);

/// Fixed-width lowercase hex rendering, suitable for file names.
std::string toHex(uint64_t value);

}  // namespace lexdisc
