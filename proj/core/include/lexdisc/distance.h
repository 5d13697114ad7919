#pragma once

#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lexdisc/frontend.h"

namespace lexdisc {

/// Angle between two equal-length non-negative vectors:
/// arccos of their cosine similarity, clamped into [0, pi]. Two zero
/// vectors are identical (0); a zero against a non-zero vector is
/// maximally dissimilar for non-negative data (pi/2).
double frameDistance(std::span<const double> u, std::span<const double> v);

/// Dynamic-time-warping distance between two non-empty sequences of equal
/// dimension: the minimal total frame distance over monotone alignments
/// (steps advance one frame in either or both sequences, endpoints
/// anchored), divided by the alignment length. Among alignments with equal
/// total, the shortest defines the length.
double dtwDistance(const FeatureSequence& a, const FeatureSequence& b);

/// Symmetric token-by-token distance matrix with a zero diagonal, stored
/// as the strict lower triangle in row-major order:
/// (1,0), (2,0), (2,1), (3,0), ...
class DistanceTable {
 public:
  DistanceTable() = default;
  DistanceTable(std::vector<std::string> token_ids,
                std::vector<double> packed_lower);

  std::size_t size() const { return ids_.size(); }
  const std::vector<std::string>& tokenIds() const { return ids_; }
  const std::vector<double>& packedLower() const { return lower_; }

  double at(std::size_t i, std::size_t j) const;
  std::size_t indexOf(std::string_view token_id) const;

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> lower_;
};

/// Computes all pairwise DTW distances. Token ids must be unique. Pairs
/// are partitioned into contiguous chunks across threads and each chunk
/// writes its own slots, so any thread count yields the same bytes.
/// threads == 0 means hardware concurrency.
DistanceTable buildDistanceTable(const std::vector<FeatureSequence>& tokens,
                                 unsigned threads = 0);

/// Binary persistence: 16-byte header (magic "LDT1", format version,
/// entry count, reserved word) followed by the packed lower triangle as
/// little-endian doubles. Token ids are not stored; the reader re-attaches
/// the caller's id list, which must match the stored entry count.
void writeDistanceTable(const std::string& path, const DistanceTable& table);
DistanceTable readDistanceTable(const std::string& path,
                                std::vector<std::string> token_ids);

}  // namespace lexdisc
