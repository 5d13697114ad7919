#pragma once

#include <optional>
#include <string>

#include "lexdisc/frontend.h"

// On-disk persistence of feature sequences. One record per file:
// a 16-byte header (magic "LDF1", format version, dimension, frame count,
// all little-endian uint32) followed by the frame-major values as
// little-endian IEEE-754 doubles. Files are keyed by content hashes, so a
// stale or foreign record is a corruption error, not a silent mismatch.

namespace lexdisc {

void writeFeatureRecord(const std::string& path, const FeatureSequence& features);

/// Reads a record back; the stored values are returned under the caller's
/// token_id (ids are not persisted, the file name already encodes
/// identity). Returns nullopt if the file does not exist; throws Error on
/// a malformed record.
std::optional<FeatureSequence> readFeatureRecord(const std::string& path,
                                                 std::string token_id);

}  // namespace lexdisc
