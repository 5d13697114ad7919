#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

// Corpus ingestion. A manifest is a CSV file with one row per word token,
// locating the token inside an audio file and tagging it with a speaker,
// a speech register, and a phonemic type key. Rows marked exclude=1 are
// dropped at load time; everything downstream sees only kept tokens.

namespace lexdisc {

struct TokenRecord {
  std::string token_id;
  std::string speaker_id;
  std::string register_label;
  std::string type_key;  // phonemes separated by single spaces
  std::string audio_path;
  double start_s = 0.0;
  double end_s = 0.0;
  bool onomatopoeia = false;
};

/// All tokens a speaker produced for one word type in one register.
/// The onomatopoeia flag is a property of the type: the manifest must
/// tag every token of the type identically.
struct WordType {
  std::string type_key;
  bool onomatopoeia = false;
  std::vector<TokenRecord> tokens;  // sorted by token_id
};

/// One speaker's lexicon in one register.
struct Lexicon {
  std::string speaker_id;
  std::string register_label;
  std::map<std::string, WordType> types;  // keyed by type_key

  long long tokenCount() const;
  /// Type keys in sorted order.
  std::vector<std::string> typeKeys() const;
};

/// Loads and validates a manifest. The result is sorted by
/// (speaker_id, register_label); identical input bytes produce identical
/// lexicons. Malformed rows raise ManifestError naming the row.
std::vector<Lexicon> loadManifest(const std::string& path);

/// Same, from an in-memory document (used by tests).
std::vector<Lexicon> parseManifest(std::string_view text);

/// Type keys present in both lexicons. Both must belong to the same
/// speaker; the result does not depend on argument order.
std::vector<std::string> commonTypes(const Lexicon& a, const Lexicon& b);

/// Copy of the lexicon without onomatopoeia-flagged types. Applying it
/// twice gives the same result as applying it once.
Lexicon removeOnomatopoeia(const Lexicon& lexicon);

/// Splits a type key into phoneme symbols. Keys must be non-empty with
/// single spaces between symbols; anything else raises UsageError.
std::vector<std::string> splitPhonemes(std::string_view type_key);

}  // namespace lexdisc
