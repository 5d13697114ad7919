#include "lexdisc/manifest.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "lexdisc/csv.h"
#include "lexdisc/errors.h"

namespace lexdisc {

namespace {

const char* const kColumns[] = {"token_id", "speaker_id", "register",
                                "type_key", "audio_path", "start_s",
                                "end_s",    "onomatopoeia", "exclude"};
constexpr int kNumColumns = 9;

[[noreturn]] void rowError(long line, const std::string& token_id,
                           const std::string& what) {
  std::string where = "line " + std::to_string(line);
  if (!token_id.empty()) where += " (token_id " + token_id + ")";
  throw ManifestError(where + ": " + what);
}

double parseSeconds(const std::string& text, long line,
                    const std::string& token_id, const char* column) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc() || res.ptr != end || !std::isfinite(value)) {
    rowError(line, token_id,
             std::string(column) + " is not a finite number: '" + text + "'");
  }
  return value;
}

bool parseFlag(const std::string& text, long line,
               const std::string& token_id, const char* column) {
  if (text == "0") return false;
  if (text == "1") return true;
  rowError(line, token_id,
           std::string(column) + " must be 0 or 1, got '" + text + "'");
}

void checkTypeKey(const std::string& key, long line,
                  const std::string& token_id) {
  if (key.empty()) rowError(line, token_id, "type_key is empty");
  if (key.front() == ' ' || key.back() == ' ' ||
      key.find("  ") != std::string::npos) {
    rowError(line, token_id,
             "type_key must use single spaces between symbols: '" + key + "'");
  }
}

}  // namespace

long long Lexicon::tokenCount() const {
  long long n = 0;
  for (const auto& [key, type] : types) n += static_cast<long long>(type.tokens.size());
  return n;
}

std::vector<std::string> Lexicon::typeKeys() const {
  std::vector<std::string> keys;
  keys.reserve(types.size());
  for (const auto& [key, type] : types) keys.push_back(key);
  return keys;
}

std::vector<Lexicon> parseManifest(std::string_view text) {
  std::vector<CsvRecord> records = parseCsv(text);
  if (records.empty()) throw ManifestError("manifest is empty");

  const CsvRecord& header = records.front();
  for (int i = 0; i < kNumColumns; ++i) {
    if (i >= static_cast<int>(header.fields.size()) ||
        header.fields[i] != kColumns[i]) {
      throw ManifestError(std::string("header: missing or misplaced column '") +
                          kColumns[i] + "'");
    }
  }
  if (header.fields.size() != kNumColumns) {
    throw ManifestError("header: expected exactly " +
                        std::to_string(kNumColumns) + " columns, got " +
                        std::to_string(header.fields.size()));
  }

  std::unordered_set<std::string> seen_ids;
  // Lexicons keyed by (speaker, register); std::map keeps the result
  // ordering independent of row order.
  std::map<std::pair<std::string, std::string>, Lexicon> lexicons;

  for (std::size_t r = 1; r < records.size(); ++r) {
    const CsvRecord& rec = records[r];
    if (rec.fields.size() != kNumColumns) {
      rowError(rec.line, "", "expected " + std::to_string(kNumColumns) +
                                " fields, got " + std::to_string(rec.fields.size()));
    }
    TokenRecord token;
    token.token_id = rec.fields[0];
    token.speaker_id = rec.fields[1];
    token.register_label = rec.fields[2];
    token.type_key = rec.fields[3];
    token.audio_path = rec.fields[4];

    if (token.token_id.empty()) rowError(rec.line, "", "token_id is empty");
    if (!seen_ids.insert(token.token_id).second) {
      rowError(rec.line, token.token_id, "duplicate token_id");
    }
    if (token.speaker_id.empty()) rowError(rec.line, token.token_id, "speaker_id is empty");
    if (token.register_label.empty()) rowError(rec.line, token.token_id, "register is empty");
    checkTypeKey(token.type_key, rec.line, token.token_id);
    if (token.audio_path.empty()) rowError(rec.line, token.token_id, "audio_path is empty");

    token.start_s = parseSeconds(rec.fields[5], rec.line, token.token_id, "start_s");
    token.end_s = parseSeconds(rec.fields[6], rec.line, token.token_id, "end_s");
    if (token.start_s < 0.0) rowError(rec.line, token.token_id, "start_s is negative");
    if (token.end_s <= token.start_s) {
      rowError(rec.line, token.token_id, "end_s must be greater than start_s");
    }

    token.onomatopoeia = parseFlag(rec.fields[7], rec.line, token.token_id, "onomatopoeia");
    bool exclude = parseFlag(rec.fields[8], rec.line, token.token_id, "exclude");
    if (exclude) continue;

    Lexicon& lex = lexicons[{token.speaker_id, token.register_label}];
    lex.speaker_id = token.speaker_id;
    lex.register_label = token.register_label;
    WordType& type = lex.types[token.type_key];
    if (type.tokens.empty()) {
      type.type_key = token.type_key;
      type.onomatopoeia = token.onomatopoeia;
    } else if (type.onomatopoeia != token.onomatopoeia) {
      rowError(rec.line, token.token_id,
               "onomatopoeia flag disagrees with other tokens of type '" +
                   token.type_key + "'");
    }
    type.tokens.push_back(std::move(token));
  }

  std::vector<Lexicon> result;
  result.reserve(lexicons.size());
  for (auto& [key, lex] : lexicons) {
    for (auto& [type_key, type] : lex.types) {
      std::sort(type.tokens.begin(), type.tokens.end(),
                [](const TokenRecord& a, const TokenRecord& b) {
                  return a.token_id < b.token_id;
                });
    }
    result.push_back(std::move(lex));
  }
  return result;
}

std::vector<Lexicon> loadManifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ManifestError("cannot open manifest: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw ManifestError("read failure on manifest: " + path);
  return parseManifest(buf.str());
}

std::vector<std::string> commonTypes(const Lexicon& a, const Lexicon& b) {
  if (a.speaker_id != b.speaker_id) {
    throw UsageError("commonTypes: lexicons belong to different speakers ('" +
                     a.speaker_id + "' vs '" + b.speaker_id + "')");
  }
  std::vector<std::string> keys;
  for (const auto& [key, type] : a.types) {
    if (b.types.count(key)) keys.push_back(key);
  }
  return keys;  // map iteration keeps these sorted
}

Lexicon removeOnomatopoeia(const Lexicon& lexicon) {
  Lexicon out;
  out.speaker_id = lexicon.speaker_id;
  out.register_label = lexicon.register_label;
  for (const auto& [key, type] : lexicon.types) {
    if (!type.onomatopoeia) out.types.emplace(key, type);
  }
  return out;
}

std::vector<std::string> splitPhonemes(std::string_view type_key) {
  if (type_key.empty()) throw UsageError("splitPhonemes: empty type key");
  std::vector<std::string> symbols;
  std::size_t start = 0;
  while (true) {
    std::size_t space = type_key.find(' ', start);
    std::string_view sym = space == std::string_view::npos
                               ? type_key.substr(start)
                               : type_key.substr(start, space - start);
    if (sym.empty()) {
      throw UsageError("splitPhonemes: empty symbol in type key '" +
                       std::string(type_key) + "'");
    }
    symbols.emplace_back(sym);
    if (space == std::string_view::npos) break;
    start = space + 1;
  }
  return symbols;
}

}  // namespace lexdisc
