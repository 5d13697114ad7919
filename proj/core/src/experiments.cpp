#include "lexdisc/experiments.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <utility>

#include <json.hpp>

#include "lexdisc/category_metrics.h"
#include "lexdisc/csv.h"
#include "lexdisc/distance.h"
#include "lexdisc/errors.h"
#include "lexdisc/feature_cache.h"
#include "lexdisc/hashing.h"
#include "lexdisc/ned.h"
#include "lexdisc/version.h"
#include "lexdisc/wav.h"

namespace lexdisc {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

void validateRunConfig(const RunConfig& cfg, bool sampled, bool paired) {
  if (cfg.manifest_path.empty()) throw ConfigError("no manifest given");
  const FrontendConfig& fe = cfg.frontend;
  if (fe.n_filters < 1) throw ConfigError("nfilters must be at least 1");
  if (!(fe.f_min_hz >= 0.0) || !(fe.f_max_hz > fe.f_min_hz)) {
    throw ConfigError("need 0 <= fmin < fmax");
  }
  if (!(fe.window_s > 0.0) || !(fe.hop_s > 0.0)) {
    throw ConfigError("window and hop must be positive");
  }
  if (paired) {
    if (cfg.register_x.empty() || cfg.register_y.empty()) {
      throw ConfigError("two register names are required");
    }
    if (cfg.register_x == cfg.register_y) {
      throw ConfigError("registers must differ, got '" + cfg.register_x +
                        "' twice");
    }
  }
  if (sampled && cfg.n_samples < 1) {
    throw ConfigError("samples must be at least 1");
  }
}

std::string frontendKey(const FrontendConfig& fe) {
  return "nf=" + std::to_string(fe.n_filters) +
         ";fmin=" + formatDouble(fe.f_min_hz) +
         ";fmax=" + formatDouble(fe.f_max_hz) +
         ";hop=" + formatDouble(fe.hop_s) + ";win=" + formatDouble(fe.window_s);
}

double meanOf(std::span<const double> values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

constexpr std::string_view kNul{"\0", 1};

struct SpeakerPair {
  const Lexicon* x = nullptr;
  const Lexicon* y = nullptr;
};

std::map<std::string, SpeakerPair> pairBySpeaker(
    const std::vector<Lexicon>& lexicons, const std::string& register_x,
    const std::string& register_y) {
  std::map<std::string, SpeakerPair> pairs;
  bool saw_x = false, saw_y = false;
  for (const Lexicon& lex : lexicons) {
    if (lex.register_label == register_x) {
      pairs[lex.speaker_id].x = &lex;
      saw_x = true;
    } else if (lex.register_label == register_y) {
      pairs[lex.speaker_id].y = &lex;
      saw_y = true;
    }
  }
  if (!saw_x) {
    throw ConfigError("register '" + register_x + "' not present in manifest");
  }
  if (!saw_y) {
    throw ConfigError("register '" + register_y + "' not present in manifest");
  }
  return pairs;
}

/// Featurization with per-run audio memoization and optional on-disk
/// caching. Cache records are keyed by the audio file's content hash, the
/// token interval, and the front-end settings, so edits to any of those
/// miss rather than serve stale features.
class FeatureProvider {
 public:
  explicit FeatureProvider(const RunConfig& cfg) : cfg_(cfg) {
    manifest_dir_ = fs::path(cfg.manifest_path).parent_path();
    if (cfg.use_cache && !cfg.output_dir.empty()) {
      cache_dir_ = fs::path(cfg.output_dir) / "cache" / "features";
      fs::create_directories(cache_dir_);
    }
  }

  FeatureSequence features(const TokenRecord& token) {
    std::string path = resolve(token.audio_path);
    if (cache_dir_.empty()) return compute(token, path);
    fs::path record = recordPath(token, path);
    try {
      if (auto cached = readFeatureRecord(record.string(), token.token_id)) {
        return *cached;
      }
    } catch (const Error&) {
      // An unreadable record is recomputed and overwritten below.
    }
    FeatureSequence features = compute(token, path);
    writeFeatureRecord(record.string(), features);
    return features;
  }

  /// Frees decoded audio; called between speakers to bound memory.
  void dropClips() { clips_.clear(); }

 private:
  std::string resolve(const std::string& audio_path) const {
    fs::path p(audio_path);
    if (p.is_absolute()) return p.string();
    return (manifest_dir_ / p).string();  // relative to the manifest file
  }

  const AudioClip& clip(const std::string& path) {
    auto it = clips_.find(path);
    if (it == clips_.end()) it = clips_.emplace(path, loadWavMono(path)).first;
    return it->second;
  }

  uint64_t audioHash(const std::string& path) {
    auto it = audio_hashes_.find(path);
    if (it == audio_hashes_.end()) {
      uint64_t hash = 0;
      try {
        hash = fnv1a64File(path);
      } catch (const Error&) {
        // Hashing runs before decoding, so an unreadable file must still
        // surface as an audio ingestion failure, not an internal error.
        throw IngestionError("cannot read audio file: " + path);
      }
      it = audio_hashes_.emplace(path, hash).first;
    }
    return it->second;
  }

  fs::path recordPath(const TokenRecord& token, const std::string& path) {
    uint64_t h = fnv1a64("feature-record/1");
    h = fnv1a64U64(audioHash(path), h);
    h = fnv1a64(token.token_id, h);
    h = fnv1a64(kNul, h);
    h = fnv1a64(formatDouble(token.start_s), h);
    h = fnv1a64(kNul, h);
    h = fnv1a64(formatDouble(token.end_s), h);
    h = fnv1a64(kNul, h);
    h = fnv1a64(frontendKey(cfg_.frontend), h);
    return cache_dir_ / (toHex(h) + ".feat");
  }

  FeatureSequence compute(const TokenRecord& token, const std::string& path) {
    try {
      AudioClip segment = sliceSeconds(clip(path), token.start_s, token.end_s);
      return featurize(segment, cfg_.frontend, token.token_id);
    } catch (const IngestionError& e) {
      throw IngestionError("token " + token.token_id + ": " + e.what());
    }
  }

  const RunConfig& cfg_;
  fs::path manifest_dir_;
  fs::path cache_dir_;
  std::map<std::string, AudioClip> clips_;
  std::map<std::string, uint64_t> audio_hashes_;
};

std::vector<const TokenRecord*> tokensOfTypes(const Lexicon& lex,
                                              std::span<const std::string> keys) {
  std::vector<const TokenRecord*> tokens;
  for (const std::string& key : keys) {
    for (const TokenRecord& tok : lex.types.at(key).tokens) {
      tokens.push_back(&tok);
    }
  }
  return tokens;
}

/// Distance table for an ordered token list, with optional disk caching.
/// The key covers the manifest content, front-end settings, lexicon
/// identity, and token ordering; a manifest edit of any kind therefore
/// invalidates (never stales) cached tables.
DistanceTable tableWithCache(const RunConfig& cfg, FeatureProvider& provider,
                             const std::string& manifest_hash_hex,
                             const Lexicon& lex,
                             const std::vector<const TokenRecord*>& tokens) {
  std::vector<std::string> ids;
  ids.reserve(tokens.size());
  for (const TokenRecord* t : tokens) ids.push_back(t->token_id);

  fs::path table_path;
  if (cfg.use_cache && !cfg.output_dir.empty()) {
    uint64_t h = fnv1a64("distance-table/1");
    h = fnv1a64(manifest_hash_hex, h);
    h = fnv1a64(frontendKey(cfg.frontend), h);
    h = fnv1a64(lex.speaker_id, h);
    h = fnv1a64(kNul, h);
    h = fnv1a64(lex.register_label, h);
    h = fnv1a64(kNul, h);
    for (const std::string& id : ids) {
      h = fnv1a64(id, h);
      h = fnv1a64(std::string_view("\n", 1), h);
    }
    fs::path dir = fs::path(cfg.output_dir) / "cache" / "tables";
    fs::create_directories(dir);
    table_path = dir / (toHex(h) + ".dist");
    if (fs::exists(table_path)) {
      try {
        return readDistanceTable(table_path.string(), ids);
      } catch (const Error&) {
        // Recompute and overwrite an unreadable table.
      }
    }
  }

  std::vector<FeatureSequence> features;
  features.reserve(tokens.size());
  for (const TokenRecord* t : tokens) features.push_back(provider.features(*t));
  DistanceTable table = buildDistanceTable(features, cfg.threads);
  if (!table_path.empty()) writeDistanceTable(table_path.string(), table);
  return table;
}

/// One register's scored view of a speaker's shared vocabulary.
struct DiscriminationSide {
  DistanceTable table;
  std::map<std::string, std::vector<std::size_t>> tokens_by_type;
  /// ABX score per category pair, keyed by (type_a, type_b) with
  /// type_a < type_b; nullopt marks pairs without any triplet.
  std::map<std::pair<std::string, std::string>, std::optional<PairScore>>
      pair_scores;
  std::vector<double> pair_separations;  // one per category pair, in order
  std::vector<double> type_variabilities;  // multi-token types only
  long long n_variability_types = 0;
};

DiscriminationSide scoreDiscriminationSide(const RunConfig& cfg,
                                           FeatureProvider& provider,
                                           const std::string& manifest_hash_hex,
                                           const Lexicon& lex,
                                           std::span<const std::string> keys) {
  DiscriminationSide side;
  side.table = tableWithCache(cfg, provider, manifest_hash_hex, lex,
                              tokensOfTypes(lex, keys));
  provider.dropClips();

  for (const std::string& key : keys) {
    std::vector<std::size_t>& list = side.tokens_by_type[key];
    for (const TokenRecord& tok : lex.types.at(key).tokens) {
      list.push_back(side.table.indexOf(tok.token_id));
    }
  }

  for (std::size_t i = 0; i < keys.size(); ++i) {
    const std::vector<std::size_t>& a = side.tokens_by_type.at(keys[i]);
    std::optional<double> var = variability(a, side.table);
    if (var) {
      side.type_variabilities.push_back(*var);
      ++side.n_variability_types;
    }
    for (std::size_t j = i + 1; j < keys.size(); ++j) {
      const std::vector<std::size_t>& b = side.tokens_by_type.at(keys[j]);
      side.pair_scores.emplace(
          std::make_pair(keys[i], keys[j]),
          abxPair(a, b, side.table, keys[i], keys[j]));
      side.pair_separations.push_back(
          separation(a, b, side.table, keys[i], keys[j]).score);
    }
  }
  return side;
}

void appendDiscriminationRows(ExperimentReport& report,
                              const std::string& speaker,
                              const std::string& register_label,
                              double abx_value, long long n_pairs,
                              const DiscriminationSide& side) {
  report.scores.push_back({speaker, register_label, "abx", abx_value, n_pairs,
                           std::nullopt, std::nullopt});
  report.scores.push_back({speaker, register_label, "separation",
                           meanOf(side.pair_separations),
                           static_cast<long long>(side.pair_separations.size()),
                           std::nullopt, std::nullopt});
  report.scores.push_back({speaker, register_label, "variability",
                           meanOf(side.type_variabilities),
                           side.n_variability_types, std::nullopt,
                           std::nullopt});
}

ExperimentReport runPairedDiscrimination(const RunConfig& cfg,
                                         const std::string& name) {
  validateRunConfig(cfg, /*sampled=*/false, /*paired=*/true);
  std::vector<Lexicon> lexicons = loadManifest(cfg.manifest_path);

  ExperimentReport report;
  report.experiment = name;
  report.manifest_hash_hex = toHex(fnv1a64File(cfg.manifest_path));

  auto pairs = pairBySpeaker(lexicons, cfg.register_x, cfg.register_y);
  FeatureProvider provider(cfg);

  std::vector<PairedSpeakerScore> abx_scores, separation_scores,
      variability_scores;

  for (const auto& [speaker, sp] : pairs) {
    if (!sp.x || !sp.y) {
      report.skipped.push_back(speaker + ": no " +
                               (sp.x ? cfg.register_y : cfg.register_x) +
                               " lexicon");
      continue;
    }
    std::vector<std::string> common = commonTypes(*sp.x, *sp.y);
    if (common.empty()) {
      report.skipped.push_back(speaker + ": no types shared between registers");
      continue;
    }

    DiscriminationSide side_x = scoreDiscriminationSide(
        cfg, provider, report.manifest_hash_hex, *sp.x, common);
    DiscriminationSide side_y = scoreDiscriminationSide(
        cfg, provider, report.manifest_hash_hex, *sp.y, common);

    // The ABX comparison covers exactly the category pairs scored in both
    // registers, so a pair one register cannot score drops out entirely.
    std::vector<PairScore> scored_x, scored_y;
    for (const auto& [pair_key, score_x] : side_x.pair_scores) {
      const auto& score_y = side_y.pair_scores.at(pair_key);
      if (score_x && score_y) {
        scored_x.push_back(*score_x);
        scored_y.push_back(*score_y);
        continue;
      }
      std::string where =
          !score_x && !score_y
              ? "either register"
              : (score_x ? cfg.register_y : cfg.register_x);
      report.skipped.push_back(speaker + ": pair '" + pair_key.first +
                               "' / '" + pair_key.second + "' unscored in " +
                               where + " (needs two tokens on one side)");
    }
    if (scored_x.empty()) {
      report.skipped.push_back(speaker +
                               ": no category pair scored in both registers");
      continue;
    }
    if (side_x.type_variabilities.empty() || side_y.type_variabilities.empty()) {
      report.skipped.push_back(
          speaker + ": no shared type has two tokens in " +
          (side_x.type_variabilities.empty() ? cfg.register_x
                                             : cfg.register_y));
      continue;
    }

    double abx_x = abxAggregate(scored_x);
    double abx_y = abxAggregate(scored_y);
    appendDiscriminationRows(report, speaker, cfg.register_x, abx_x,
                             static_cast<long long>(scored_x.size()), side_x);
    appendDiscriminationRows(report, speaker, cfg.register_y, abx_y,
                             static_cast<long long>(scored_y.size()), side_y);

    abx_scores.push_back({speaker, abx_x, abx_y});
    separation_scores.push_back({speaker, meanOf(side_x.pair_separations),
                                 meanOf(side_y.pair_separations)});
    variability_scores.push_back({speaker, meanOf(side_x.type_variabilities),
                                  meanOf(side_y.type_variabilities)});
  }

  if (abx_scores.size() < 2) {
    throw InsufficientDataError(
        name + ": fewer than two speakers usable in both registers (" +
        std::to_string(abx_scores.size()) + " usable)");
  }
  report.comparisons.push_back(comparePaired("abx", cfg.register_x,
                                             cfg.register_y, abx_scores));
  report.comparisons.push_back(comparePaired(
      "separation", cfg.register_x, cfg.register_y, separation_scores));
  report.comparisons.push_back(comparePaired(
      "variability", cfg.register_x, cfg.register_y, variability_scores));
  return report;
}

void recordSamples(ExperimentReport& report,
                   std::span<const SampledLexicon> samples) {
  for (const SampledLexicon& s : samples) {
    report.samples.push_back({s.parent->speaker_id, s.parent->register_label,
                              s.sample_index, s.seed, s.type_keys});
  }
}

double nedOverSamples(const Lexicon& lex,
                      std::span<const SampledLexicon> samples) {
  std::map<std::string, std::vector<std::string>> split;
  for (const auto& [key, type] : lex.types) split.emplace(key, splitPhonemes(key));
  return sampledMetric(samples, [&](const SampledLexicon& sample) {
    std::vector<std::vector<std::string>> sequences;
    sequences.reserve(sample.type_keys.size());
    for (const std::string& key : sample.type_keys) {
      sequences.push_back(split.at(key));
    }
    return meanNed(sequences);
  });
}

ExperimentReport runExp2Impl(const RunConfig& cfg) {
  validateRunConfig(cfg, /*sampled=*/true, /*paired=*/true);
  std::vector<Lexicon> lexicons = loadManifest(cfg.manifest_path);

  ExperimentReport report;
  report.experiment = "exp2";
  report.manifest_hash_hex = toHex(fnv1a64File(cfg.manifest_path));

  auto pairs = pairBySpeaker(lexicons, cfg.register_x, cfg.register_y);
  std::vector<PairedSpeakerScore> ned_scores;

  for (const auto& [speaker, sp] : pairs) {
    if (!sp.x || !sp.y) {
      report.skipped.push_back(speaker + ": no " +
                               (sp.x ? cfg.register_y : cfg.register_x) +
                               " lexicon");
      continue;
    }
    Lexicon fx = cfg.remove_onomatopoeia ? removeOnomatopoeia(*sp.x) : *sp.x;
    Lexicon fy = cfg.remove_onomatopoeia ? removeOnomatopoeia(*sp.y) : *sp.y;
    int target = static_cast<int>(std::min(fx.types.size(), fy.types.size()));
    if (target < 2) {
      report.skipped.push_back(speaker +
                               ": fewer than two types in the smaller register");
      continue;
    }
    auto samples_x = sampleLexicons(fx, target, cfg.n_samples, cfg.seed);
    auto samples_y = sampleLexicons(fy, target, cfg.n_samples, cfg.seed);
    double value_x = nedOverSamples(fx, samples_x);
    double value_y = nedOverSamples(fy, samples_y);

    report.scores.push_back({speaker, cfg.register_x, "ned", value_x,
                             cfg.n_samples, cfg.seed, std::nullopt});
    report.scores.push_back({speaker, cfg.register_y, "ned", value_y,
                             cfg.n_samples, cfg.seed, std::nullopt});
    recordSamples(report, samples_x);
    recordSamples(report, samples_y);
    ned_scores.push_back({speaker, value_x, value_y});
  }

  if (ned_scores.size() < 2) {
    throw InsufficientDataError(
        "exp2: fewer than two speakers usable in both registers (" +
        std::to_string(ned_scores.size()) + " usable)");
  }
  report.comparisons.push_back(comparePaired(
      "ned", cfg.register_x, cfg.register_y, std::move(ned_scores), cfg.seed));
  return report;
}

double abxOverSamples(const RunConfig& cfg, FeatureProvider& provider,
                      const std::string& manifest_hash_hex, const Lexicon& lex,
                      std::span<const SampledLexicon> samples,
                      std::vector<std::string>& skipped) {
  std::vector<std::string> keys = lex.typeKeys();
  DistanceTable table = tableWithCache(cfg, provider, manifest_hash_hex, lex,
                                       tokensOfTypes(lex, keys));
  provider.dropClips();

  std::map<std::string, std::vector<std::size_t>> tokens_by_type;
  for (const std::string& key : keys) {
    std::vector<std::size_t>& list = tokens_by_type[key];
    for (const TokenRecord& tok : lex.types.at(key).tokens) {
      list.push_back(table.indexOf(tok.token_id));
    }
  }

  // Pair scores do not depend on the sample, so they are computed once
  // per distinct pair across all samples.
  std::map<std::pair<std::string, std::string>, std::optional<PairScore>> memo;
  std::set<std::pair<std::string, std::string>> unscored;
  double value = sampledMetric(samples, [&](const SampledLexicon& sample) {
    std::vector<PairScore> scored;
    for (std::size_t i = 0; i < sample.type_keys.size(); ++i) {
      for (std::size_t j = i + 1; j < sample.type_keys.size(); ++j) {
        auto pair_key = std::make_pair(sample.type_keys[i], sample.type_keys[j]);
        auto it = memo.find(pair_key);
        if (it == memo.end()) {
          it = memo.emplace(pair_key,
                            abxPair(tokens_by_type.at(pair_key.first),
                                    tokens_by_type.at(pair_key.second), table,
                                    pair_key.first, pair_key.second))
                   .first;
        }
        if (it->second) {
          scored.push_back(*it->second);
        } else {
          unscored.insert(pair_key);
        }
      }
    }
    return abxAggregate(scored);
  });
  if (!unscored.empty()) {
    skipped.push_back(lex.speaker_id + "/" + lex.register_label + ": " +
                      std::to_string(unscored.size()) +
                      " sampled category pair(s) unscored (both singletons)");
  }
  return value;
}

ExperimentReport runExp3Impl(const RunConfig& cfg) {
  validateRunConfig(cfg, /*sampled=*/true, /*paired=*/true);
  std::vector<Lexicon> lexicons = loadManifest(cfg.manifest_path);

  ExperimentReport report;
  report.experiment = "exp3";
  report.manifest_hash_hex = toHex(fnv1a64File(cfg.manifest_path));

  auto pairs = pairBySpeaker(lexicons, cfg.register_x, cfg.register_y);
  FeatureProvider provider(cfg);
  std::vector<PairedSpeakerScore> abx_scores;

  for (const auto& [speaker, sp] : pairs) {
    if (!sp.x || !sp.y) {
      report.skipped.push_back(speaker + ": no " +
                               (sp.x ? cfg.register_y : cfg.register_x) +
                               " lexicon");
      continue;
    }
    Lexicon fx = cfg.remove_onomatopoeia ? removeOnomatopoeia(*sp.x) : *sp.x;
    Lexicon fy = cfg.remove_onomatopoeia ? removeOnomatopoeia(*sp.y) : *sp.y;
    int target = static_cast<int>(std::min(fx.types.size(), fy.types.size()));
    if (target < 2) {
      report.skipped.push_back(speaker +
                               ": fewer than two types in the smaller register");
      continue;
    }
    // Same stream keys as exp2: equal seeds give equal sample membership.
    auto samples_x = sampleLexicons(fx, target, cfg.n_samples, cfg.seed);
    auto samples_y = sampleLexicons(fy, target, cfg.n_samples, cfg.seed);
    double value_x = abxOverSamples(cfg, provider, report.manifest_hash_hex,
                                    fx, samples_x, report.skipped);
    double value_y = abxOverSamples(cfg, provider, report.manifest_hash_hex,
                                    fy, samples_y, report.skipped);

    report.scores.push_back({speaker, cfg.register_x, "abx", value_x,
                             cfg.n_samples, cfg.seed, std::nullopt});
    report.scores.push_back({speaker, cfg.register_y, "abx", value_y,
                             cfg.n_samples, cfg.seed, std::nullopt});
    recordSamples(report, samples_x);
    recordSamples(report, samples_y);
    abx_scores.push_back({speaker, value_x, value_y});
  }

  if (abx_scores.size() < 2) {
    throw InsufficientDataError(
        "exp3: fewer than two speakers usable in both registers (" +
        std::to_string(abx_scores.size()) + " usable)");
  }
  report.comparisons.push_back(comparePaired(
      "abx", cfg.register_x, cfg.register_y, std::move(abx_scores), cfg.seed));
  return report;
}

std::vector<Lexicon> filterRegisters(std::vector<Lexicon> lexicons,
                                     const std::vector<std::string>& filter) {
  if (filter.empty()) return lexicons;
  std::set<std::string> present;
  for (const Lexicon& lex : lexicons) present.insert(lex.register_label);
  for (const std::string& want : filter) {
    if (!present.count(want)) {
      throw ConfigError("register '" + want + "' not present in manifest");
    }
  }
  std::set<std::string> keep(filter.begin(), filter.end());
  std::erase_if(lexicons, [&](const Lexicon& lex) {
    return !keep.count(lex.register_label);
  });
  return lexicons;
}

ExperimentReport runRawAbxImpl(const RunConfig& cfg) {
  validateRunConfig(cfg, /*sampled=*/false, /*paired=*/false);
  std::vector<Lexicon> lexicons =
      filterRegisters(loadManifest(cfg.manifest_path), cfg.register_filter);

  ExperimentReport report;
  report.experiment = "abx";
  report.manifest_hash_hex = toHex(fnv1a64File(cfg.manifest_path));
  FeatureProvider provider(cfg);

  for (const Lexicon& raw : lexicons) {
    Lexicon lex = cfg.remove_onomatopoeia ? removeOnomatopoeia(raw) : raw;
    std::string label = lex.speaker_id + "/" + lex.register_label;
    if (lex.types.size() < 2) {
      report.skipped.push_back(label + ": fewer than two types");
      continue;
    }
    std::vector<std::string> keys = lex.typeKeys();
    DistanceTable table = tableWithCache(cfg, provider, report.manifest_hash_hex,
                                         lex, tokensOfTypes(lex, keys));
    provider.dropClips();
    std::map<std::string, std::vector<std::size_t>> tokens_by_type;
    for (const std::string& key : keys) {
      std::vector<std::size_t>& list = tokens_by_type[key];
      for (const TokenRecord& tok : lex.types.at(key).tokens) {
        list.push_back(table.indexOf(tok.token_id));
      }
    }

    std::vector<PairScore> scored;
    for (std::size_t i = 0; i < keys.size(); ++i) {
      for (std::size_t j = i + 1; j < keys.size(); ++j) {
        auto pair = abxPair(tokens_by_type.at(keys[i]),
                            tokens_by_type.at(keys[j]), table, keys[i],
                            keys[j]);
        if (pair) {
          scored.push_back(*pair);
          report.pair_detail.push_back(
              {lex.speaker_id, lex.register_label, *pair});
        } else {
          report.skipped.push_back(label + ": pair '" + keys[i] + "' / '" +
                                   keys[j] + "' unscored (both singletons)");
        }
      }
    }
    if (scored.empty()) {
      report.skipped.push_back(label + ": no scorable category pair");
      continue;
    }
    report.scores.push_back({lex.speaker_id, lex.register_label, "abx",
                             abxAggregate(scored),
                             static_cast<long long>(scored.size()),
                             std::nullopt, std::nullopt});
  }

  if (report.scores.empty()) {
    throw InsufficientDataError("abx: no lexicon could be scored");
  }
  return report;
}

ExperimentReport runRawNedImpl(const RunConfig& cfg) {
  validateRunConfig(cfg, /*sampled=*/false, /*paired=*/false);
  std::vector<Lexicon> lexicons =
      filterRegisters(loadManifest(cfg.manifest_path), cfg.register_filter);

  ExperimentReport report;
  report.experiment = "ned";
  report.manifest_hash_hex = toHex(fnv1a64File(cfg.manifest_path));

  for (const Lexicon& raw : lexicons) {
    Lexicon lex = cfg.remove_onomatopoeia ? removeOnomatopoeia(raw) : raw;
    std::string label = lex.speaker_id + "/" + lex.register_label;
    if (lex.types.size() < 2) {
      report.skipped.push_back(label + ": fewer than two types");
      continue;
    }
    std::vector<std::vector<std::string>> sequences;
    sequences.reserve(lex.types.size());
    for (const auto& [key, type] : lex.types) {
      sequences.push_back(splitPhonemes(key));
    }
    report.scores.push_back({lex.speaker_id, lex.register_label, "ned",
                             meanNed(sequences),
                             static_cast<long long>(sequences.size()),
                             std::nullopt, std::nullopt});
  }

  if (report.scores.empty()) {
    throw InsufficientDataError("ned: no lexicon could be scored");
  }
  return report;
}

json comparisonJson(const PairedComparison& c) {
  json j = json::object();
  j["metric"] = c.metric;
  j["registers"] = {{"x", c.register_x}, {"y", c.register_y}};
  j["n"] = c.n;
  j["means"] = {{"x", c.mean_x}, {"y", c.mean_y}};
  j["t"] = c.t;
  j["df"] = c.df;
  j["p"] = c.p;
  j["d_z"] = c.d_z;
  j["d_av"] = c.d_av;
  j["relative_pct"] = c.relative_pct;
  j["degenerate"] = c.degenerate;
  j["seed"] = c.seed ? json(*c.seed) : json(nullptr);
  json speakers = json::array();
  for (const PairedSpeakerScore& s : c.per_speaker) {
    speakers.push_back({{"speaker_id", s.speaker_id}, {"x", s.x}, {"y", s.y}});
  }
  j["per_speaker"] = speakers;
  return j;
}

void writeTextFile(const fs::path& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error("cannot open output file: " + path.string());
  file.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!file) throw Error("write failure on: " + path.string());
}

}  // namespace

ExperimentReport runExp1(const RunConfig& config) {
  return runPairedDiscrimination(config, "exp1");
}

ExperimentReport runControl(const RunConfig& config) {
  return runPairedDiscrimination(config, "control");
}

ExperimentReport runExp2(const RunConfig& config) { return runExp2Impl(config); }

ExperimentReport runExp3(const RunConfig& config) { return runExp3Impl(config); }

ExperimentReport runRawAbx(const RunConfig& config) {
  return runRawAbxImpl(config);
}

ExperimentReport runRawNed(const RunConfig& config) {
  return runRawNedImpl(config);
}

std::vector<RegisterSummary> summarizeCorpus(
    const std::vector<Lexicon>& lexicons) {
  std::map<std::string, RegisterSummary> by_register;
  std::map<std::string, std::set<std::string>> type_sets;
  for (const Lexicon& lex : lexicons) {
    RegisterSummary& summary = by_register[lex.register_label];
    summary.register_label = lex.register_label;
    for (const auto& [key, type] : lex.types) {
      type_sets[lex.register_label].insert(key);
      for (const TokenRecord& tok : type.tokens) {
        ++summary.tokens;
        summary.duration_s += tok.end_s - tok.start_s;
      }
    }
  }
  std::vector<RegisterSummary> rows;
  rows.reserve(by_register.size());
  for (auto& [label, summary] : by_register) {
    summary.types = static_cast<long long>(type_sets[label].size());
    rows.push_back(std::move(summary));
  }
  return rows;
}

std::string registerSummaryTable(std::span<const RegisterSummary> rows) {
  std::size_t label_width = 8;  // "register"
  for (const RegisterSummary& r : rows) {
    label_width = std::max(label_width, r.register_label.size());
  }
  char line[160];
  std::snprintf(line, sizeof(line), "%-*s  %12s  %8s  %8s\n",
                static_cast<int>(label_width), "register", "duration_s",
                "types", "tokens");
  std::string out = line;
  for (const RegisterSummary& r : rows) {
    std::snprintf(line, sizeof(line), "%-*s  %12.3f  %8lld  %8lld\n",
                  static_cast<int>(label_width), r.register_label.c_str(),
                  r.duration_s, r.types, r.tokens);
    out += line;
  }
  return out;
}

void writeExperimentOutputs(const RunConfig& config,
                            const ExperimentReport& report) {
  if (config.output_dir.empty()) return;
  fs::path out(config.output_dir);
  fs::create_directories(out);
  const std::string& exp = report.experiment;
  bool paired = exp != "abx" && exp != "ned";
  bool sampled = exp == "exp2" || exp == "exp3";

  writeMetricReportsCsv((out / (exp + "_scores.csv")).string(), report.scores);

  json summary = json::object();
  summary["experiment"] = exp;
  summary["tool_version"] = kVersionString;
  if (paired) {
    summary["registers"] = {{"x", config.register_x}, {"y", config.register_y}};
  } else {
    std::set<std::string> labels;
    for (const MetricReport& row : report.scores) labels.insert(row.register_label);
    summary["registers"] = json(labels);
  }
  json comparisons = json::array();
  for (const PairedComparison& c : report.comparisons) {
    comparisons.push_back(comparisonJson(c));
  }
  summary["comparisons"] = comparisons;
  summary["skipped"] = report.skipped;
  writeTextFile(out / (exp + "_summary.json"), summary.dump(2) + "\n");

  if (!report.samples.empty()) {
    std::string csv = "speaker_id,register,sample_index,seed,type_keys\n";
    for (const SampleMembershipRow& row : report.samples) {
      std::string joined;
      for (const std::string& key : row.type_keys) {
        if (!joined.empty()) joined += ';';
        joined += key;
      }
      csv += csvEscape(row.speaker_id) + ',' + csvEscape(row.register_label) +
             ',' + std::to_string(row.sample_index) + ',' +
             std::to_string(row.seed) + ',' + csvEscape(joined) + '\n';
    }
    writeTextFile(out / (exp + "_samples.csv"), csv);
  }

  if (!report.pair_detail.empty()) {
    std::string csv = "speaker_id,register,type_a,type_b,score,n_triplets\n";
    for (const AbxPairRow& row : report.pair_detail) {
      csv += csvEscape(row.speaker_id) + ',' + csvEscape(row.register_label) +
             ',' + csvEscape(row.pair.type_a) + ',' +
             csvEscape(row.pair.type_b) + ',' + formatDouble(row.pair.score) +
             ',' + std::to_string(row.pair.n) + '\n';
    }
    writeTextFile(out / (exp + "_pairs.csv"), csv);
  }

  json run = json::object();
  run["tool"] = "lexdisc";
  run["tool_version"] = kVersionString;
  run["experiment"] = exp;
  run["manifest_path"] = config.manifest_path;
  run["manifest_fnv1a64"] = report.manifest_hash_hex;
  json jcfg = json::object();
  if (paired) {
    jcfg["registers"] = {{"x", config.register_x}, {"y", config.register_y}};
  } else {
    jcfg["register_filter"] = json(config.register_filter);
  }
  // Sampling parameters are echoed only where the run consumes them;
  // exp1/control outputs stay byte-identical across seeds.
  if (sampled) {
    jcfg["n_samples"] = config.n_samples;
    jcfg["seed"] = config.seed;
  }
  jcfg["remove_onomatopoeia"] = config.remove_onomatopoeia;
  jcfg["use_cache"] = config.use_cache;
  jcfg["threads"] = config.threads;
  jcfg["frontend"] = {{"n_filters", config.frontend.n_filters},
                      {"f_min_hz", config.frontend.f_min_hz},
                      {"f_max_hz", config.frontend.f_max_hz},
                      {"window_s", config.frontend.window_s},
                      {"hop_s", config.frontend.hop_s}};
  run["config"] = jcfg;
  writeTextFile(out / (exp + "_run.json"), run.dump(2) + "\n");
}

std::string comparisonsSummaryText(const ExperimentReport& report) {
  auto num = [](double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return std::string(buf);
  };
  std::string out;
  for (const PairedComparison& c : report.comparisons) {
    out += report.experiment + ": " + c.metric + " " + c.register_x + "=" +
           num(c.mean_x) + " " + c.register_y + "=" + num(c.mean_y) +
           " n=" + std::to_string(c.n);
    if (!std::isnan(c.t)) {
      out += " t(" + std::to_string(c.df) + ")=" + num(c.t) +
             " p=" + num(c.p) + " d_z=" + num(c.d_z) + " d_av=" + num(c.d_av);
    } else {
      out += " t undefined (zero-variance differences)";
    }
    if (!std::isnan(c.relative_pct)) out += " rel=" + num(c.relative_pct) + "%";
    out += "\n";
  }
  for (const std::string& s : report.skipped) out += "skipped " + s + "\n";
  return out;
}

}  // namespace lexdisc
