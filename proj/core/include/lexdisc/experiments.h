#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lexdisc/abx.h"
#include "lexdisc/frontend.h"
#include "lexdisc/manifest.h"
#include "lexdisc/metric_report.h"
#include "lexdisc/paired_stats.h"

// Experiment orchestration. Every run loads a manifest, scores each
// speaker, and compares registers with paired per-speaker statistics.
//
//   exp1 / control  token discriminability (ABX), category separation and
//                   within-category variability over the types a speaker
//                   produced in both registers. ABX is compared over the
//                   category pairs scored in both registers, so register
//                   deltas never mix in pairs one register could not score.
//   exp2            phonemic distinctness (mean NED) over repeated
//                   size-matched sub-lexicon samples.
//   exp3            ABX over the same sub-lexicon samples as exp2: the
//                   sample streams are keyed by (seed, speaker, register,
//                   index), so equal seeds give identical membership.
//   abx / ned       raw per-lexicon scores without a register comparison.
//
// exp1 and control never touch the seed; their outputs are identical for
// any seed value.

namespace lexdisc {

struct RunConfig {
  std::string manifest_path;
  std::string register_x = "ADS";
  std::string register_y = "IDS";
  /// Raw abx/ned runs only: keep these registers (empty means all).
  std::vector<std::string> register_filter;
  int n_samples = 100;
  uint64_t seed = 0;
  bool remove_onomatopoeia = false;
  std::string output_dir;  // empty: compute only, write nothing
  bool use_cache = true;
  unsigned threads = 0;  // 0 = hardware concurrency
  FrontendConfig frontend;
};

struct SampleMembershipRow {
  std::string speaker_id;
  std::string register_label;
  int sample_index = 0;
  uint64_t seed = 0;
  std::vector<std::string> type_keys;
};

/// One scored category pair of one lexicon (raw abx runs).
struct AbxPairRow {
  std::string speaker_id;
  std::string register_label;
  PairScore pair;
};

struct ExperimentReport {
  std::string experiment;
  std::string manifest_hash_hex;
  std::vector<MetricReport> scores;
  std::vector<PairedComparison> comparisons;
  /// Human-readable notes on skipped speakers, pairs, and types.
  std::vector<std::string> skipped;
  std::vector<SampleMembershipRow> samples;  // exp2 / exp3
  std::vector<AbxPairRow> pair_detail;       // raw abx
};

ExperimentReport runExp1(const RunConfig& config);
/// Same analysis as exp1; a separate name so reports from control
/// comparisons (e.g. read versus spontaneous speech) stay distinct.
ExperimentReport runControl(const RunConfig& config);
ExperimentReport runExp2(const RunConfig& config);
ExperimentReport runExp3(const RunConfig& config);
ExperimentReport runRawAbx(const RunConfig& config);
ExperimentReport runRawNed(const RunConfig& config);

struct RegisterSummary {
  std::string register_label;
  double duration_s = 0.0;
  long long types = 0;   // distinct type keys across speakers
  long long tokens = 0;  // kept tokens
};

/// Per-register totals over loaded lexicons; registers appear only if
/// they have at least one kept token. Sorted by register label.
std::vector<RegisterSummary> summarizeCorpus(const std::vector<Lexicon>& lexicons);

/// Fixed-width text rendering of a corpus summary.
std::string registerSummaryTable(std::span<const RegisterSummary> rows);

/// Writes <experiment>_scores.csv, <experiment>_summary.json, a
/// <experiment>_run.json metadata file, and (when present) sample
/// membership and pair detail CSVs into config.output_dir.
/// Does nothing when output_dir is empty.
void writeExperimentOutputs(const RunConfig& config,
                            const ExperimentReport& report);

/// One line per register comparison, for terminal output.
std::string comparisonsSummaryText(const ExperimentReport& report);

}  // namespace lexdisc
