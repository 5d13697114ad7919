#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lexdisc/errors.h"
#include "lexdisc/sampling.h"

namespace lexdisc {

/// One per-speaker, per-register metric value. n counts the detail items
/// behind the value (scored pairs, type pairs, included types, or samples).
/// seed and sample_index are set only for sampled metrics; aggregated
/// sampled values carry the seed but no sample index.
struct MetricReport {
  std::string speaker_id;
  std::string register_label;
  std::string metric;  // "abx", "separation", "variability", or "ned"
  double value = 0.0;
  long long n = 0;
  std::optional<uint64_t> seed;
  std::optional<int> sample_index;
};

/// Renders rows under the header
/// speaker_id,register,metric,value,n_pairs_or_types,seed,sample_index
/// with unset seed / sample_index left empty.
std::string metricReportsToCsv(std::span<const MetricReport> rows);

void writeMetricReportsCsv(const std::string& path,
                           std::span<const MetricReport> rows);

/// Scores every sample and returns the unweighted mean, optionally
/// exposing the per-sample values. A scorer failure is rethrown with the
/// failing sample's index prefixed, preserving the error type for the
/// exit-code mapping.
template <typename Scorer>
double sampledMetric(std::span<const SampledLexicon> samples, Scorer&& score,
                     std::vector<double>* per_sample = nullptr) {
  if (samples.empty()) throw UsageError("sampledMetric: no samples");
  double sum = 0.0;
  for (const SampledLexicon& sample : samples) {
    double value = 0.0;
    auto context = [&sample](const Error& e) {
      return "sample " + std::to_string(sample.sample_index) + ": " + e.what();
    };
    try {
      value = score(sample);
    } catch (const InsufficientDataError& e) {
      throw InsufficientDataError(context(e));
    } catch (const DegenerateDataError& e) {
      throw DegenerateDataError(context(e));
    } catch (const UsageError& e) {
      throw UsageError(context(e));
    } catch (const Error& e) {
      throw Error(context(e));
    }
    if (per_sample) per_sample->push_back(value);
    sum += value;
  }
  return sum / static_cast<double>(samples.size());
}

}  // namespace lexdisc
