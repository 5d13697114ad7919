#include "lexdisc/metric_report.h"

#include <fstream>

#include "lexdisc/csv.h"

namespace lexdisc {

std::string metricReportsToCsv(std::span<const MetricReport> rows) {
  std::string out =
      "speaker_id,register,metric,value,n_pairs_or_types,seed,sample_index\n";
  for (const MetricReport& row : rows) {
    out += csvEscape(row.speaker_id);
    out += ',';
    out += csvEscape(row.register_label);
    out += ',';
    out += row.metric;
    out += ',';
    out += formatDouble(row.value);
    out += ',';
    out += std::to_string(row.n);
    out += ',';
    if (row.seed) out += std::to_string(*row.seed);
    out += ',';
    if (row.sample_index) out += std::to_string(*row.sample_index);
    out += '\n';
  }
  return out;
}

void writeMetricReportsCsv(const std::string& path,
                           std::span<const MetricReport> rows) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error("cannot open report for writing: " + path);
  std::string csv = metricReportsToCsv(rows);
  file.write(csv.data(), static_cast<std::streamsize>(csv.size()));
  if (!file) throw Error("write failure on report: " + path);
}

}  // namespace lexdisc
