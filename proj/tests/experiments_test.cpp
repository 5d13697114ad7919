#include <gtest/gtest.h>

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lexdisc/errors.h"
#include "lexdisc/experiments.h"
#include "lexdisc/manifest.h"
#include "lexdisc/ned.h"
#include "support/fixture_corpus.h"
#include "support/temp_dir.h"

namespace lexdisc {
namespace {

using testing::FixtureOptions;
using testing::generateFixtureCorpus;
using testing::TempDir;

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  EXPECT_TRUE(in.good()) << path;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

RunConfig baseConfig(const std::string& manifest_path) {
  RunConfig config;
  config.manifest_path = manifest_path;
  config.threads = 1;
  return config;
}

const PairedComparison& findComparison(const ExperimentReport& report,
                                       const std::string& metric) {
  for (const auto& c : report.comparisons) {
    if (c.metric == metric) return c;
  }
  ADD_FAILURE() << "no comparison for metric " << metric;
  static PairedComparison none;
  return none;
}

TEST(Summarize, CountsPerRegister) {
  std::string text =
      "token_id,speaker_id,register,type_key,audio_path,start_s,end_s,"
      "onomatopoeia,exclude\n"
      "t1,s1,ADS,k a,a.wav,0.0,1.5,0,0\n"
      "t2,s1,ADS,m u,a.wav,2.0,2.5,0,0\n"
      "t3,s2,ADS,k a,b.wav,0.0,1.0,0,0\n"
      "t4,s1,IDS,k a,c.wav,0.0,0.25,0,0\n"
      "t5,s1,IDS,k a,c.wav,1.0,1.5,0,1\n";
  auto lexicons = parseManifest(text);
  auto rows = summarizeCorpus(lexicons);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].register_label, "ADS");
  EXPECT_DOUBLE_EQ(rows[0].duration_s, 1.5 + 0.5 + 1.0);
  EXPECT_EQ(rows[0].types, 2);   // distinct across speakers
  EXPECT_EQ(rows[0].tokens, 3);
  EXPECT_EQ(rows[1].register_label, "IDS");
  EXPECT_EQ(rows[1].tokens, 1);  // excluded row dropped

  std::string table = registerSummaryTable(rows);
  EXPECT_NE(table.find("ADS"), std::string::npos);
  EXPECT_NE(table.find("IDS"), std::string::npos);
}

TEST(Exp1, IdenticalAudioAcrossRegistersGivesExactZeroDeltas) {
  TempDir dir("exp1-ident");
  FixtureOptions opt;
  opt.n_speakers = 3;
  opt.n_shared_types = 6;
  opt.tokens_per_type = 2;
  opt.identical_audio = true;
  auto manifest = generateFixtureCorpus(dir.str(), opt);

  auto report = runExp1(baseConfig(manifest));
  ASSERT_EQ(report.comparisons.size(), 3u);
  for (const auto& c : report.comparisons) {
    EXPECT_TRUE(c.degenerate) << c.metric;
    EXPECT_EQ(c.mean_x, c.mean_y) << c.metric;
    for (const auto& s : c.per_speaker) {
      EXPECT_EQ(s.x, s.y) << c.metric << " " << s.speaker_id;
    }
  }
  EXPECT_TRUE(report.samples.empty());
  EXPECT_EQ(report.experiment, "exp1");
}

TEST(Exp1, JitteredRegisterScoresWorseOnEveryMetric) {
  TempDir dir("exp1-jitter");
  FixtureOptions opt;
  opt.n_speakers = 4;
  opt.n_shared_types = 8;
  opt.tokens_per_type = 2;
  opt.jitter_x = 0.01;
  opt.jitter_y = 0.12;
  auto manifest = generateFixtureCorpus(dir.str(), opt);

  auto report = runExp1(baseConfig(manifest));
  const auto& abx = findComparison(report, "abx");
  EXPECT_LT(abx.mean_y, abx.mean_x);
  EXPECT_EQ(abx.n, 4);
  const auto& variability = findComparison(report, "variability");
  EXPECT_GT(variability.mean_y, variability.mean_x);

  // Per speaker and register: one row per metric.
  EXPECT_EQ(report.scores.size(), 4u * 2u * 3u);
  for (const auto& row : report.scores) {
    EXPECT_FALSE(row.seed.has_value());
    EXPECT_FALSE(row.sample_index.has_value());
  }
}

TEST(Exp1, SkippingOneSpeakerLeavesOthersBitIdentical) {
  TempDir dir("exp1-skip");
  FixtureOptions opt;
  opt.n_speakers = 3;
  opt.n_shared_types = 5;
  opt.tokens_per_type = 2;
  auto manifest = generateFixtureCorpus(dir.str(), opt);

  auto full = runExp1(baseConfig(manifest));

  // Exclude every IDS row of speaker s01, leaving it with one register.
  std::istringstream in(readFile(manifest));
  std::string line, reduced_text;
  std::getline(in, line);
  reduced_text = line + "\n";
  while (std::getline(in, line)) {
    if (line.find(",s01,IDS,") != std::string::npos) {
      line[line.size() - 1] = '1';
    }
    reduced_text += line + "\n";
  }
  auto reduced_path = dir.str("reduced.csv");
  std::ofstream(reduced_path, std::ios::binary) << reduced_text;

  auto reduced = runExp1(baseConfig(reduced_path));
  ASSERT_FALSE(reduced.skipped.empty());
  EXPECT_NE(reduced.skipped[0].find("s01"), std::string::npos);

  auto others = [](const ExperimentReport& r) {
    std::vector<MetricReport> rows;
    for (const auto& row : r.scores) {
      if (row.speaker_id != "s01") rows.push_back(row);
    }
    return rows;
  };
  auto full_rows = others(full);
  auto reduced_rows = others(reduced);
  ASSERT_EQ(full_rows.size(), reduced_rows.size());
  for (size_t i = 0; i < full_rows.size(); ++i) {
    EXPECT_EQ(full_rows[i].speaker_id, reduced_rows[i].speaker_id);
    EXPECT_EQ(full_rows[i].metric, reduced_rows[i].metric);
    EXPECT_EQ(full_rows[i].value, reduced_rows[i].value);
    EXPECT_EQ(full_rows[i].n, reduced_rows[i].n);
  }
}

TEST(Exp1, FewerThanTwoUsableSpeakersIsInsufficientData) {
  TempDir dir("exp1-one");
  FixtureOptions opt;
  opt.n_speakers = 1;
  opt.n_shared_types = 4;
  opt.tokens_per_type = 2;
  auto manifest = generateFixtureCorpus(dir.str(), opt);
  EXPECT_THROW(runExp1(baseConfig(manifest)), InsufficientDataError);
}

TEST(Exp1, UnknownRegisterIsConfigError) {
  TempDir dir("exp1-reg");
  FixtureOptions opt;
  opt.n_speakers = 2;
  opt.n_shared_types = 4;
  opt.tokens_per_type = 2;
  auto manifest = generateFixtureCorpus(dir.str(), opt);
  RunConfig config = baseConfig(manifest);
  config.register_y = "RS";
  EXPECT_THROW(runExp1(config), ConfigError);
}

FixtureOptions nedFixture() {
  FixtureOptions opt;
  opt.n_speakers = 5;
  opt.n_shared_types = 10;
  opt.tokens_per_type = 2;
  opt.extra_y_normal_types = 2;
  opt.extra_y_flagged_types = 4;
  opt.extra_tokens_per_type = 3;
  opt.speaker_specific_extras = true;
  opt.write_audio = false;
  return opt;
}

TEST(Exp2, FlaggedTypesInflateNedAndRemovalCollapsesTheGap) {
  TempDir dir("exp2");
  auto manifest = generateFixtureCorpus(dir.str(), nedFixture());

  RunConfig config = baseConfig(manifest);
  config.n_samples = 50;
  config.seed = 5;

  auto with_flags = runExp2(config);
  const auto& before = findComparison(with_flags, "ned");
  EXPECT_GT(before.mean_y, before.mean_x);
  ASSERT_TRUE(before.seed.has_value());
  EXPECT_EQ(*before.seed, 5u);

  config.remove_onomatopoeia = true;
  auto without_flags = runExp2(config);
  const auto& after = findComparison(without_flags, "ned");
  EXPECT_LT(std::fabs(after.mean_y - after.mean_x),
            (before.mean_y - before.mean_x) / 4.0);

  // Sampled rows: one aggregate row per speaker and register.
  EXPECT_EQ(with_flags.scores.size(), 5u * 2u);
  for (const auto& row : with_flags.scores) {
    EXPECT_EQ(row.metric, "ned");
    EXPECT_EQ(row.n, 50);
    ASSERT_TRUE(row.seed.has_value());
  }
  EXPECT_EQ(with_flags.samples.size(), 5u * 2u * 50u);
}

TEST(Exp2, SampleMembershipIsSeedDeterministic) {
  TempDir dir("exp2-seed");
  auto manifest = generateFixtureCorpus(dir.str(), nedFixture());
  RunConfig config = baseConfig(manifest);
  config.n_samples = 10;
  config.seed = 3;

  auto first = runExp2(config);
  auto second = runExp2(config);
  ASSERT_EQ(first.samples.size(), second.samples.size());
  for (size_t i = 0; i < first.samples.size(); ++i) {
    EXPECT_EQ(first.samples[i].type_keys, second.samples[i].type_keys);
  }

  config.seed = 4;
  auto reseeded = runExp2(config);
  bool any_differ = false;
  for (size_t i = 0; i < first.samples.size(); ++i) {
    if (first.samples[i].type_keys != reseeded.samples[i].type_keys) {
      any_differ = true;
    }
  }
  EXPECT_TRUE(any_differ);
}

TEST(Exp3, ReusesExactlyTheExp2Samples) {
  TempDir dir("exp3");
  FixtureOptions opt;
  opt.n_speakers = 3;
  opt.n_shared_types = 6;
  opt.tokens_per_type = 2;
  opt.extra_y_flagged_types = 2;
  opt.extra_tokens_per_type = 2;
  opt.jitter_y = 0.10;
  auto manifest = generateFixtureCorpus(dir.str(), opt);

  RunConfig config = baseConfig(manifest);
  config.n_samples = 8;
  config.seed = 11;

  auto exp2 = runExp2(config);
  auto exp3 = runExp3(config);
  ASSERT_EQ(exp2.samples.size(), exp3.samples.size());
  for (size_t i = 0; i < exp2.samples.size(); ++i) {
    EXPECT_EQ(exp2.samples[i].speaker_id, exp3.samples[i].speaker_id);
    EXPECT_EQ(exp2.samples[i].register_label, exp3.samples[i].register_label);
    EXPECT_EQ(exp2.samples[i].sample_index, exp3.samples[i].sample_index);
    EXPECT_EQ(exp2.samples[i].type_keys, exp3.samples[i].type_keys);
  }

  const auto& abx = findComparison(exp3, "abx");
  EXPECT_LT(abx.mean_y, abx.mean_x);  // jitter hurts discrimination
  for (const auto& row : exp3.scores) {
    EXPECT_EQ(row.metric, "abx");
    EXPECT_EQ(row.n, 8);
  }
}

TEST(Experiments, CacheAndThreadCountNeverChangeOutputBytes) {
  TempDir corpus("cache-corpus");
  FixtureOptions opt;
  opt.n_speakers = 2;
  opt.n_shared_types = 5;
  opt.tokens_per_type = 2;
  auto manifest = generateFixtureCorpus(corpus.str(), opt);

  TempDir out_a("cache-a");
  RunConfig config = baseConfig(manifest);
  config.output_dir = out_a.str();
  writeExperimentOutputs(config, runExp1(config));
  std::string first = readFile(out_a.str("exp1_scores.csv"));
  std::string first_summary = readFile(out_a.str("exp1_summary.json"));

  // Second run hits the feature and table caches.
  writeExperimentOutputs(config, runExp1(config));
  EXPECT_EQ(readFile(out_a.str("exp1_scores.csv")), first);
  EXPECT_TRUE(
      std::filesystem::exists(out_a.path() / "cache" / "tables"));

  TempDir out_b("cache-b");
  RunConfig cold = config;
  cold.output_dir = out_b.str();
  cold.use_cache = false;
  cold.threads = 3;
  writeExperimentOutputs(cold, runExp1(cold));
  EXPECT_EQ(readFile(out_b.str("exp1_scores.csv")), first);
  EXPECT_EQ(readFile(out_b.str("exp1_summary.json")), first_summary);
  EXPECT_FALSE(std::filesystem::exists(out_b.path() / "cache"));
}

TEST(Experiments, SummaryJsonShapeAndRunMetadata) {
  TempDir corpus("json-corpus");
  FixtureOptions opt;
  opt.n_speakers = 2;
  opt.n_shared_types = 5;
  opt.tokens_per_type = 2;
  auto manifest = generateFixtureCorpus(corpus.str(), opt);

  TempDir out("json-out");
  RunConfig config = baseConfig(manifest);
  config.output_dir = out.str();

  writeExperimentOutputs(config, runExp1(config));
  auto summary = nlohmann::json::parse(readFile(out.str("exp1_summary.json")));
  EXPECT_EQ(summary.at("experiment"), "exp1");
  ASSERT_TRUE(summary.at("comparisons").is_array());
  const auto& c = summary.at("comparisons").at(0);
  for (const char* key : {"metric", "n", "means", "t", "df", "p", "d_z",
                          "d_av", "relative_pct", "degenerate", "seed",
                          "per_speaker"}) {
    EXPECT_TRUE(c.contains(key)) << key;
  }
  EXPECT_TRUE(c.at("seed").is_null());

  auto run = nlohmann::json::parse(readFile(out.str("exp1_run.json")));
  EXPECT_EQ(run.at("experiment"), "exp1");
  EXPECT_FALSE(run.at("config").contains("seed"));
  EXPECT_EQ(run.at("config").at("frontend").at("n_filters"), 13);

  std::string scores = readFile(out.str("exp1_scores.csv"));
  EXPECT_EQ(scores.substr(0, scores.find('\n')),
            "speaker_id,register,metric,value,n_pairs_or_types,seed,"
            "sample_index");

  // exp2 outputs carry the seed and the sample membership file.
  config.n_samples = 4;
  config.seed = 21;
  writeExperimentOutputs(config, runExp2(config));
  auto run2 = nlohmann::json::parse(readFile(out.str("exp2_run.json")));
  EXPECT_EQ(run2.at("config").at("seed"), 21);
  EXPECT_EQ(run2.at("config").at("n_samples"), 4);
  std::string samples_csv = readFile(out.str("exp2_samples.csv"));
  EXPECT_EQ(samples_csv.substr(0, samples_csv.find('\n')),
            "speaker_id,register,sample_index,seed,type_keys");
}

TEST(RawRuns, AbxAggregatesItsOwnPairDetail) {
  TempDir corpus("raw-corpus");
  FixtureOptions opt;
  opt.n_speakers = 2;
  opt.n_shared_types = 4;
  opt.tokens_per_type = 2;
  auto manifest = generateFixtureCorpus(corpus.str(), opt);

  auto report = runRawAbx(baseConfig(manifest));
  EXPECT_EQ(report.experiment, "abx");
  EXPECT_TRUE(report.comparisons.empty());
  ASSERT_EQ(report.scores.size(), 4u);  // 2 speakers x 2 registers
  for (const auto& row : report.scores) {
    std::vector<PairScore> pairs;
    for (const auto& detail : report.pair_detail) {
      if (detail.speaker_id == row.speaker_id &&
          detail.register_label == row.register_label) {
        pairs.push_back(detail.pair);
      }
    }
    ASSERT_EQ(static_cast<long long>(pairs.size()), row.n);
    EXPECT_EQ(abxAggregate(pairs), row.value);
  }
}

TEST(RawRuns, RegisterFilterAndUnknownRegister) {
  TempDir corpus("raw-filter");
  FixtureOptions opt;
  opt.n_speakers = 2;
  opt.n_shared_types = 4;
  opt.tokens_per_type = 2;
  opt.write_audio = false;
  auto manifest = generateFixtureCorpus(corpus.str(), opt);

  RunConfig config = baseConfig(manifest);
  config.register_filter = {"IDS"};
  auto report = runRawNed(config);
  ASSERT_EQ(report.scores.size(), 2u);
  for (const auto& row : report.scores) {
    EXPECT_EQ(row.register_label, "IDS");
  }

  config.register_filter = {"XYZ"};
  EXPECT_THROW(runRawNed(config), ConfigError);
}

TEST(RawRuns, NedMatchesDirectComputation) {
  TempDir corpus("raw-ned");
  FixtureOptions opt;
  opt.n_speakers = 1;
  opt.n_shared_types = 5;
  opt.tokens_per_type = 2;
  opt.extra_y_flagged_types = 2;
  opt.write_audio = false;
  auto manifest = generateFixtureCorpus(corpus.str(), opt);

  auto report = runRawNed(baseConfig(manifest));
  auto lexicons = loadManifest(manifest);
  ASSERT_EQ(report.scores.size(), lexicons.size());
  for (size_t i = 0; i < lexicons.size(); ++i) {
    std::vector<std::vector<std::string>> phonemes;
    for (const auto& key : lexicons[i].typeKeys()) {
      phonemes.push_back(splitPhonemes(key));
    }
    EXPECT_EQ(report.scores[i].value, meanNed(phonemes));
    EXPECT_EQ(report.scores[i].n,
              static_cast<long long>(phonemes.size()));
  }

  // Dropping flagged types first changes the IDS value.
  RunConfig config = baseConfig(manifest);
  config.remove_onomatopoeia = true;
  auto cleaned = runRawNed(config);
  EXPECT_NE(cleaned.scores[1].value, report.scores[1].value);
}

}  // namespace
}  // namespace lexdisc
