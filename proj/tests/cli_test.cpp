#include <gtest/gtest.h>
#include <sys/wait.h>

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include "support/fixture_corpus.h"
#include "support/temp_dir.h"

namespace lexdisc {
namespace {

using testing::FixtureOptions;
using testing::generateFixtureCorpus;
using testing::TempDir;

struct CliResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr combined
};

CliResult runCli(const std::string& args) {
  std::string command = std::string(LEXDISC_CLI_PATH) + " " + args + " 2>&1";
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(command.c_str(), "r"),
                                             pclose);
  if (!pipe) {
    ADD_FAILURE() << "popen failed for: " << command;
    return {};
  }
  CliResult result;
  char buffer[4096];
  size_t got;
  while ((got = fread(buffer, 1, sizeof buffer, pipe.get())) > 0) {
    result.output.append(buffer, got);
  }
  int status = pclose(pipe.release());
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  EXPECT_TRUE(in.good()) << path;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

/// One small audio corpus shared by every test in this binary.
const std::string& corpusManifest() {
  static TempDir dir("cli-corpus");
  static std::string manifest = [] {
    FixtureOptions opt;
    opt.n_speakers = 2;
    opt.n_shared_types = 4;
    opt.tokens_per_type = 2;
    opt.extra_y_flagged_types = 2;
    opt.extra_tokens_per_type = 2;
    return generateFixtureCorpus(dir.str(), opt);
  }();
  return manifest;
}

TEST(Cli, VersionAndHelp) {
  auto version = runCli("--version");
  EXPECT_EQ(version.exit_code, 0);
  EXPECT_NE(version.output.find("0.1.0"), std::string::npos);

  auto help = runCli("--help");
  EXPECT_EQ(help.exit_code, 0);
  for (const char* sub :
       {"summarize", "exp1", "exp2", "exp3", "control", "abx", "ned"}) {
    EXPECT_NE(help.output.find(sub), std::string::npos) << sub;
  }

  auto sub_help = runCli("exp1 --help");
  EXPECT_EQ(sub_help.exit_code, 0);
  for (const char* flag :
       {"--manifest", "--registers", "--seed", "--samples",
        "--no-onomatopoeia", "--out", "--no-cache", "--window-ms", "--hop-ms",
        "--fmin", "--fmax", "--nfilters", "--config"}) {
    EXPECT_NE(sub_help.output.find(flag), std::string::npos) << flag;
  }
}

TEST(Cli, SummarizePrintsRegisterTable) {
  auto result = runCli("summarize --manifest " + corpusManifest());
  EXPECT_EQ(result.exit_code, 0);
  EXPECT_NE(result.output.find("ADS"), std::string::npos);
  EXPECT_NE(result.output.find("IDS"), std::string::npos);
}

TEST(Cli, Exp1WritesReports) {
  TempDir out("cli-exp1");
  auto result = runCli("exp1 --manifest " + corpusManifest() + " --out " +
                       out.str());
  EXPECT_EQ(result.exit_code, 0) << result.output;
  EXPECT_NE(result.output.find("abx"), std::string::npos);
  EXPECT_NE(result.output.find(out.str()), std::string::npos);
  for (const char* name :
       {"exp1_scores.csv", "exp1_summary.json", "exp1_run.json"}) {
    EXPECT_TRUE(std::filesystem::exists(out.path() / name)) << name;
  }
}

TEST(Cli, ConfigFileValuesAndFlagOverrides) {
  TempDir out("cli-config");
  std::string config_path = out.str("run.cfg");
  {
    std::ofstream cfg(config_path);
    cfg << "manifest=" << corpusManifest() << "\n"
        << "out=" << out.str() << "\n"
        << "seed=9\n"
        << "samples=3\n";
  }

  auto result = runCli("exp2 --config " + config_path);
  EXPECT_EQ(result.exit_code, 0) << result.output;
  auto run = nlohmann::json::parse(readFile(out.str("exp2_run.json")));
  EXPECT_EQ(run.at("config").at("seed"), 9);
  EXPECT_EQ(run.at("config").at("n_samples"), 3);

  auto override_run =
      runCli("exp2 --config " + config_path + " --seed 4 --samples 2");
  EXPECT_EQ(override_run.exit_code, 0) << override_run.output;
  auto overridden = nlohmann::json::parse(readFile(out.str("exp2_run.json")));
  EXPECT_EQ(overridden.at("config").at("seed"), 4);
  EXPECT_EQ(overridden.at("config").at("n_samples"), 2);
}

TEST(Cli, FrontendFlagsReachTheRun) {
  TempDir out("cli-frontend");
  auto result = runCli("exp1 --manifest " + corpusManifest() + " --out " +
                       out.str() +
                       " --window-ms 20 --hop-ms 5 --fmin 150 --fmax 6000"
                       " --nfilters 11 --no-cache");
  EXPECT_EQ(result.exit_code, 0) << result.output;
  auto run = nlohmann::json::parse(readFile(out.str("exp1_run.json")));
  const auto& fe = run.at("config").at("frontend");
  EXPECT_EQ(fe.at("n_filters"), 11);
  EXPECT_DOUBLE_EQ(fe.at("window_s").get<double>(), 0.020);
  EXPECT_DOUBLE_EQ(fe.at("hop_s").get<double>(), 0.005);
  EXPECT_DOUBLE_EQ(fe.at("f_min_hz").get<double>(), 150.0);
  EXPECT_DOUBLE_EQ(fe.at("f_max_hz").get<double>(), 6000.0);
  EXPECT_EQ(run.at("config").at("use_cache"), false);
  EXPECT_FALSE(std::filesystem::exists(out.path() / "cache"));
}

TEST(Cli, NoOnomatopoeiaChangesNedRun) {
  TempDir out_a("cli-ono-a");
  TempDir out_b("cli-ono-b");
  auto with_flags = runCli("ned --manifest " + corpusManifest() + " --out " +
                           out_a.str());
  ASSERT_EQ(with_flags.exit_code, 0) << with_flags.output;
  auto without_flags = runCli("ned --manifest " + corpusManifest() +
                              " --out " + out_b.str() + " --no-onomatopoeia");
  ASSERT_EQ(without_flags.exit_code, 0) << without_flags.output;
  EXPECT_NE(readFile(out_a.str("ned_scores.csv")),
            readFile(out_b.str("ned_scores.csv")));
}

TEST(Cli, RegisterFilterOnRawRuns) {
  TempDir out("cli-filter");
  auto result = runCli("ned --manifest " + corpusManifest() + " --out " +
                       out.str() + " --registers IDS");
  ASSERT_EQ(result.exit_code, 0) << result.output;
  std::string csv = readFile(out.str("ned_scores.csv"));
  EXPECT_NE(csv.find("IDS"), std::string::npos);
  EXPECT_EQ(csv.find("ADS"), std::string::npos);
}

TEST(Cli, UsageAndConfigErrorsExitTwo) {
  TempDir out("cli-err2");
  EXPECT_EQ(runCli("").exit_code, 2);  // subcommand required
  EXPECT_EQ(runCli("frobnicate").exit_code, 2);
  EXPECT_EQ(runCli("exp1 --manifest x.csv").exit_code, 2);  // --out missing
  EXPECT_EQ(runCli("exp1 --manifest " + corpusManifest() + " --out " +
                   out.str() + " --registers ADS")
                .exit_code,
            2);  // needs exactly two registers
  auto bad_filters = runCli("exp1 --manifest " + corpusManifest() + " --out " +
                            out.str() + " --nfilters 0");
  EXPECT_EQ(bad_filters.exit_code, 2);
  EXPECT_NE(bad_filters.output.find("configuration error"),
            std::string::npos);
  EXPECT_EQ(runCli("exp1 --manifest " + corpusManifest() + " --out " +
                   out.str() + " --bogus-flag")
                .exit_code,
            2);
}

TEST(Cli, DataErrorsExitThree) {
  TempDir out("cli-err3");
  auto missing = runCli("exp1 --manifest " + out.str("absent.csv") +
                        " --out " + out.str());
  EXPECT_EQ(missing.exit_code, 3);
  EXPECT_NE(missing.output.find("manifest error"), std::string::npos);

  // Structurally broken manifest: duplicate token id.
  std::string bad_path = out.str("dup.csv");
  std::ofstream(bad_path)
      << "token_id,speaker_id,register,type_key,audio_path,start_s,end_s,"
         "onomatopoeia,exclude\n"
         "t1,s1,ADS,k a,a.wav,0.0,1.0,0,0\n"
         "t1,s1,IDS,k a,a.wav,0.0,1.0,0,0\n";
  EXPECT_EQ(runCli("exp2 --manifest " + bad_path + " --out " + out.str())
                .exit_code,
            3);

  // Audio that cannot be ingested: manifest points at a missing file.
  std::string no_audio = out.str("noaudio.csv");
  std::ofstream(no_audio)
      << "token_id,speaker_id,register,type_key,audio_path,start_s,end_s,"
         "onomatopoeia,exclude\n"
         "t1,s1,ADS,k a,gone.wav,0.0,0.5,0,0\n"
         "t2,s1,ADS,m u,gone.wav,0.5,1.0,0,0\n"
         "t3,s1,IDS,k a,gone.wav,0.0,0.5,0,0\n"
         "t4,s1,IDS,m u,gone.wav,0.5,1.0,0,0\n"
         "t5,s2,ADS,k a,gone.wav,0.0,0.5,0,0\n"
         "t6,s2,ADS,m u,gone.wav,0.5,1.0,0,0\n"
         "t7,s2,IDS,k a,gone.wav,0.0,0.5,0,0\n"
         "t8,s2,IDS,m u,gone.wav,0.5,1.0,0,0\n";
  auto audio = runCli("exp1 --manifest " + no_audio + " --out " + out.str());
  EXPECT_EQ(audio.exit_code, 3);
  EXPECT_NE(audio.output.find("audio error"), std::string::npos);
}

TEST(Cli, InsufficientDataExitsFour) {
  TempDir dir("cli-err4");
  FixtureOptions opt;
  opt.n_speakers = 1;
  opt.n_shared_types = 4;
  opt.tokens_per_type = 2;
  opt.write_audio = false;
  auto manifest = generateFixtureCorpus(dir.str(), opt);

  auto result =
      runCli("exp2 --manifest " + manifest + " --out " + dir.str("out"));
  EXPECT_EQ(result.exit_code, 4);
  EXPECT_NE(result.output.find("insufficient data"), std::string::npos);
}

}  // namespace
}  // namespace lexdisc
