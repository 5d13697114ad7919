// Command-line front door. Subcommands share one option surface
// (manifest, registers, sampling, front-end overrides, output directory)
// and map library errors onto stable exit codes:
//   0 success, 2 configuration error, 3 manifest or audio error,
//   4 insufficient data.

#include <cstdio>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lexdisc/errors.h"
#include "lexdisc/experiments.h"
#include "lexdisc/manifest.h"
#include "lexdisc/version.h"

namespace {

struct CliOptions {
  std::string manifest;
  std::string registers_text;
  uint64_t seed = 0;
  int samples = 100;
  bool no_onomatopoeia = false;
  std::string out_dir;
  bool no_cache = false;
  unsigned threads = 0;
  double window_ms = 25.0;
  double hop_ms = 10.0;
  double fmin = 100.0;
  double fmax = 6855.0;
  int nfilters = 13;
  std::string config_path;
};

constexpr char kConfigHelp[] =
    "Config file with key=value lines; command-line flags override file "
    "values";

void addCommonOptions(CLI::App* cmd, CliOptions& opt, bool paired_registers) {
  cmd->add_option("--config", opt.config_path, kConfigHelp);
  cmd->add_option("--manifest", opt.manifest, "Corpus manifest CSV");
  if (paired_registers) {
    cmd->add_option("--registers", opt.registers_text,
                    "Registers to compare, as X,Y")
        ->capture_default_str();
  } else {
    cmd->add_option("--registers", opt.registers_text,
                    "Registers to include, comma-separated (default: all)");
  }
  cmd->add_option("--seed", opt.seed, "Sampling seed")->capture_default_str();
  cmd->add_option("--samples", opt.samples,
                  "Sub-lexicon samples per speaker and register")
      ->capture_default_str();
  cmd->add_flag("--no-onomatopoeia", opt.no_onomatopoeia,
                "Drop onomatopoeia-flagged types before analysis");
  cmd->add_option("--out", opt.out_dir, "Directory for reports and caches");
  cmd->add_flag("--no-cache", opt.no_cache,
                "Recompute features and distance tables from scratch");
  cmd->add_option("--threads", opt.threads,
                  "Worker threads for distance tables (0 = all cores)")
      ->capture_default_str();
  cmd->add_option("--window-ms", opt.window_ms, "Analysis window length (ms)")
      ->capture_default_str();
  cmd->add_option("--hop-ms", opt.hop_ms, "Analysis hop (ms)")
      ->capture_default_str();
  cmd->add_option("--fmin", opt.fmin, "Lowest filter edge (Hz)")
      ->capture_default_str();
  cmd->add_option("--fmax", opt.fmax, "Highest filter edge (Hz)")
      ->capture_default_str();
  cmd->add_option("--nfilters", opt.nfilters, "Number of mel filters")
      ->capture_default_str();
}

std::string trimmed(const std::string& text) {
  std::size_t begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  std::size_t end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

[[noreturn]] void badConfigValue(long line_no, const std::string& key,
                                 const std::string& value) {
  throw lexdisc::ConfigError("config file line " + std::to_string(line_no) +
                             ": bad value '" + value + "' for key '" + key +
                             "'");
}

long long parseConfigInt(const std::string& value, long line_no,
                         const std::string& key) {
  try {
    std::size_t pos = 0;
    long long parsed = std::stoll(value, &pos);
    if (!value.empty() && pos == value.size()) return parsed;
  } catch (const std::exception&) {
  }
  badConfigValue(line_no, key, value);
}

uint64_t parseConfigU64(const std::string& value, long line_no,
                        const std::string& key) {
  if (!value.empty() && value[0] != '-') {
    try {
      std::size_t pos = 0;
      unsigned long long parsed = std::stoull(value, &pos);
      if (pos == value.size()) return parsed;
    } catch (const std::exception&) {
    }
  }
  badConfigValue(line_no, key, value);
}

double parseConfigDouble(const std::string& value, long line_no,
                         const std::string& key) {
  try {
    std::size_t pos = 0;
    double parsed = std::stod(value, &pos);
    if (!value.empty() && pos == value.size()) return parsed;
  } catch (const std::exception&) {
  }
  badConfigValue(line_no, key, value);
}

bool parseConfigBool(const std::string& value, long line_no,
                     const std::string& key) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  badConfigValue(line_no, key, value);
}

// CLI11 only reads config files for the top-level app, so subcommands merge
// theirs by hand: every key mirrors a long flag, and a key is applied only
// when its flag both exists on the subcommand and was absent from the
// command line, which keeps "flags override file values" literal.
void applyConfigFile(const CLI::App* cmd, CliOptions& opt) {
  if (opt.config_path.empty()) return;
  std::ifstream in(opt.config_path);
  if (!in) {
    throw lexdisc::ConfigError("cannot open config file: " + opt.config_path);
  }
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string entry = trimmed(line);
    if (entry.empty()) continue;
    std::size_t eq = entry.find('=');
    if (eq == std::string::npos) {
      throw lexdisc::ConfigError("config file line " +
                                 std::to_string(line_no) +
                                 ": expected key=value, got '" + entry + "'");
    }
    std::string key = trimmed(entry.substr(0, eq));
    std::string value = trimmed(entry.substr(eq + 1));
    if (value.size() >= 2 &&
        ((value.front() == '"' && value.back() == '"') ||
         (value.front() == '\'' && value.back() == '\''))) {
      value = value.substr(1, value.size() - 2);
    }
    auto settable = [&](const char* flag) {
      const CLI::Option* option = cmd->get_option_no_throw(flag);
      return option != nullptr && option->count() == 0;
    };
    if (key == "manifest") {
      if (settable("--manifest")) opt.manifest = value;
    } else if (key == "registers") {
      if (settable("--registers")) opt.registers_text = value;
    } else if (key == "seed") {
      if (settable("--seed")) opt.seed = parseConfigU64(value, line_no, key);
    } else if (key == "samples") {
      if (settable("--samples")) {
        opt.samples = static_cast<int>(parseConfigInt(value, line_no, key));
      }
    } else if (key == "no-onomatopoeia") {
      if (settable("--no-onomatopoeia")) {
        opt.no_onomatopoeia = parseConfigBool(value, line_no, key);
      }
    } else if (key == "out") {
      if (settable("--out")) opt.out_dir = value;
    } else if (key == "no-cache") {
      if (settable("--no-cache")) {
        opt.no_cache = parseConfigBool(value, line_no, key);
      }
    } else if (key == "threads") {
      if (settable("--threads")) {
        opt.threads =
            static_cast<unsigned>(parseConfigU64(value, line_no, key));
      }
    } else if (key == "window-ms") {
      if (settable("--window-ms")) {
        opt.window_ms = parseConfigDouble(value, line_no, key);
      }
    } else if (key == "hop-ms") {
      if (settable("--hop-ms")) {
        opt.hop_ms = parseConfigDouble(value, line_no, key);
      }
    } else if (key == "fmin") {
      if (settable("--fmin")) opt.fmin = parseConfigDouble(value, line_no, key);
    } else if (key == "fmax") {
      if (settable("--fmax")) opt.fmax = parseConfigDouble(value, line_no, key);
    } else if (key == "nfilters") {
      if (settable("--nfilters")) {
        opt.nfilters = static_cast<int>(parseConfigInt(value, line_no, key));
      }
    } else {
      throw lexdisc::ConfigError("config file line " +
                                 std::to_string(line_no) + ": unknown key '" +
                                 key + "'");
    }
  }
}

std::vector<std::string> splitRegisters(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    std::string part = comma == std::string::npos
                           ? text.substr(start)
                           : text.substr(start, comma - start);
    if (!part.empty()) parts.push_back(part);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return parts;
}

lexdisc::RunConfig toRunConfig(const CliOptions& opt, bool paired_registers) {
  if (opt.manifest.empty()) {
    throw lexdisc::ConfigError(
        "--manifest is required (as a flag or a config file entry)");
  }
  if (opt.out_dir.empty()) {
    throw lexdisc::ConfigError(
        "--out is required (as a flag or a config file entry)");
  }
  lexdisc::RunConfig cfg;
  cfg.manifest_path = opt.manifest;
  if (paired_registers) {
    std::vector<std::string> regs = splitRegisters(opt.registers_text);
    if (regs.size() != 2) {
      throw lexdisc::ConfigError(
          "--registers needs exactly two comma-separated names, got '" +
          opt.registers_text + "'");
    }
    cfg.register_x = regs[0];
    cfg.register_y = regs[1];
  } else {
    cfg.register_filter = splitRegisters(opt.registers_text);
  }
  cfg.n_samples = opt.samples;
  cfg.seed = opt.seed;
  cfg.remove_onomatopoeia = opt.no_onomatopoeia;
  cfg.output_dir = opt.out_dir;
  cfg.use_cache = !opt.no_cache;
  cfg.threads = opt.threads;
  cfg.frontend.n_filters = opt.nfilters;
  cfg.frontend.f_min_hz = opt.fmin;
  cfg.frontend.f_max_hz = opt.fmax;
  cfg.frontend.window_s = opt.window_ms / 1000.0;
  cfg.frontend.hop_s = opt.hop_ms / 1000.0;
  return cfg;
}

int runGuarded(const std::function<void()>& body) {
  try {
    body();
    return 0;
  } catch (const lexdisc::ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const lexdisc::UsageError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const lexdisc::ManifestError& e) {
    std::fprintf(stderr, "manifest error: %s\n", e.what());
    return 3;
  } catch (const lexdisc::IngestionError& e) {
    std::fprintf(stderr, "audio error: %s\n", e.what());
    return 3;
  } catch (const lexdisc::InsufficientDataError& e) {
    std::fprintf(stderr, "insufficient data: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

void printReport(const lexdisc::ExperimentReport& report,
                 const std::string& out_dir) {
  if (!report.comparisons.empty()) {
    std::fputs(lexdisc::comparisonsSummaryText(report).c_str(), stdout);
  } else {
    for (const lexdisc::MetricReport& row : report.scores) {
      std::printf("%s %s %s=%.6g (n=%lld)\n", row.speaker_id.c_str(),
                  row.register_label.c_str(), row.metric.c_str(), row.value,
                  row.n);
    }
    for (const std::string& s : report.skipped) {
      std::printf("skipped %s\n", s.c_str());
    }
  }
  std::printf("reports written to %s\n", out_dir.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lexical discriminability and distinctness toolkit"};
  app.set_version_flag("--version", lexdisc::kVersionString);
  app.require_subcommand(1);

  CLI::App* summarize = app.add_subcommand(
      "summarize", "Per-register duration, type and token totals");
  CliOptions summarize_opt;
  summarize->add_option("--config", summarize_opt.config_path, kConfigHelp);
  summarize->add_option("--manifest", summarize_opt.manifest,
                        "Corpus manifest CSV");

  CliOptions exp1_opt, exp2_opt, exp3_opt, control_opt, abx_opt, ned_opt;
  exp1_opt.registers_text = "ADS,IDS";
  exp2_opt.registers_text = "ADS,IDS";
  exp3_opt.registers_text = "ADS,IDS";
  control_opt.registers_text = "ADS,RS";

  CLI::App* exp1 = app.add_subcommand(
      "exp1",
      "Compare ABX discriminability, category separation, and "
      "within-category variability between two registers over shared types");
  addCommonOptions(exp1, exp1_opt, true);

  CLI::App* exp2 = app.add_subcommand(
      "exp2",
      "Compare phonemic distinctness (mean normalized edit distance) over "
      "size-matched sub-lexicon samples");
  addCommonOptions(exp2, exp2_opt, true);

  CLI::App* exp3 = app.add_subcommand(
      "exp3",
      "Compare ABX discriminability over the same sub-lexicon samples as "
      "exp2");
  addCommonOptions(exp3, exp3_opt, true);

  CLI::App* control = app.add_subcommand(
      "control", "Run the exp1 analysis for a control register pair");
  addCommonOptions(control, control_opt, true);

  CLI::App* abx = app.add_subcommand(
      "abx", "Raw per-speaker, per-register ABX scores and pair detail");
  addCommonOptions(abx, abx_opt, false);

  CLI::App* ned = app.add_subcommand(
      "ned", "Raw per-speaker, per-register mean normalized edit distance");
  addCommonOptions(ned, ned_opt, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  using Runner = lexdisc::ExperimentReport (*)(const lexdisc::RunConfig&);
  auto run = [](const CLI::App* cmd, CliOptions& opt, bool paired,
                Runner runner) {
    return runGuarded([&] {
      applyConfigFile(cmd, opt);
      lexdisc::RunConfig cfg = toRunConfig(opt, paired);
      lexdisc::ExperimentReport report = runner(cfg);
      lexdisc::writeExperimentOutputs(cfg, report);
      printReport(report, cfg.output_dir);
    });
  };

  if (summarize->parsed()) {
    return runGuarded([&] {
      applyConfigFile(summarize, summarize_opt);
      if (summarize_opt.manifest.empty()) {
        throw lexdisc::ConfigError(
            "--manifest is required (as a flag or a config file entry)");
      }
      auto lexicons = lexdisc::loadManifest(summarize_opt.manifest);
      auto rows = lexdisc::summarizeCorpus(lexicons);
      std::fputs(lexdisc::registerSummaryTable(rows).c_str(), stdout);
    });
  }
  if (exp1->parsed()) return run(exp1, exp1_opt, true, &lexdisc::runExp1);
  if (exp2->parsed()) return run(exp2, exp2_opt, true, &lexdisc::runExp2);
  if (exp3->parsed()) return run(exp3, exp3_opt, true, &lexdisc::runExp3);
  if (control->parsed()) {
    return run(control, control_opt, true, &lexdisc::runControl);
  }
  if (abx->parsed()) return run(abx, abx_opt, false, &lexdisc::runRawAbx);
  if (ned->parsed()) return run(ned, ned_opt, false, &lexdisc::runRawNed);
  return 2;
}
