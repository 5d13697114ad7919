#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

// Paired per-speaker statistics. Each speaker contributes one value per
// register; the test and effect sizes live on the within-speaker
// differences y - x.

namespace lexdisc {

struct TTest {
  double t = 0.0;
  int df = 0;
  double p = 1.0;  // two-sided
};

/// Paired Student t-test of ys against xs (differences y - x, sample
/// standard deviation with n - 1). Needs n >= 2 paired values;
/// zero-variance differences raise DegenerateDataError.
TTest pairedT(std::span<const double> xs, std::span<const double> ys);

/// Two-sided p for a t statistic: the regularized incomplete beta
/// I_{df/(df+t^2)}(df/2, 1/2).
double studentTwoSidedP(double t, int df);

/// Regularized incomplete beta I_x(a, b) by continued fraction
/// (absolute accuracy near 1e-15 for moderate a, b).
double regularizedIncompleteBeta(double a, double b, double x);

/// Cohen's d for paired data: mean difference over the standard deviation
/// of the differences (equals t / sqrt(n)).
double cohensDz(std::span<const double> xs, std::span<const double> ys);

/// Variant normalizing by the mean of the two conditions' standard
/// deviations instead.
double cohensDav(std::span<const double> xs, std::span<const double> ys);

/// Percent change of y relative to x: 100 * (y - x) / x. A zero baseline
/// raises DegenerateDataError.
double relativeEffect(double mean_x, double mean_y);

struct PairedSpeakerScore {
  std::string speaker_id;
  double x = 0.0;
  double y = 0.0;
};

/// One metric's full register comparison. When the differences have zero
/// variance (or the baseline mean is zero for the relative effect) the
/// affected fields are NaN and degenerate is set; reports render them as
/// null rather than failing the run.
struct PairedComparison {
  std::string metric;
  std::string register_x;
  std::string register_y;
  std::vector<PairedSpeakerScore> per_speaker;
  int n = 0;
  double mean_x = 0.0;
  double mean_y = 0.0;
  double t = 0.0;
  int df = 0;
  double p = 1.0;
  double d_z = 0.0;
  double d_av = 0.0;
  double relative_pct = 0.0;
  bool degenerate = false;
  std::optional<uint64_t> seed;
};

/// Assembles a PairedComparison from per-speaker scores (at least two).
PairedComparison comparePaired(std::string metric, std::string register_x,
                               std::string register_y,
                               std::vector<PairedSpeakerScore> scores,
                               std::optional<uint64_t> seed = std::nullopt);

}  // namespace lexdisc
