#include "lexdisc/paired_stats.h"

#include <cmath>
#include <limits>

#include "lexdisc/errors.h"

namespace lexdisc {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void checkPaired(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw UsageError("paired statistics: unequal sample sizes");
  }
  if (xs.size() < 2) {
    throw InsufficientDataError("paired statistics: need at least two pairs");
  }
}

double mean(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

/// Sample standard deviation (n - 1 denominator).
double sampleSd(std::span<const double> v) {
  double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

std::vector<double> differences(std::span<const double> xs,
                                std::span<const double> ys) {
  std::vector<double> d(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) d[i] = ys[i] - xs[i];
  return d;
}

/// Continued fraction for the incomplete beta (modified Lentz).
double betaContinuedFraction(double a, double b, double x) {
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  constexpr int kMaxIterations = 500;

  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) return h;
  }
  throw Error("incomplete beta: continued fraction did not converge");
}

}  // namespace

double regularizedIncompleteBeta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw UsageError("regularizedIncompleteBeta: a and b must be positive");
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    throw UsageError("regularizedIncompleteBeta: x must lie in [0, 1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                    a * std::log(x) + b * std::log1p(-x);
  double front = std::exp(ln_front);
  // The continued fraction converges fast for x below the distribution
  // bulk; mirror through the symmetry I_x(a,b) = 1 - I_{1-x}(b,a) above.
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * betaContinuedFraction(a, b, x) / a;
  }
  return 1.0 - front * betaContinuedFraction(b, a, 1.0 - x) / b;
}

double studentTwoSidedP(double t, int df) {
  if (df < 1) throw UsageError("studentTwoSidedP: df must be positive");
  if (t == 0.0) return 1.0;
  double v = static_cast<double>(df);
  return regularizedIncompleteBeta(v / 2.0, 0.5, v / (v + t * t));
}

TTest pairedT(std::span<const double> xs, std::span<const double> ys) {
  checkPaired(xs, ys);
  std::vector<double> d = differences(xs, ys);
  double sd = sampleSd(d);
  if (sd == 0.0) {
    throw DegenerateDataError(
        "pairedT: differences have zero variance; t is undefined");
  }
  TTest result;
  auto n = static_cast<double>(d.size());
  result.t = mean(d) / (sd / std::sqrt(n));
  result.df = static_cast<int>(d.size()) - 1;
  result.p = studentTwoSidedP(result.t, result.df);
  return result;
}

double cohensDz(std::span<const double> xs, std::span<const double> ys) {
  checkPaired(xs, ys);
  std::vector<double> d = differences(xs, ys);
  double sd = sampleSd(d);
  if (sd == 0.0) {
    throw DegenerateDataError("cohensDz: differences have zero variance");
  }
  return mean(d) / sd;
}

double cohensDav(std::span<const double> xs, std::span<const double> ys) {
  checkPaired(xs, ys);
  double pooled = (sampleSd(xs) + sampleSd(ys)) / 2.0;
  if (pooled == 0.0) {
    throw DegenerateDataError("cohensDav: both conditions have zero variance");
  }
  return (mean(ys) - mean(xs)) / pooled;
}

double relativeEffect(double mean_x, double mean_y) {
  if (mean_x == 0.0) {
    throw DegenerateDataError("relativeEffect: zero baseline mean");
  }
  return 100.0 * (mean_y - mean_x) / mean_x;
}

PairedComparison comparePaired(std::string metric, std::string register_x,
                               std::string register_y,
                               std::vector<PairedSpeakerScore> scores,
                               std::optional<uint64_t> seed) {
  if (scores.size() < 2) {
    throw InsufficientDataError("comparePaired: need at least two speakers, got " +
                                std::to_string(scores.size()));
  }
  PairedComparison cmp;
  cmp.metric = std::move(metric);
  cmp.register_x = std::move(register_x);
  cmp.register_y = std::move(register_y);
  cmp.seed = seed;
  cmp.n = static_cast<int>(scores.size());
  cmp.df = cmp.n - 1;

  std::vector<double> xs, ys;
  xs.reserve(scores.size());
  ys.reserve(scores.size());
  for (const PairedSpeakerScore& s : scores) {
    xs.push_back(s.x);
    ys.push_back(s.y);
  }
  cmp.per_speaker = std::move(scores);
  cmp.mean_x = mean(xs);
  cmp.mean_y = mean(ys);

  try {
    TTest test = pairedT(xs, ys);
    cmp.t = test.t;
    cmp.df = test.df;
    cmp.p = test.p;
    cmp.d_z = cohensDz(xs, ys);
  } catch (const DegenerateDataError&) {
    cmp.degenerate = true;
    cmp.t = kNan;
    cmp.p = kNan;
    cmp.d_z = kNan;
  }
  try {
    cmp.d_av = cohensDav(xs, ys);
  } catch (const DegenerateDataError&) {
    cmp.degenerate = true;
    cmp.d_av = kNan;
  }
  try {
    cmp.relative_pct = relativeEffect(cmp.mean_x, cmp.mean_y);
  } catch (const DegenerateDataError&) {
    cmp.degenerate = true;
    cmp.relative_pct = kNan;
  }
  return cmp;
}

}  // namespace lexdisc
