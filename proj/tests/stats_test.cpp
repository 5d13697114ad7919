#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "lexdisc/errors.h"
#include "lexdisc/paired_stats.h"
#include "support/oracles.h"

namespace lexdisc {
namespace {

using testing::oracleStudentTwoSidedP;

TEST(PairedT, AlternatingDifferencesGiveZeroT) {
  std::vector<double> xs = {0.0, 0.0, 0.0, 0.0};
  std::vector<double> ys = {1.0, -1.0, 1.0, -1.0};
  TTest r = pairedT(xs, ys);
  EXPECT_EQ(r.t, 0.0);
  EXPECT_EQ(r.df, 3);
  EXPECT_EQ(r.p, 1.0);
}

TEST(PairedT, HandComputedStatistic) {
  std::vector<double> xs = {0.0, 0.0, 0.0, 0.0, 0.0};
  std::vector<double> ys = {1.0, 2.0, 3.0, 4.0, 5.0};
  TTest r = pairedT(xs, ys);
  // mean 3, sd sqrt(2.5), se sqrt(0.5): t = 3 * sqrt(2).
  EXPECT_NEAR(r.t, 3.0 * std::sqrt(2.0), 1e-12);
  EXPECT_EQ(r.df, 4);
  EXPECT_NEAR(r.p, oracleStudentTwoSidedP(r.t, 4.0), 1e-10);
}

TEST(PairedT, InputValidation) {
  std::vector<double> xs = {1.0, 2.0};
  EXPECT_THROW(pairedT(xs, std::vector<double>{1.0}), UsageError);
  EXPECT_THROW(pairedT(std::vector<double>{1.0}, std::vector<double>{2.0}),
               InsufficientDataError);
  // Constant differences: zero variance.
  EXPECT_THROW(pairedT(xs, std::vector<double>{3.0, 4.0}),
               DegenerateDataError);
}

TEST(PairedT, AntisymmetricUnderArgumentSwap) {
  std::vector<double> xs = {3.0, 1.0, 7.0, 2.0, 9.0, 4.0};
  std::vector<double> ys = {5.0, 2.0, 6.0, 8.0, 1.0, 12.0};
  TTest fwd = pairedT(xs, ys);
  TTest rev = pairedT(ys, xs);
  EXPECT_EQ(fwd.t, -rev.t);
  EXPECT_EQ(fwd.p, rev.p);
  EXPECT_EQ(fwd.df, rev.df);
}

TEST(PairedT, ExactlyInvariantToDyadicShiftAndScale) {
  // Integer data, power-of-two scale and representable shift keep every
  // intermediate exactly representable, so t and p must not move at all.
  std::vector<double> xs = {3.0, 1.0, 7.0, 2.0, 9.0, 4.0};
  std::vector<double> ys = {5.0, 2.0, 6.0, 8.0, 1.0, 12.0};
  TTest base = pairedT(xs, ys);

  std::vector<double> xs_shift = xs, ys_shift = ys;
  for (auto& v : xs_shift) v += 8.0;
  for (auto& v : ys_shift) v += 8.0;
  TTest shifted = pairedT(xs_shift, ys_shift);
  EXPECT_EQ(shifted.t, base.t);
  EXPECT_EQ(shifted.p, base.p);

  std::vector<double> xs_scale = xs, ys_scale = ys;
  for (auto& v : xs_scale) v *= 4.0;
  for (auto& v : ys_scale) v *= 4.0;
  TTest scaled = pairedT(xs_scale, ys_scale);
  EXPECT_EQ(scaled.t, base.t);
  EXPECT_EQ(scaled.p, base.p);
  EXPECT_EQ(cohensDz(xs_scale, ys_scale), cohensDz(xs, ys));
}

TEST(StudentP, MatchesDensityIntegrationOracle) {
  const struct {
    double t;
    int df;
  } cases[] = {{2.0, 5}, {-4.73, 21}, {8.74, 19}, {0.5, 2}, {1.2, 1},
               {12.0, 30}, {0.05, 9}};
  for (const auto& c : cases) {
    double expected = oracleStudentTwoSidedP(c.t, c.df);
    EXPECT_NEAR(studentTwoSidedP(c.t, c.df), expected, 1e-10)
        << "t=" << c.t << " df=" << c.df;
  }
  EXPECT_EQ(studentTwoSidedP(0.0, 7), 1.0);
  EXPECT_THROW(studentTwoSidedP(1.0, 0), UsageError);
}

TEST(StudentP, ExtremeStatisticsStayInRange) {
  for (double t : {1e-8, 1e3, 1e6}) {
    for (int df : {1, 4, 50}) {
      double p = studentTwoSidedP(t, df);
      EXPECT_GE(p, 0.0);
      EXPECT_LE(p, 1.0);
    }
  }
  EXPECT_LT(studentTwoSidedP(1e6, 10), 1e-20);
  EXPECT_GT(studentTwoSidedP(1e-8, 10), 1.0 - 1e-6);
}

TEST(IncompleteBeta, EdgeAndReflectionIdentities) {
  EXPECT_EQ(regularizedIncompleteBeta(2.0, 3.0, 0.0), 0.0);
  EXPECT_EQ(regularizedIncompleteBeta(2.0, 3.0, 1.0), 1.0);
  EXPECT_THROW(regularizedIncompleteBeta(2.0, 3.0, -0.1), UsageError);
  EXPECT_THROW(regularizedIncompleteBeta(0.0, 3.0, 0.5), UsageError);

  for (double x : {0.05, 0.3, 0.5, 0.77, 0.99}) {
    double forward = regularizedIncompleteBeta(2.5, 0.5, x);
    double reflected = regularizedIncompleteBeta(0.5, 2.5, 1.0 - x);
    EXPECT_NEAR(forward + reflected, 1.0, 1e-13) << x;
  }

  // I_x(1, 1) is the identity map.
  for (double x : {0.1, 0.5, 0.9}) {
    EXPECT_NEAR(regularizedIncompleteBeta(1.0, 1.0, x), x, 1e-14);
  }

  EXPECT_LT(regularizedIncompleteBeta(2.0, 3.0, 0.2),
            regularizedIncompleteBeta(2.0, 3.0, 0.3));
}

TEST(EffectSizes, DzEqualsTOverSqrtN) {
  std::vector<double> xs = {3.0, 1.0, 7.0, 2.0, 9.0};
  std::vector<double> ys = {5.0, 2.0, 6.0, 8.0, 1.0};
  TTest r = pairedT(xs, ys);
  EXPECT_NEAR(cohensDz(xs, ys), r.t / std::sqrt(5.0), 1e-12);
}

TEST(EffectSizes, DavUsesMeanOfConditionSds) {
  std::vector<double> xs = {1.0, 2.0, 3.0};   // sd 1
  std::vector<double> ys = {2.0, 5.0, 8.0};   // sd 3, mean diff 3
  EXPECT_NEAR(cohensDav(xs, ys), 3.0 / 2.0, 1e-12);
  // Both conditions constant: nothing to normalize by.
  EXPECT_THROW(cohensDav(std::vector<double>{1.0, 1.0},
                         std::vector<double>{2.0, 2.0}),
               DegenerateDataError);
}

TEST(EffectSizes, RelativePercentChange) {
  EXPECT_NEAR(relativeEffect(0.84, 0.80), 100.0 * (0.80 - 0.84) / 0.84, 1e-12);
  EXPECT_NEAR(relativeEffect(0.84, 0.80), -4.761904761904762, 1e-9);
  EXPECT_THROW(relativeEffect(0.0, 1.0), DegenerateDataError);
}

TEST(ComparePaired, AssemblesAllFields) {
  std::vector<PairedSpeakerScore> scores = {
      {"s1", 0.9, 0.8}, {"s2", 0.85, 0.7}, {"s3", 0.95, 0.82}};
  PairedComparison c = comparePaired("abx", "ADS", "IDS", scores, 42);
  EXPECT_EQ(c.metric, "abx");
  EXPECT_EQ(c.register_x, "ADS");
  EXPECT_EQ(c.register_y, "IDS");
  EXPECT_EQ(c.n, 3);
  EXPECT_EQ(c.df, 2);
  EXPECT_NEAR(c.mean_x, 0.9, 1e-12);
  EXPECT_NEAR(c.mean_y, (0.8 + 0.7 + 0.82) / 3.0, 1e-12);
  EXPECT_LT(c.t, 0.0);
  EXPECT_FALSE(c.degenerate);
  ASSERT_TRUE(c.seed.has_value());
  EXPECT_EQ(*c.seed, 42u);
  ASSERT_EQ(c.per_speaker.size(), 3u);
  EXPECT_EQ(c.per_speaker[0].speaker_id, "s1");

  EXPECT_THROW(
      comparePaired("abx", "ADS", "IDS", {{"s1", 1.0, 2.0}}, std::nullopt),
      InsufficientDataError);
}

TEST(ComparePaired, DegenerateDifferencesReportNansNotThrows) {
  // Dyadic values whose differences are all exactly 0.25.
  std::vector<PairedSpeakerScore> scores = {
      {"s1", 0.5, 0.75}, {"s2", 0.25, 0.5}, {"s3", 0.125, 0.375}};
  PairedComparison c = comparePaired("ned", "ADS", "IDS", scores);
  EXPECT_TRUE(c.degenerate);
  EXPECT_TRUE(std::isnan(c.t));
  EXPECT_TRUE(std::isnan(c.p));
  EXPECT_TRUE(std::isnan(c.d_z));
  EXPECT_NEAR(c.mean_y - c.mean_x, 0.25, 1e-12);
  EXPECT_FALSE(c.seed.has_value());

  // All scores identical in both registers: even the relative effect and
  // d_av are undefined, but means still come through.
  std::vector<PairedSpeakerScore> flat = {
      {"s1", 0.0, 0.0}, {"s2", 0.0, 0.0}};
  PairedComparison f = comparePaired("ned", "ADS", "IDS", flat);
  EXPECT_TRUE(f.degenerate);
  EXPECT_TRUE(std::isnan(f.relative_pct));
  EXPECT_EQ(f.mean_x, 0.0);
}

}  // namespace
}  // namespace lexdisc
