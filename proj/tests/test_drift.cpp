#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "omlad/adwin.hpp"
#include "support.hpp"

using namespace omlad;

namespace {

// Steps after the change until the first detection, or `horizon` if none.
std::int64_t detection_delay(std::uint64_t seed, double before, double after, std::int64_t horizon) {
  std::mt19937_64 gen(seed);
  std::bernoulli_distribution pre(before), post(after);
  Adwin ad;
  for (int i = 0; i < 1000; ++i) ad.update(pre(gen) ? 1.0 : 0.0);
  for (std::int64_t k = 0; k < horizon; ++k) {
    if (ad.update(post(gen) ? 1.0 : 0.0).drift) return k + 1;
  }
  return horizon;
}

}  // namespace

TEST(Adwin, DefaultParameters) {
  const AdwinParams p;
  EXPECT_EQ(p.delta, 0.001);
  EXPECT_EQ(p.max_buckets, 10u);
  EXPECT_EQ(p.grace_period, 10u);
  EXPECT_EQ(p.min_window_length, 10u);
  EXPECT_EQ(p.clock, 20u);
}

TEST(Adwin, ConstantStreamNeverDrifts) {
  Adwin ad;
  for (int i = 0; i < 10000; ++i) ASSERT_FALSE(ad.update(0.5).drift) << i;
  EXPECT_EQ(ad.width(), 10000u);
  EXPECT_DOUBLE_EQ(ad.mean(), 0.5);
  EXPECT_EQ(ad.detections(), 0u);
}

TEST(Adwin, WidthCountsInsertions) {
  Adwin ad;
  for (int i = 0; i < 5; ++i) ad.update(static_cast<double>(i));
  EXPECT_EQ(ad.width(), 5u);
}

TEST(Adwin, MeanOfOnes) {
  Adwin ad;
  for (int i = 0; i < 3; ++i) ad.update(1.0);
  EXPECT_EQ(ad.mean(), 1.0);
  EXPECT_EQ(ad.variance(), 0.0);
}

TEST(Adwin, DriftShrinksWindow) {
  Adwin ad;
  for (int i = 0; i < 2000; ++i) ad.update(0.0);
  const auto before = ad.width();
  bool fired = false;
  for (int i = 0; i < 200 && !fired; ++i) {
    const auto up = ad.update(5.0);
    fired = up.drift;
    if (fired) { EXPECT_LT(up.width, before + i + 1); }
  }
  EXPECT_TRUE(fired);
  EXPECT_LT(ad.width(), before);
}

TEST(Adwin, RejectsNonFiniteAndBadParameters) {
  Adwin ad;
  EXPECT_OMLAD_ERROR(ad.update(std::nan("")), ErrorCode::NonFiniteInput);
  EXPECT_EQ(ad.width(), 0u);
  EXPECT_OMLAD_ERROR(Adwin(AdwinParams{0.0}), ErrorCode::InvalidSpec);
  EXPECT_OMLAD_ERROR(Adwin(AdwinParams{1.0}), ErrorCode::InvalidSpec);
  AdwinParams one_bucket;
  one_bucket.max_buckets = 1;
  EXPECT_OMLAD_ERROR(Adwin{one_bucket}, ErrorCode::InvalidSpec);
}

TEST(Adwin, NoDetectionBeforeGraceOrOffClock) {
  AdwinParams p;
  p.grace_period = 100;
  p.clock = 7;
  Adwin ad(p);
  for (int i = 1; i <= 300; ++i) {
    const auto up = ad.update(i <= 50 ? 0.0 : 100.0);
    if (up.drift) {
      EXPECT_GE(i, 100);
      EXPECT_EQ(i % 7, 0);
    }
  }
  EXPECT_GT(ad.detections(), 0u);
}

TEST(Adwin, HistogramStaysLogarithmic) {
  std::mt19937_64 gen(8);
  std::normal_distribution<double> nd;
  Adwin ad;
  for (int i = 0; i < 200000; ++i) {
    ad.update(nd(gen));
    const double w = static_cast<double>(ad.width());
    ASSERT_LE(static_cast<double>(ad.rows()), std::ceil(std::log2(w)) + 1.0) << i;
    ASSERT_LE(ad.bucket_count(), (ad.rows() + 1) * ad.params().max_buckets);
  }
}

TEST(Adwin, MeanMatchesRetainedElements) {
  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<double> xs;
  Adwin ad;
  for (int i = 0; i < 50000; ++i) {
    // A level shift every 10000 steps exercises the drop path.
    const double x = u(gen) + ((i / 10000) % 2 ? 4.0 : 0.0);
    xs.push_back(x);
    ad.update(x);
    if (i % 97 != 0) continue;
    const auto w = static_cast<std::size_t>(ad.width());
    ASSERT_LE(w, xs.size());
    long double sum = 0.0L;
    double lo = INFINITY, hi = -INFINITY;
    for (std::size_t k = xs.size() - w; k < xs.size(); ++k) {
      sum += xs[k];
      lo = std::min(lo, xs[k]);
      hi = std::max(hi, xs[k]);
    }
    const double exact = static_cast<double>(sum / w);
    const double bound = static_cast<double>(ad.largest_bucket()) / static_cast<double>(w) * (hi - lo);
    ASSERT_LE(std::abs(ad.mean() - exact), bound + 1e-9) << i;
  }
  EXPECT_GT(ad.detections(), 0u);
}

TEST(Adwin, WindowNeverShrinksBelowMinimum) {
  std::mt19937_64 gen(21);
  std::normal_distribution<double> nd;
  Adwin ad;
  int drifts = 0;
  for (int i = 0; i < 20000; ++i) {
    const double x = nd(gen) + 10.0 * ((i / 500) % 2);
    const auto up = ad.update(x);
    if (up.drift) {
      ++drifts;
      ASSERT_GE(up.width, ad.params().min_window_length);
    }
  }
  EXPECT_GT(drifts, 10);
}

TEST(Adwin, BernoulliStepIsDetectedQuickly) {
  int detected = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) detected += detection_delay(seed, 0.2, 0.8, 1000) <= 300;
  EXPECT_GE(detected, 95);
}

TEST(Adwin, FewFalseAlarmsOnGaussianNoise) {
  std::uint64_t alarms = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 gen(1000 + seed);
    std::normal_distribution<double> nd;
    Adwin ad;
    for (int i = 0; i < 100000; ++i) ad.update(nd(gen));
    alarms += ad.detections();
  }
  EXPECT_LE(alarms, 5u);
}

TEST(Adwin, LargerStepsAreDetectedNoSlower) {
  const double afters[] = {0.5, 0.65, 0.8};
  double prev = INFINITY;
  for (double after : afters) {
    double total = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) total += detection_delay(500 + seed, 0.2, after, 5000);
    const double mean = total / 100.0;
    EXPECT_LE(mean, prev) << after;
    prev = mean;
  }
}
