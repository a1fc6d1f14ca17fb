#pragma once

#include <cmath>
#include <cstdint>
#include <variant>

#include "omlad/core.hpp"

namespace omlad {

/// Single-pass first and second moments.
///
/// GlobalMoments runs Welford's recurrence and reports the population
/// variance of everything seen. ExponentialDecay weights recent inputs:
///   mean <- (1 - lambda) * mean + lambda * x
///   var  <- (1 - lambda) * (var + lambda * (x - mean_old)^2)
/// and is seeded with the first input.
class RunningStats {
 public:
  RunningStats() = default;
  explicit RunningStats(StatsMode mode) : mode_(mode) {}

  /// Rebuilds a previously captured state. `m2` is the sum of squared
  /// deviations in global mode and the weighted variance in decay mode.
  static RunningStats from_state(StatsMode mode, std::uint64_t count, double mean, double m2) {
    RunningStats st(mode);
    st.count_ = count;
    st.mean_ = mean;
    st.m2_ = m2;
    return st;
  }

  void update(double x) {
    require_finite(x, "statistics input");
    if (const auto* decay = std::get_if<ExponentialDecay>(&mode_)) {
      if (count_ == 0) {
        mean_ = x;
        m2_ = 0.0;
      } else {
        const double diff = x - mean_;
        const double incr = decay->lambda * diff;
        mean_ += incr;
        m2_ = (1.0 - decay->lambda) * (m2_ + diff * incr);
      }
      ++count_;
      return;
    }
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
  }

  std::uint64_t count() const noexcept { return count_; }
  double mean() const noexcept { return count_ == 0 ? 0.0 : mean_; }

  double variance() const noexcept {
    if (count_ == 0) {
      return 0.0;
    }
    const double v = std::holds_alternative<ExponentialDecay>(mode_) ? m2_ : m2_ / static_cast<double>(count_);
    return v > 0.0 ? v : 0.0;
  }

  double stddev() const noexcept { return std::sqrt(variance()); }

  /// Second moment about zero: variance + mean^2. This is the scale estimate
  /// for a quantity assumed to be zero-mean.
  double second_moment() const noexcept { return variance() + mean() * mean(); }

  const StatsMode& mode() const noexcept { return mode_; }
  double raw_m2() const noexcept { return m2_; }

 private:
  StatsMode mode_ = GlobalMoments{};
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Incremental standardization. Before the first update it is the identity;
/// afterwards x -> (x - mean) / max(std, kEpsilonFloor).
class OnlineScaler {
 public:
  OnlineScaler() = default;
  explicit OnlineScaler(RunningStats stats) : stats_(stats) {}

  double learn_transform(double x) {
    stats_.update(x);
    return transform(x);
  }

  double transform(double x) const noexcept {
    if (stats_.count() == 0) {
      return x;
    }
    return (x - stats_.mean()) / scale();
  }

  double inverse_transform(double z) const noexcept {
    if (stats_.count() == 0) {
      return z;
    }
    return stats_.mean() + z * scale();
  }

  double scale() const noexcept { return std::max(stats_.stddev(), kEpsilonFloor); }
  const RunningStats& stats() const noexcept { return stats_; }

 private:
  RunningStats stats_;
};

}  // namespace omlad
