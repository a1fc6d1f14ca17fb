#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <variant>

#include "omlad/core.hpp"
#include "omlad/online_stats.hpp"
#include "omlad/thresholds.hpp"

namespace omlad {

inline constexpr std::int64_t kMaxGumbelN = 1'000'000;

/// Turns prediction errors into scores. Keeps running statistics of the
/// signed residuals (prediction - truth) and derives tau from them:
///   MeanSigma        tau = mean + c * std
///   GaussianQuantile tau = q_{1-alpha} * sigma_hat
///   GumbelQuantile   tau = (q'_{1-alpha} + b_n) * sigma_hat / a_n
/// where sigma_hat = sqrt(mean^2 + var) is the scale about zero.
class ErrorScorer {
 public:
  ErrorScorer() = default;
  ErrorScorer(ThresholdRule rule, StatsMode mode) : rule_(rule), stats_(mode) {}

  double threshold() const {
    return std::visit(
        [&](const auto& rule) -> double {
          using T = std::decay_t<decltype(rule)>;
          if constexpr (std::is_same_v<T, MeanSigma>) {
            return tau_mean_sigma(stats_.mean(), stats_.stddev(), rule.c);
          } else if constexpr (std::is_same_v<T, GaussianQuantile>) {
            return tau_gaussian(rule.alpha, sigma_about_zero());
          } else {
            return tau_gumbel(rule.alpha, sigma_about_zero(), gumbel_n(rule));
          }
        },
        rule_);
  }

  /// Scores a prediction against the current statistics. Does not learn.
  ScoredPoint evaluate(Tick t, double truth, double prediction) const {
    return make_scored_point(t, truth, prediction, threshold());
  }

  /// Records one scored point; folds its residual into the statistics when
  /// `learn` is set.
  void commit(const ScoredPoint& sp, bool learn) {
    ++scored_;
    if (learn) {
      stats_.update(sp.prediction - sp.truth);
    }
  }

  /// Folds a residual into the statistics without counting a scored point.
  void observe_residual(double residual) { stats_.update(residual); }

  double sigma_about_zero() const { return std::sqrt(stats_.second_moment()); }

  const ThresholdRule& rule() const noexcept { return rule_; }
  const RunningStats& stats() const noexcept { return stats_; }
  std::uint64_t scored() const noexcept { return scored_; }

  void restore(RunningStats stats, std::uint64_t scored) {
    stats_ = stats;
    scored_ = scored;
  }

 private:
  std::int64_t gumbel_n(const GumbelQuantile& rule) const {
    if (rule.n) {
      return *rule.n;
    }
    const auto so_far = static_cast<std::int64_t>(std::min<std::uint64_t>(scored_ + 1, kMaxGumbelN));
    return std::max<std::int64_t>(so_far, 2);
  }

  ThresholdRule rule_ = MeanSigma{3.0};
  RunningStats stats_{ExponentialDecay{0.01}};
  std::uint64_t scored_ = 0;
};

}  // namespace omlad
