#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "omlad/error.hpp"

namespace omlad {

/// Lower bound applied to every standard deviation and threshold that ends
/// up in a denominator.
inline constexpr double kEpsilonFloor = 1e-9;

using Tick = std::int64_t;

struct Observation {
  Tick t = 0;
  double value = 0.0;
  std::optional<bool> label;  // true = ground-truth anomaly
};

struct ScoredPoint {
  Tick t = 0;
  double truth = 0.0;
  double prediction = 0.0;
  double error = 0.0;
  double threshold = kEpsilonFloor;
  double score = 0.0;

  bool flagged() const noexcept { return score >= 1.0; }
};

/// Builds the scored record. score = min(error / threshold, 1); because the
/// division is correctly rounded, score == 1 exactly when error >= threshold.
inline ScoredPoint make_scored_point(Tick t, double truth, double prediction, double threshold) {
  ScoredPoint sp;
  sp.t = t;
  sp.truth = truth;
  sp.prediction = prediction;
  sp.error = std::abs(prediction - truth);
  sp.threshold = threshold;
  sp.score = std::min(sp.error / threshold, 1.0);
  return sp;
}

// Threshold rules. Exactly one is active in a ThresholdRule.

struct MeanSigma {
  double c = 3.0;
};

struct GaussianQuantile {
  double alpha = 0.05;
};

struct GumbelQuantile {
  double alpha = 0.05;
  // Number of residuals the false-positive bound covers. Unset: the number of
  // points scored so far, clamped to [2, 1e6].
  std::optional<std::int64_t> n;
};

using ThresholdRule = std::variant<MeanSigma, GaussianQuantile, GumbelQuantile>;

// Update modes for RunningStats.

struct GlobalMoments {};

struct ExponentialDecay {
  double lambda = 0.01;
};

using StatsMode = std::variant<GlobalMoments, ExponentialDecay>;

struct DetectorConfig {
  int p = 2;
  int d = 1;
  int q = 2;
  int P = 2;
  int D = 0;
  int Q = 2;
  int s = 52;
  double learning_rate = 0.001;
  ThresholdRule threshold_rule = MeanSigma{3.0};
  std::int64_t warmup = 105;  // d + D*s + max lag for the defaults above
  bool learn_on_anomaly = true;
  StatsMode error_stats = ExponentialDecay{0.01};

  /// Observations consumed before the differencer produces its first value.
  std::int64_t differencing_span() const { return std::int64_t{d} + std::int64_t{D} * s; }

  std::int64_t max_lag() const {
    return std::max({std::int64_t{p}, std::int64_t{q}, std::int64_t{P} * s, std::int64_t{Q} * s});
  }

  /// differencing span plus the deepest lag, i.e. the point where every
  /// feature of the forecaster is populated.
  std::int64_t recommended_warmup() const { return differencing_span() + max_lag(); }
};

struct ConfigIssue {
  ErrorCode code;
  std::string field;
  std::string message;
};

/// Returns the first violated invariant, or nullopt when the configuration is
/// usable.
inline std::optional<ConfigIssue> validate_config(const DetectorConfig& cfg) {
  const std::pair<const char*, int> orders[] = {
      {"p", cfg.p}, {"d", cfg.d}, {"q", cfg.q}, {"P", cfg.P}, {"D", cfg.D}, {"Q", cfg.Q}};
  for (const auto& [name, value] : orders) {
    if (value < 0) {
      return ConfigIssue{ErrorCode::InvalidOrder, name, std::string("order ") + name + " must be >= 0"};
    }
  }
  if (cfg.s < 1) {
    return ConfigIssue{ErrorCode::InvalidSeason, "s", "season length must be >= 1"};
  }
  if ((cfg.P > 0 || cfg.D > 0 || cfg.Q > 0) && cfg.s < 2) {
    return ConfigIssue{ErrorCode::InvalidSeason, "s", "seasonal orders require season length >= 2"};
  }
  if (!(cfg.learning_rate > 0.0) || !std::isfinite(cfg.learning_rate)) {
    return ConfigIssue{ErrorCode::InvalidRate, "learning_rate", "learning rate must be finite and > 0"};
  }

  auto check_alpha = [](double alpha) { return alpha > 0.0 && alpha < 1.0; };
  std::optional<ConfigIssue> rule_issue = std::visit(
      [&](const auto& rule) -> std::optional<ConfigIssue> {
        using T = std::decay_t<decltype(rule)>;
        if constexpr (std::is_same_v<T, MeanSigma>) {
          if (!(rule.c > 0.0) || !std::isfinite(rule.c)) {
            return ConfigIssue{ErrorCode::InvalidThreshold, "c", "c must be finite and > 0"};
          }
        } else {
          if (!check_alpha(rule.alpha)) {
            return ConfigIssue{ErrorCode::AlphaOutOfRange, "alpha", "alpha must lie in (0, 1)"};
          }
          if constexpr (std::is_same_v<T, GumbelQuantile>) {
            if (rule.n && *rule.n < 2) {
              return ConfigIssue{ErrorCode::NTooSmall, "n", "Gumbel n must be >= 2"};
            }
          }
        }
        return std::nullopt;
      },
      cfg.threshold_rule);
  if (rule_issue) {
    return rule_issue;
  }

  if (cfg.warmup < cfg.differencing_span()) {
    return ConfigIssue{ErrorCode::InvalidWarmup, "warmup", "warmup must be >= d + D*s"};
  }
  if (const auto* decay = std::get_if<ExponentialDecay>(&cfg.error_stats)) {
    if (!(decay->lambda > 0.0 && decay->lambda < 1.0)) {
      return ConfigIssue{ErrorCode::InvalidStatsMode, "lambda", "decay lambda must lie in (0, 1)"};
    }
  }
  return std::nullopt;
}

inline void require_valid(const DetectorConfig& cfg) {
  if (auto issue = validate_config(cfg)) {
    throw Error(issue->code, issue->field + ": " + issue->message);
  }
}

inline void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw Error(ErrorCode::NonFiniteInput, std::string(what) + " is not finite");
  }
}

}  // namespace omlad
