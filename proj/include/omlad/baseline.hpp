#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "omlad/adwin.hpp"
#include "omlad/core.hpp"
#include "omlad/differencer.hpp"
#include "omlad/ring_buffer.hpp"

namespace omlad {

inline constexpr double kRidgeJitter = 1e-8;

/// y_t ~ intercept + sum_k lags[k-1] * y_{t-k}
struct ArCoefficients {
  double intercept = 0.0;
  std::vector<double> lags;

  double predict(const RingBuffer<double>& history) const {
    double y = intercept;
    for (std::size_t k = 1; k <= lags.size(); ++k) {
      y += lags[k - 1] * history.lag_or(k, 0.0);
    }
    return y;
  }
};

/// Least-squares AR(p) fit with intercept over `window` (oldest first).
///
/// Lag features and targets are centered so the intercept is unpenalized;
/// the centered normal equations carry a ridge jitter on the diagonal. A
/// constant window therefore yields intercept = value and zero lags.
inline ArCoefficients fit_ar(std::span<const double> window, int p) {
  if (p < 0) {
    throw Error(ErrorCode::InvalidOrder, "AR order must be >= 0");
  }
  const auto order = static_cast<std::size_t>(p);
  if (window.size() < order + 1) {
    throw Error(ErrorCode::InsufficientWindow, "window holds " + std::to_string(window.size()) +
                                                   " values, AR(" + std::to_string(p) + ") needs " +
                                                   std::to_string(order + 1));
  }
  const std::size_t rows = window.size() - order;
  Eigen::MatrixXd X(static_cast<Eigen::Index>(rows), p);
  Eigen::VectorXd y(static_cast<Eigen::Index>(rows));
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t t = r + order;
    y(static_cast<Eigen::Index>(r)) = window[t];
    for (std::size_t k = 1; k <= order; ++k) {
      X(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k - 1)) = window[t - k];
    }
  }
  const double y_mean = y.mean();
  ArCoefficients out;
  out.lags.assign(order, 0.0);
  if (order == 0) {
    out.intercept = y_mean;
    return out;
  }
  const Eigen::RowVectorXd x_mean = X.colwise().mean();
  const Eigen::MatrixXd Xc = X.rowwise() - x_mean;
  const Eigen::VectorXd yc = y.array() - y_mean;
  Eigen::MatrixXd gram = Xc.transpose() * Xc;
  gram.diagonal().array() += kRidgeJitter;
  const Eigen::VectorXd c = gram.ldlt().solve(Xc.transpose() * yc);
  out.intercept = y_mean - x_mean.dot(c);
  for (std::size_t k = 0; k < order; ++k) out.lags[k] = c(static_cast<Eigen::Index>(k));
  return out;
}

// Retraining policies.

struct RetrainNone {};

struct RetrainScheduled {
  std::int64_t period = 800;
};

struct RetrainDynamic {
  AdwinParams adwin;
};

using RetrainPolicy = std::variant<RetrainNone, RetrainScheduled, RetrainDynamic>;

struct BaselineConfig {
  int p = 4;
  int D = 1;
  int s = 52;
  std::size_t window = 800;
  std::int64_t warmup = 800;  // initial fit happens after this many observations
  RetrainPolicy policy = RetrainNone{};
};

/// Batch AR stand-in for a seasonal ARIMA fitted offline. Works on the
/// seasonally differenced series; predictions are mapped back to the raw
/// scale. Coefficients change only at fit events. Before the first fit the
/// coefficients are zero, i.e. a seasonal-naive forecast.
class WindowedArBaseline {
 public:
  explicit WindowedArBaseline(BaselineConfig cfg = {})
      : cfg_(cfg), differencer_(0, cfg.D, cfg.s), lags_(static_cast<std::size_t>(std::max(cfg.p, 0))) {
    if (cfg.p < 0) throw Error(ErrorCode::InvalidOrder, "baseline order must be >= 0");
    if (cfg.window < static_cast<std::size_t>(cfg.p) + 1) {
      throw Error(ErrorCode::InsufficientWindow, "baseline window shorter than p + 1");
    }
    if (cfg.warmup < 0) throw Error(ErrorCode::InvalidWarmup, "baseline warmup must be >= 0");
    if (const auto* sched = std::get_if<RetrainScheduled>(&cfg.policy); sched && sched->period < 1) {
      throw Error(ErrorCode::InvalidSpec, "retraining period must be >= 1");
    }
    if (const auto* dyn = std::get_if<RetrainDynamic>(&cfg.policy)) adwin_.emplace(dyn->adwin);
    coeffs_.lags.assign(static_cast<std::size_t>(cfg.p), 0.0);
  }

  /// One-step prediction for the next raw value.
  double predict() const {
    if (differencer_.ready()) return differencer_.invert(coeffs_.predict(lags_));
    return last_raw_.value_or(0.0);
  }

  /// Predicts x, then consumes it and runs the retraining policy.
  double step(double x) {
    require_finite(x, "baseline input");
    const double prediction = predict();
    ++seen_;
    last_raw_ = x;
    if (auto y = differencer_.apply(x)) {
      lags_.push(*y);
      window_.push_back(*y);
      if (window_.size() > cfg_.window) window_.pop_front();
    }

    const auto since_warmup = static_cast<std::int64_t>(seen_) - cfg_.warmup;
    if (since_warmup == 0) {
      refit(window_.size());
      return prediction;
    }
    if (since_warmup < 0) return prediction;

    if (const auto* sched = std::get_if<RetrainScheduled>(&cfg_.policy)) {
      if (since_warmup % sched->period == 0) {
        refit(window_.size());
        ++refits_;
      }
    } else if (adwin_) {
      const AdwinUpdate u = adwin_->update(std::abs(prediction - x));
      if (u.drift) {
        const auto min_rows = 4 * (static_cast<std::size_t>(cfg_.p) + 1);
        refit(std::max<std::size_t>(min_rows, u.width));
        ++refits_;
      }
    }
    return prediction;
  }

  /// Refits performed after the initial fit.
  std::uint64_t refits() const noexcept { return refits_; }
  bool fitted() const noexcept { return fitted_; }
  const ArCoefficients& coefficients() const noexcept { return coeffs_; }
  const BaselineConfig& config() const noexcept { return cfg_; }
  std::size_t window_size() const noexcept { return window_.size(); }

 private:
  // Fits on the newest `length` window values; keeps the old coefficients
  // when too few values are available.
  void refit(std::size_t length) {
    length = std::min(length, window_.size());
    if (length < static_cast<std::size_t>(cfg_.p) + 1) return;
    const std::vector<double> recent(window_.end() - static_cast<std::ptrdiff_t>(length), window_.end());
    coeffs_ = fit_ar(recent, cfg_.p);
    fitted_ = true;
  }

  BaselineConfig cfg_;
  Differencer differencer_;
  RingBuffer<double> lags_;
  std::deque<double> window_;
  std::optional<double> last_raw_;
  std::optional<Adwin> adwin_;
  ArCoefficients coeffs_;
  std::uint64_t seen_ = 0;
  std::uint64_t refits_ = 0;
  bool fitted_ = false;
};

}  // namespace omlad
