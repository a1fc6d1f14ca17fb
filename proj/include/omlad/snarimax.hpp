#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "omlad/core.hpp"
#include "omlad/ring_buffer.hpp"

namespace omlad {

struct SnarimaxOrders {
  int p = 0;  // AR lags 1..p
  int q = 0;  // residual lags 1..q
  int P = 0;  // seasonal AR lags s, 2s, ..., Ps
  int Q = 0;  // seasonal residual lags s, ..., Qs
  int s = 1;
};

struct LearnResult {
  double prediction = 0.0;
  double residual = 0.0;
  bool weights_updated = false;  // false on NonFiniteUpdate or frozen learning
};

/// Linear one-step forecaster over lagged (already differenced) values and
/// lagged residuals, trained by online gradient descent on the squared error.
///
/// Weight layout: [AR 1..p | MA 1..q | SAR 1..P | SMA 1..Q | intercept].
/// Lags that are not yet available contribute 0.
class SnarimaxModel {
 public:
  SnarimaxModel() : SnarimaxModel(SnarimaxOrders{}, 0.0) {}

  SnarimaxModel(SnarimaxOrders orders, double learning_rate)
      : orders_(orders), learning_rate_(learning_rate) {
    if (orders.p < 0 || orders.q < 0 || orders.P < 0 || orders.Q < 0) {
      throw Error(ErrorCode::InvalidOrder, "model orders must be >= 0");
    }
    if (orders.s < 1 || ((orders.P > 0 || orders.Q > 0) && orders.s < 2)) {
      throw Error(ErrorCode::InvalidSeason, "seasonal lags require s >= 2");
    }
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
      throw Error(ErrorCode::InvalidRate, "learning rate must be finite and >= 0");
    }
    const auto s = static_cast<std::size_t>(orders.s);
    y_ = RingBuffer<double>(std::max(static_cast<std::size_t>(orders.p), static_cast<std::size_t>(orders.P) * s));
    e_ = RingBuffer<double>(std::max(static_cast<std::size_t>(orders.q), static_cast<std::size_t>(orders.Q) * s));
    weights_.assign(n_weights(), 0.0);
    scratch_.assign(n_weights(), 0.0);
  }

  std::size_t n_weights() const noexcept {
    return static_cast<std::size_t>(orders_.p + orders_.q + orders_.P + orders_.Q + 1);
  }

  void features_into(std::span<double> out) const {
    std::size_t i = 0;
    const auto s = static_cast<std::size_t>(orders_.s);
    for (int k = 1; k <= orders_.p; ++k) out[i++] = y_.lag_or(static_cast<std::size_t>(k), 0.0);
    for (int k = 1; k <= orders_.q; ++k) out[i++] = e_.lag_or(static_cast<std::size_t>(k), 0.0);
    for (int k = 1; k <= orders_.P; ++k) out[i++] = y_.lag_or(static_cast<std::size_t>(k) * s, 0.0);
    for (int k = 1; k <= orders_.Q; ++k) out[i++] = e_.lag_or(static_cast<std::size_t>(k) * s, 0.0);
    out[i] = 1.0;
  }

  std::vector<double> features() const {
    std::vector<double> f(n_weights());
    features_into(f);
    return f;
  }

  double predict() const {
    features_into(scratch_);
    return dot(scratch_);
  }

  double loss(double y) const {
    const double r = y - predict();
    return r * r;
  }

  /// Analytic gradient of (y - w.f)^2 with respect to w: -2 (y - w.f) f.
  std::vector<double> gradient(double y) const {
    std::vector<double> f = features();
    const double r = y - dot(f);
    for (double& v : f) v *= -2.0 * r;
    return f;
  }

  /// One OGD step followed by pushing y and its residual into the lag
  /// buffers. An update that would leave a non-finite weight is discarded;
  /// the buffers still advance.
  LearnResult learn(double y, bool update_weights = true) {
    require_finite(y, "model target");
    features_into(scratch_);
    LearnResult out;
    out.prediction = dot(scratch_);
    out.residual = y - out.prediction;

    if (update_weights && std::isfinite(out.residual)) {
      const double step = 2.0 * learning_rate_ * out.residual;
      bool finite = true;
      for (std::size_t i = 0; i < weights_.size(); ++i) {
        scratch_[i] = weights_[i] + step * scratch_[i];
        finite = finite && std::isfinite(scratch_[i]);
      }
      if (finite) {
        weights_.swap(scratch_);
        out.weights_updated = true;
      }
    }
    push(y, std::isfinite(out.residual) ? out.residual : 0.0);
    return out;
  }

  void push(double y, double residual) {
    y_.push(y);
    e_.push(residual);
  }

  std::span<const double> weights() const noexcept { return weights_; }

  void set_weights(std::vector<double> w) {
    if (w.size() != n_weights()) {
      throw Error(ErrorCode::LengthMismatch, "weight vector has the wrong length");
    }
    for (double v : w) require_finite(v, "weight");
    weights_ = std::move(w);
  }

  const SnarimaxOrders& orders() const noexcept { return orders_; }
  double learning_rate() const noexcept { return learning_rate_; }
  std::vector<double> value_history() const { return y_.to_vector(); }
  std::vector<double> residual_history() const { return e_.to_vector(); }
  std::size_t value_capacity() const noexcept { return y_.capacity(); }
  std::size_t residual_capacity() const noexcept { return e_.capacity(); }

  /// Replays captured buffers (oldest first).
  void restore_buffers(const std::vector<double>& values, const std::vector<double>& residuals) {
    if (values.size() > y_.capacity() || residuals.size() > e_.capacity()) {
      throw Error(ErrorCode::MalformedRecord, "lag buffer exceeds its capacity");
    }
    y_ = RingBuffer<double>(y_.capacity());
    e_ = RingBuffer<double>(e_.capacity());
    for (double v : values) {
      require_finite(v, "lag buffer");
      y_.push(v);
    }
    for (double v : residuals) {
      require_finite(v, "residual buffer");
      e_.push(v);
    }
  }

 private:
  double dot(std::span<const double> f) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) acc += weights_[i] * f[i];
    return acc;
  }

  SnarimaxOrders orders_;
  double learning_rate_;
  std::vector<double> weights_;
  RingBuffer<double> y_;
  RingBuffer<double> e_;
  mutable std::vector<double> scratch_;
};

}  // namespace omlad
