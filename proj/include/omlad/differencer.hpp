#pragma once

#include <optional>
#include <vector>

#include "omlad/core.hpp"
#include "omlad/ring_buffer.hpp"

namespace omlad {

/// Applies (1 - B)^d (1 - B^s)^D to a stream and inverts one-step forecasts.
///
/// The operator is expanded once into integer lag coefficients
/// c_0 = 1, c_1, ..., c_span, so that
///   diff(x_t) = x_t + sum_{k=1}^{span} c_k x_{t-k}.
class Differencer {
 public:
  Differencer() : Differencer(0, 0, 1) {}

  Differencer(int d, int D, int s) : d_(d), D_(D), s_(s) {
    if (d < 0 || D < 0) {
      throw Error(ErrorCode::InvalidOrder, "differencing orders must be >= 0");
    }
    if (s < 1 || (D > 0 && s < 2)) {
      throw Error(ErrorCode::InvalidSeason, "seasonal differencing requires s >= 2");
    }
    coeffs_ = {1.0};
    for (int i = 0; i < d; ++i) {
      coeffs_ = multiply(coeffs_, 1);
    }
    for (int i = 0; i < D; ++i) {
      coeffs_ = multiply(coeffs_, static_cast<std::size_t>(s));
    }
    history_ = RingBuffer<double>(span());
  }

  std::size_t span() const noexcept { return coeffs_.size() - 1; }
  bool ready() const noexcept { return history_.size() == span(); }

  /// Differenced value of `x` given the current history, without consuming x.
  double difference_of(double x) const {
    if (!ready()) {
      throw Error(ErrorCode::NotWarm, "differencer history is not full");
    }
    return x + lagged_sum();
  }

  /// Consumes x. Returns nullopt while the history is still filling.
  std::optional<double> apply(double x) {
    require_finite(x, "differencer input");
    std::optional<double> out;
    if (ready()) {
      out = x + lagged_sum();
    }
    history_.push(x);
    return out;
  }

  /// Maps a forecast of the next differenced value back to the original
  /// scale, so that difference_of(invert(y)) reproduces y.
  double invert(double y_hat_diff) const {
    if (!ready()) {
      throw Error(ErrorCode::NotWarm, "differencer history is not full");
    }
    return y_hat_diff - lagged_sum();
  }

  int d() const noexcept { return d_; }
  int seasonal_d() const noexcept { return D_; }
  int season() const noexcept { return s_; }
  const std::vector<double>& coefficients() const noexcept { return coeffs_; }
  std::vector<double> history() const { return history_.to_vector(); }

  /// Replays a captured history (oldest first).
  void restore_history(const std::vector<double>& values) {
    if (values.size() > span()) {
      throw Error(ErrorCode::MalformedRecord, "differencer history longer than its span");
    }
    history_ = RingBuffer<double>(span());
    for (double v : values) {
      require_finite(v, "differencer history");
      history_.push(v);
    }
  }

 private:
  static std::vector<double> multiply(const std::vector<double>& poly, std::size_t lag) {
    std::vector<double> out(poly.size() + lag, 0.0);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      out[i] += poly[i];
      out[i + lag] -= poly[i];
    }
    return out;
  }

  double lagged_sum() const {
    double sum = 0.0;
    for (std::size_t k = 1; k < coeffs_.size(); ++k) {
      if (coeffs_[k] != 0.0) {
        sum += coeffs_[k] * history_.lag(k);
      }
    }
    return sum;
  }

  int d_;
  int D_;
  int s_;
  std::vector<double> coeffs_;
  RingBuffer<double> history_;
};

}  // namespace omlad
