#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <vector>

#include "omlad/core.hpp"

namespace omlad {

struct AdwinParams {
  double delta = 0.001;
  std::size_t max_buckets = 10;
  std::uint64_t grace_period = 10;
  std::size_t min_window_length = 10;
  std::uint64_t clock = 20;
};

struct AdwinUpdate {
  bool drift = false;
  std::uint64_t width = 0;
};

/// Adaptive windowing change detector (ADWIN2).
///
/// The window is an exponential histogram: row r holds up to max_buckets
/// buckets, each summarizing 2^r consecutive elements by their sum and their
/// sum of squared deviations. Every `clock` insertions (once `grace_period`
/// insertions have happened) each bucket boundary splits the window into an
/// older part W0 and a newer part W1, and the oldest bucket is dropped while
///   |mean(W0) - mean(W1)| >= sqrt(2/m * var_W * ln(2/delta')) + 2/(3m) * ln(2/delta')
/// holds for some split, with 1/m = 1/n0 + 1/n1 and delta' = delta / |W|.
class Adwin {
 public:
  Adwin() : Adwin(AdwinParams{}) {}

  explicit Adwin(AdwinParams params) : params_(params) {
    if (!(params.delta > 0.0 && params.delta < 1.0)) {
      throw Error(ErrorCode::InvalidSpec, "ADWIN delta must lie in (0, 1)");
    }
    if (params.max_buckets < 2 || params.clock < 1) {
      throw Error(ErrorCode::InvalidSpec, "ADWIN needs max_buckets >= 2 and clock >= 1");
    }
  }

  AdwinUpdate update(double x) {
    require_finite(x, "ADWIN input");
    ++ticks_;
    insert(x);
    compress();
    AdwinUpdate out;
    if (ticks_ % params_.clock == 0 && ticks_ >= params_.grace_period) {
      out.drift = detect();
    }
    if (out.drift) ++detections_;
    out.width = width_;
    return out;
  }

  std::uint64_t width() const noexcept { return width_; }
  double mean() const noexcept { return width_ == 0 ? 0.0 : total_ / static_cast<double>(width_); }
  double variance() const noexcept { return width_ == 0 ? 0.0 : std::max(m2_, 0.0) / static_cast<double>(width_); }
  std::uint64_t detections() const noexcept { return detections_; }
  std::size_t rows() const noexcept { return rows_.size(); }
  std::size_t bucket_count() const noexcept {
    std::size_t n = 0;
    for (const auto& row : rows_) n += row.size();
    return n;
  }
  /// Capacity of the largest (oldest) bucket currently held.
  std::uint64_t largest_bucket() const noexcept { return rows_.empty() ? 0 : capacity(rows_.size() - 1); }
  const AdwinParams& params() const noexcept { return params_; }

 private:
  struct Bucket {
    double sum = 0.0;
    double m2 = 0.0;  // sum of squared deviations from the bucket mean
  };

  static std::uint64_t capacity(std::size_t row) { return std::uint64_t{1} << row; }

  void insert(double x) {
    if (rows_.empty()) rows_.emplace_back();
    rows_[0].push_back(Bucket{x, 0.0});
    if (width_ > 0) {
      const double mean_before = total_ / static_cast<double>(width_);
      const double n = static_cast<double>(width_);
      m2_ += n * (x - mean_before) * (x - mean_before) / (n + 1.0);
    }
    ++width_;
    total_ += x;
  }

  // Rows are newest at the back; overflowing rows merge their two oldest
  // buckets into the next row.
  void compress() {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (rows_[r].size() <= params_.max_buckets) break;
      const Bucket a = rows_[r][0];
      const Bucket b = rows_[r][1];
      rows_[r].pop_front();
      rows_[r].pop_front();
      const double n = static_cast<double>(capacity(r));
      const double diff = a.sum / n - b.sum / n;
      const Bucket merged{a.sum + b.sum, a.m2 + b.m2 + n * n * diff * diff / (2.0 * n)};
      if (r + 1 == rows_.size()) rows_.emplace_back();
      rows_[r + 1].push_back(merged);
    }
  }

  bool cut(double n0, double n1, double mean0, double mean1) const {
    const double w = static_cast<double>(width_);
    const double log_term = std::log(2.0 * w / params_.delta);
    const double inv_m = 1.0 / n0 + 1.0 / n1;
    const double var_w = variance();
    const double eps = std::sqrt(2.0 * inv_m * var_w * log_term) + (2.0 / 3.0) * inv_m * log_term;
    return std::abs(mean0 - mean1) >= eps;
  }

  bool detect() {
    bool drift = false;
    bool shrinking = true;
    while (shrinking && width_ > 0) {
      shrinking = false;
      double n0 = 0.0;
      double sum0 = 0.0;
      double n1 = static_cast<double>(width_);
      double sum1 = total_;
      // Oldest first: highest row, front of the deque. The final (newest)
      // bucket is never moved into W0.
      for (std::size_t r = rows_.size(); r-- > 0 && !shrinking;) {
        const auto& row = rows_[r];
        for (std::size_t k = 0; k < row.size(); ++k) {
          if (r == 0 && k + 1 == row.size()) break;
          const double cap = static_cast<double>(capacity(r));
          n0 += cap;
          n1 -= cap;
          sum0 += row[k].sum;
          sum1 -= row[k].sum;
          const auto min_len = static_cast<double>(params_.min_window_length);
          if (n0 >= min_len && n1 >= min_len && cut(n0, n1, sum0 / n0, sum1 / n1)) {
            drift = true;
            shrinking = true;
            drop_oldest();
            break;
          }
        }
      }
    }
    return drift;
  }

  void drop_oldest() {
    const std::size_t r = rows_.size() - 1;
    const Bucket b = rows_[r].front();
    const double nb = static_cast<double>(capacity(r));
    rows_[r].pop_front();
    width_ -= capacity(r);
    total_ -= b.sum;
    if (width_ == 0) {
      m2_ = 0.0;
    } else {
      const double n_rest = static_cast<double>(width_);
      const double diff = b.sum / nb - total_ / n_rest;
      m2_ -= b.m2 + nb * n_rest * diff * diff / (nb + n_rest);
      if (m2_ < 0.0) m2_ = 0.0;
    }
    while (!rows_.empty() && rows_.back().empty()) rows_.pop_back();
  }

  AdwinParams params_;
  std::vector<std::deque<Bucket>> rows_;
  std::uint64_t ticks_ = 0;
  std::uint64_t width_ = 0;
  std::uint64_t detections_ = 0;
  double total_ = 0.0;
  double m2_ = 0.0;
};

}  // namespace omlad
