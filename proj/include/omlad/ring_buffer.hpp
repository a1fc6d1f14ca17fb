#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace omlad {

/// Fixed-capacity history. Indexing is by lag: lag(1) is the most recent
/// element, lag(size()) the oldest retained one.
template <typename T>
class RingBuffer {
 public:
  RingBuffer() = default;
  explicit RingBuffer(std::size_t capacity) : data_(capacity) {}

  void push(const T& value) {
    if (data_.empty()) {
      return;
    }
    data_[head_] = value;
    head_ = (head_ + 1) % data_.size();
    if (size_ < data_.size()) {
      ++size_;
    }
  }

  /// Element `k` steps back, 1 <= k <= size().
  const T& lag(std::size_t k) const {
    assert(k >= 1 && k <= size_);
    return data_[(head_ + data_.size() - k) % data_.size()];
  }

  /// Lagged value or `fallback` when the history is not that deep yet.
  T lag_or(std::size_t k, T fallback) const { return (k >= 1 && k <= size_) ? lag(k) : fallback; }

  std::size_t size() const noexcept { return size_; }
  std::size_t capacity() const noexcept { return data_.size(); }
  bool full() const noexcept { return size_ == data_.size(); }
  bool empty() const noexcept { return size_ == 0; }

  /// Oldest to newest.
  std::vector<T> to_vector() const {
    std::vector<T> out;
    out.reserve(size_);
    for (std::size_t k = size_; k >= 1; --k) {
      out.push_back(lag(k));
    }
    return out;
  }

 private:
  std::vector<T> data_;
  std::size_t head_ = 0;
  std::size_t size_ = 0;
};

}  // namespace omlad
