#pragma once

// Two-pass batch moments in long double.

#include <vector>

namespace oracle {

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // population
};

inline Moments two_pass(const std::vector<double>& xs) {
  if (xs.empty()) return {};
  long double sum = 0.0L;
  for (double x : xs) sum += x;
  const long double mean = sum / static_cast<long double>(xs.size());
  long double ss = 0.0L;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {static_cast<double>(mean), static_cast<double>(ss / static_cast<long double>(xs.size()))};
}

}  // namespace oracle
