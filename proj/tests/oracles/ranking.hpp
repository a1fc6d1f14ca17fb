#pragma once

// Brute-force classification metrics.

#include <algorithm>
#include <cmath>
#include <vector>

namespace oracle {

struct Counts {
  long tp = 0, fp = 0, fn = 0;
};

inline Counts counts_at(const std::vector<double>& scores, const std::vector<bool>& labels, double threshold) {
  Counts c;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool predicted = scores[i] >= threshold;
    if (predicted && labels[i]) ++c.tp;
    if (predicted && !labels[i]) ++c.fp;
    if (!predicted && labels[i]) ++c.fn;
  }
  return c;
}

inline double f1_at(const std::vector<double>& scores, const std::vector<bool>& labels, double threshold) {
  const Counts c = counts_at(scores, labels, threshold);
  const double p = c.tp + c.fp > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp) : 0.0;
  const double r = c.tp + c.fn > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn) : 0.0;
  return p + r > 0 ? 2 * p * r / (p + r) : 0.0;
}

// F1 = 2tp / (2tp + fp + fn); compares two counts exactly.
inline int compare_f1(const Counts& a, const Counts& b) {
  const long lhs = 2 * a.tp * (2 * b.tp + b.fp + b.fn);
  const long rhs = 2 * b.tp * (2 * a.tp + a.fp + a.fn);
  return lhs < rhs ? -1 : lhs > rhs ? 1 : 0;
}

struct BestF1 {
  double f1 = -1.0;
  double threshold = 0.0;
};

// Best F1 over thresholds {scores} U {0, 1 + eps}; the reported threshold is
// the smallest score value reaching it (0 and 1 + eps never beat every score).
inline BestF1 best_f1(const std::vector<double>& scores, const std::vector<bool>& labels) {
  std::vector<double> candidates = scores;
  candidates.push_back(0.0);
  candidates.push_back(1.0 + 1e-9);
  Counts top = counts_at(scores, labels, candidates.front());
  for (double t : candidates) {
    const Counts c = counts_at(scores, labels, t);
    if (compare_f1(c, top) > 0) top = c;
  }
  BestF1 best;
  best.f1 = 0.0;
  best.threshold = 2.0;
  for (double t : scores) {
    if (compare_f1(counts_at(scores, labels, t), top) == 0 && t < best.threshold) {
      best.threshold = t;
      best.f1 = f1_at(scores, labels, t);
    }
  }
  return best;
}

// P(s_pos > s_neg) + P(tie) / 2 over all positive/negative pairs.
inline double pairwise_auc(const std::vector<double>& scores, const std::vector<bool>& labels) {
  double wins = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!labels[i]) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j]) continue;
      pairs += 1.0;
      if (scores[i] > scores[j]) wins += 1.0;
      else if (scores[i] == scores[j]) wins += 0.5;
    }
  }
  return wins / pairs;
}

}  // namespace oracle
