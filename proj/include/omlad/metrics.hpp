#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "omlad/core.hpp"

namespace omlad {

struct ErrorSummary {
  double mae = 0.0;
  double mse = 0.0;
};

inline ErrorSummary mae_mse(std::span<const double> preds, std::span<const double> truths) {
  if (preds.size() != truths.size()) {
    throw Error(ErrorCode::LengthMismatch, "predictions and truths differ in length");
  }
  if (preds.empty()) {
    throw Error(ErrorCode::Empty, "no points to evaluate");
  }
  double abs_sum = 0.0;
  double sq_sum = 0.0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const double e = preds[i] - truths[i];
    abs_sum += std::abs(e);
    sq_sum += e * e;
  }
  const auto n = static_cast<double>(preds.size());
  return {abs_sum / n, sq_sum / n};
}

struct F1Result {
  double f1 = 0.0;
  double threshold = 0.0;
};

namespace detail {

// Indices sorted by descending score; ties keep index order.
inline std::vector<std::size_t> order_by_score_desc(std::span<const double> scores) {
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return idx;
}

// 2PR / (P + R) = 2tp / (2tp + fp + fn). One division of exact integers, so
// equal ratios compare equal and ties break on the threshold alone.
inline double f1_from_counts(double tp, double fp, double fn) {
  if (tp == 0.0) return 0.0;
  return 2.0 * tp / (2.0 * tp + fp + fn);
}

}  // namespace detail

/// Best F1 over every candidate threshold in the score set, predicting
/// positive iff score >= threshold. Ties in F1 resolve to the smallest
/// threshold.
inline F1Result f1_sweep(std::span<const double> scores, const std::vector<bool>& labels) {
  if (scores.size() != labels.size()) {
    throw Error(ErrorCode::LengthMismatch, "scores and labels differ in length");
  }
  const auto positives = static_cast<double>(std::count(labels.begin(), labels.end(), true));
  if (positives == 0.0) {
    throw Error(ErrorCode::NoPositives, "F1 needs at least one positive label");
  }
  const auto order = detail::order_by_score_desc(scores);
  F1Result best{-1.0, 0.0};
  double tp = 0.0;
  double fp = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    const double threshold = scores[order[i]];
    for (; i < order.size() && scores[order[i]] == threshold; ++i) {
      (labels[order[i]] ? tp : fp) += 1.0;
    }
    const double f1 = detail::f1_from_counts(tp, fp, positives - tp);
    // Thresholds descend, so >= moves to the smaller threshold on ties.
    if (f1 >= best.f1) best = {f1, threshold};
  }
  return best;
}

/// Area under the ROC curve as the Mann-Whitney statistic
/// P(score_pos > score_neg) + P(tie) / 2, via average ranks.
inline double auc_roc(std::span<const double> scores, const std::vector<bool>& labels) {
  if (scores.size() != labels.size()) {
    throw Error(ErrorCode::LengthMismatch, "scores and labels differ in length");
  }
  const auto n_pos = static_cast<std::uint64_t>(std::count(labels.begin(), labels.end(), true));
  const std::uint64_t n_neg = labels.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    throw Error(ErrorCode::DegenerateLabels, "AUC needs both positive and negative labels");
  }
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Ranks are 1-based; a tie group spanning ranks [lo, hi] gets (lo + hi) / 2.
  // Twice the rank sum stays integral, so the statistic is computed exactly
  // up to the final division.
  std::uint64_t twice_rank_sum = 0;
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    std::uint64_t pos_in_group = 0;
    while (j < idx.size() && scores[idx[j]] == scores[idx[i]]) {
      if (labels[idx[j]]) ++pos_in_group;
      ++j;
    }
    twice_rank_sum += pos_in_group * (static_cast<std::uint64_t>(i + 1) + static_cast<std::uint64_t>(j));
    i = j;
  }
  const std::uint64_t twice_u = twice_rank_sum - n_pos * (n_pos + 1);
  return static_cast<double>(twice_u) / (2.0 * static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

}  // namespace omlad
