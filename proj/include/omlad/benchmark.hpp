#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <future>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "omlad/baseline.hpp"
#include "omlad/config_io.hpp"
#include "omlad/dataio.hpp"
#include "omlad/detector.hpp"
#include "omlad/metrics.hpp"
#include "omlad/scoring.hpp"

namespace omlad {

enum class Contender { OmlAd, BaselineNone, BaselineScheduled, BaselineDynamic };

inline constexpr Contender kAllContenders[] = {Contender::OmlAd, Contender::BaselineNone,
                                               Contender::BaselineScheduled, Contender::BaselineDynamic};

inline std::string to_string(Contender c) {
  switch (c) {
    case Contender::OmlAd: return "oml-ad";
    case Contender::BaselineNone: return "baseline-none";
    case Contender::BaselineScheduled: return "baseline-scheduled";
    case Contender::BaselineDynamic: return "baseline-dynamic";
  }
  return "?";
}

inline Contender parse_contender(const std::string& name) {
  for (Contender c : kAllContenders) {
    if (to_string(c) == name) return c;
  }
  throw Error(ErrorCode::InvalidSpec, "unknown contender '" + name + "'");
}

struct BenchmarkOptions {
  DetectorConfig detector;
  // Lag order, differencing, window and retraining period/ADWIN parameters
  // of the baselines; warmup and policy are set per contender.
  BaselineConfig baseline;
  std::int64_t retrain_period = 800;
  AdwinParams adwin;
  // Points excluded from every contender's metrics; also the baselines'
  // initial fit point. Raised to the detector warmup if smaller.
  std::int64_t warmup = 800;
  int repeats = 100;
  bool parallel = false;
};

/// One contender's streamed output over the evaluation span.
struct ContenderRun {
  std::vector<double> predictions;
  std::vector<double> truths;
  std::vector<double> scores;
  std::vector<bool> labels;
  std::uint64_t refits = 0;
};

struct MetricsReport {
  std::string contender;
  double mae = 0.0;
  double mse = 0.0;
  std::optional<double> f1;  // unset when the evaluated span has no positives
  std::optional<double> best_f1_threshold;
  std::optional<double> auc_roc;  // unset unless both classes are present
  double mean_time_ms = 0.0;
  double std_time_ms = 0.0;
  std::int64_t n_points = 0;
  std::int64_t n_anomalies = 0;
  std::uint64_t refits = 0;
  int repeats = 0;
};

inline std::int64_t effective_warmup(const BenchmarkOptions& opt) {
  return std::max(opt.warmup, opt.detector.warmup);
}

/// Streams the series through one contender. Points before the evaluation
/// warmup are learned from but not recorded.
inline ContenderRun run_contender(Contender c, const LabeledSeries& series, const BenchmarkOptions& opt) {
  const std::int64_t warmup = effective_warmup(opt);
  ContenderRun run;
  const std::size_t n = series.size();
  const std::size_t kept = n > static_cast<std::size_t>(warmup) ? n - static_cast<std::size_t>(warmup) : 0;
  run.predictions.reserve(kept);
  run.truths.reserve(kept);
  run.scores.reserve(kept);
  run.labels.reserve(kept);
  auto record = [&](const Observation& o, double prediction, double score) {
    run.predictions.push_back(prediction);
    run.truths.push_back(o.value);
    run.scores.push_back(score);
    run.labels.push_back(o.label.value_or(false));
  };

  if (c == Contender::OmlAd) {
    PadDetector det(opt.detector);
    for (const auto& o : series.observations) {
      const auto sp = det.score_learn(o);
      if (sp && o.t >= warmup) record(o, sp->prediction, sp->score);
    }
    return run;
  }

  BaselineConfig bcfg = opt.baseline;
  bcfg.warmup = warmup;
  if (c == Contender::BaselineNone) bcfg.policy = RetrainNone{};
  if (c == Contender::BaselineScheduled) bcfg.policy = RetrainScheduled{opt.retrain_period};
  if (c == Contender::BaselineDynamic) bcfg.policy = RetrainDynamic{opt.adwin};
  WindowedArBaseline base(bcfg);
  ErrorScorer scorer(opt.detector.threshold_rule, opt.detector.error_stats);
  const auto season_span = static_cast<std::int64_t>(bcfg.D) * bcfg.s;
  std::int64_t i = 0;
  for (const auto& o : series.observations) {
    const double prediction = base.step(o.value);
    if (i >= warmup) {
      const ScoredPoint sp = scorer.evaluate(o.t, o.value, prediction);
      scorer.commit(sp, opt.detector.learn_on_anomaly || !sp.flagged());
      record(o, prediction, sp.score);
    } else if (i >= season_span) {
      scorer.observe_residual(prediction - o.value);
    }
    ++i;
  }
  run.refits = base.refits();
  return run;
}

inline MetricsReport summarize(Contender c, const ContenderRun& run) {
  MetricsReport r;
  r.contender = to_string(c);
  r.n_points = static_cast<std::int64_t>(run.truths.size());
  r.refits = run.refits;
  for (bool b : run.labels) r.n_anomalies += b ? 1 : 0;
  if (run.truths.empty()) return r;
  const ErrorSummary err = mae_mse(run.predictions, run.truths);
  r.mae = err.mae;
  r.mse = err.mse;
  if (r.n_anomalies > 0) {
    const F1Result f1 = f1_sweep(run.scores, run.labels);
    r.f1 = f1.f1;
    r.best_f1_threshold = f1.threshold;
    if (r.n_anomalies < r.n_points) r.auc_roc = auc_roc(run.scores, run.labels);
  }
  return r;
}

/// Metrics come from the first pass (every pass is identical); wall-clock
/// time per full pass is averaged over `repeats` passes.
inline MetricsReport benchmark_contender(Contender c, const LabeledSeries& series, const BenchmarkOptions& opt) {
  const int repeats = std::max(opt.repeats, 1);
  std::vector<double> times_ms;
  times_ms.reserve(static_cast<std::size_t>(repeats));
  ContenderRun first;
  for (int k = 0; k < repeats; ++k) {
    const auto start = std::chrono::steady_clock::now();
    ContenderRun run = run_contender(c, series, opt);
    const auto stop = std::chrono::steady_clock::now();
    times_ms.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
    if (k == 0) first = std::move(run);
  }
  MetricsReport r = summarize(c, first);
  r.repeats = repeats;
  double mean = 0.0;
  for (double t : times_ms) mean += t;
  mean /= static_cast<double>(times_ms.size());
  double var = 0.0;
  for (double t : times_ms) var += (t - mean) * (t - mean);
  r.mean_time_ms = mean;
  r.std_time_ms = std::sqrt(var / static_cast<double>(times_ms.size()));
  return r;
}

/// Reports come back in contender order regardless of scheduling.
inline std::vector<MetricsReport> run_benchmark(const LabeledSeries& series, const std::vector<Contender>& contenders,
                                                const BenchmarkOptions& opt) {
  if (contenders.empty()) throw Error(ErrorCode::InvalidSpec, "no contenders selected");
  require_valid(opt.detector);
  std::vector<MetricsReport> out;
  out.reserve(contenders.size());
  if (!opt.parallel) {
    for (Contender c : contenders) out.push_back(benchmark_contender(c, series, opt));
    return out;
  }
  std::vector<std::future<MetricsReport>> jobs;
  for (Contender c : contenders) {
    jobs.push_back(std::async(std::launch::async, [c, &series, &opt] { return benchmark_contender(c, series, opt); }));
  }
  for (auto& job : jobs) out.push_back(job.get());
  return out;
}

inline nlohmann::json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

/// Machine-readable report. Timing is excluded unless requested so that a
/// fixed seed yields byte-identical output.
inline nlohmann::json report_to_json(const std::vector<MetricsReport>& reports, const LabeledSeries& series,
                                     const BenchmarkOptions& opt, bool include_timing) {
  nlohmann::json j;
  j["format"] = "omlad.benchmark-report";
  j["version"] = 1;
  j["dataset"] = {{"name", series.meta.name},
                  {"source", series.meta.source},
                  {"n_points", series.size()},
                  {"n_anomalies", series.anomaly_count()}};
  j["config"] = {{"detector", config_to_json(opt.detector)},
                 {"baseline",
                  {{"p", opt.baseline.p},
                   {"D", opt.baseline.D},
                   {"s", opt.baseline.s},
                   {"window", opt.baseline.window},
                   {"retrain_period", opt.retrain_period},
                   {"adwin_delta", opt.adwin.delta}}},
                 {"warmup", effective_warmup(opt)},
                 {"repeats", std::max(opt.repeats, 1)}};
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json row = {{"contender", r.contender},
                          {"mae", r.mae},
                          {"mse", r.mse},
                          {"f1", optional_json(r.f1)},
                          {"best_f1_threshold", optional_json(r.best_f1_threshold)},
                          {"auc_roc", optional_json(r.auc_roc)},
                          {"n_points", r.n_points},
                          {"n_anomalies", r.n_anomalies},
                          {"refits", r.refits}};
    if (include_timing) {
      row["mean_time_ms"] = r.mean_time_ms;
      row["std_time_ms"] = r.std_time_ms;
    }
    rows.push_back(row);
  }
  j["results"] = rows;
  return j;
}

inline void print_table(std::ostream& out, const std::vector<MetricsReport>& reports) {
  auto cell = [](const std::optional<double>& v) {
    if (!v) return std::string("-");
    std::ostringstream s;
    s << std::fixed << std::setprecision(4) << *v;
    return s.str();
  };
  out << std::left << std::setw(20) << "contender" << std::right << std::setw(12) << "MAE" << std::setw(12) << "MSE"
      << std::setw(10) << "F1" << std::setw(10) << "AUC-ROC" << std::setw(14) << "mean ms" << std::setw(12)
      << "std ms" << '\n';
  for (const auto& r : reports) {
    out << std::left << std::setw(20) << r.contender << std::right << std::setw(12) << cell(r.mae) << std::setw(12)
        << cell(r.mse) << std::setw(10) << cell(r.f1) << std::setw(10) << cell(r.auc_roc) << std::setw(14)
        << cell(r.mean_time_ms) << std::setw(12) << cell(r.std_time_ms) << '\n';
  }
}

}  // namespace omlad
