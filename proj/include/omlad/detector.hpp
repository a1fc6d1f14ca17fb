#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "omlad/config_io.hpp"
#include "omlad/core.hpp"
#include "omlad/differencer.hpp"
#include "omlad/online_stats.hpp"
#include "omlad/scoring.hpp"
#include "omlad/snarimax.hpp"

namespace omlad {

inline constexpr const char* kStateFormat = "omlad.detector-state";
inline constexpr int kStateVersion = 1;

/// Prediction-based anomaly detector.
///
/// Per observation x_t:
///   1. forecast the next differenced value in standardized units, map it
///      back through the scaler and the differencer to get x_hat;
///   2. difference x_t on the raw scale and standardize the result;
///   3. error = |x_hat - x_t|, tau from the configured rule, score =
///      min(error / tau, 1);
///   4. fold the residual into the error statistics and take one OGD step.
/// Step 4 is skipped for flagged points when learn_on_anomaly is false (the
/// lag buffers still advance). No score is emitted during warmup.
class PadDetector {
 public:
  explicit PadDetector(DetectorConfig cfg = {}) : cfg_(validated(cfg)) {
    differencer_ = Differencer(cfg_.d, cfg_.D, cfg_.s);
    model_ = SnarimaxModel(SnarimaxOrders{cfg_.p, cfg_.q, cfg_.P, cfg_.Q, cfg_.s}, cfg_.learning_rate);
    scaler_ = OnlineScaler(RunningStats(GlobalMoments{}));
    scorer_ = ErrorScorer(cfg_.threshold_rule, cfg_.error_stats);
  }

  std::optional<ScoredPoint> score_learn(const Observation& obs) {
    require_finite(obs.value, "observation value");
    if (last_tick_ && obs.t <= *last_tick_) {
      throw Error(ErrorCode::NonMonotoneTick,
                  "tick " + std::to_string(obs.t) + " does not follow " + std::to_string(*last_tick_));
    }
    last_tick_ = obs.t;
    const bool warming = ticks_seen_ < static_cast<std::uint64_t>(cfg_.warmup);
    ++ticks_seen_;

    if (!differencer_.ready()) {
      differencer_.apply(obs.value);
      return std::nullopt;
    }

    const double prediction = differencer_.invert(scaler_.inverse_transform(model_.predict()));
    const double z = scaler_.learn_transform(*differencer_.apply(obs.value));

    if (warming) {
      scorer_.observe_residual(prediction - obs.value);
      model_.learn(z);
      return std::nullopt;
    }

    const ScoredPoint sp = scorer_.evaluate(obs.t, obs.value, prediction);
    const bool learn = cfg_.learn_on_anomaly || !sp.flagged();
    scorer_.commit(sp, learn);
    model_.learn(z, learn);
    return sp;
  }

  const DetectorConfig& config() const noexcept { return cfg_; }
  const SnarimaxModel& model() const noexcept { return model_; }
  const ErrorScorer& scorer() const noexcept { return scorer_; }
  std::uint64_t points_scored() const noexcept { return scorer_.scored(); }
  std::uint64_t ticks_seen() const noexcept { return ticks_seen_; }
  std::optional<Tick> last_tick() const noexcept { return last_tick_; }

  /// Versioned, self-describing state record. Doubles serialize with
  /// round-trip precision, so restore(snapshot()) continues bit-exactly.
  nlohmann::json snapshot() const {
    auto stats_json = [](const RunningStats& st) {
      return nlohmann::json{{"mode", stats_mode_to_json(st.mode())},
                            {"count", st.count()},
                            {"mean", st.mean()},
                            {"m2", st.raw_m2()}};
    };
    nlohmann::json j;
    j["format"] = kStateFormat;
    j["version"] = kStateVersion;
    j["config"] = config_to_json(cfg_);
    j["ticks_seen"] = ticks_seen_;
    j["last_tick"] = last_tick_ ? nlohmann::json(*last_tick_) : nlohmann::json(nullptr);
    j["differencer"] = {{"history", differencer_.history()}};
    j["scaler"] = stats_json(scaler_.stats());
    j["model"] = {{"weights", std::vector<double>(model_.weights().begin(), model_.weights().end())},
                  {"values", model_.value_history()},
                  {"residuals", model_.residual_history()}};
    j["error_stats"] = stats_json(scorer_.stats());
    j["points_scored"] = scorer_.scored();
    return j;
  }

  std::string snapshot_string() const { return snapshot().dump(); }

  static PadDetector restore(const nlohmann::json& j) {
    try {
      if (!j.is_object() || j.at("format").get<std::string>() != kStateFormat) {
        throw Error(ErrorCode::MalformedRecord, "not a detector state record");
      }
      if (j.at("version").get<int>() != kStateVersion) {
        throw Error(ErrorCode::MalformedRecord, "unsupported state version");
      }
      PadDetector det(config_from_json(j.at("config")));
      det.ticks_seen_ = j.at("ticks_seen").get<std::uint64_t>();
      if (!j.at("last_tick").is_null()) det.last_tick_ = j.at("last_tick").get<Tick>();
      det.differencer_.restore_history(j.at("differencer").at("history").get<std::vector<double>>());

      auto stats_from = [](const nlohmann::json& s) {
        return RunningStats::from_state(stats_mode_from_json(s.at("mode")), s.at("count").get<std::uint64_t>(),
                                        s.at("mean").get<double>(), s.at("m2").get<double>());
      };
      det.scaler_ = OnlineScaler(stats_from(j.at("scaler")));
      const auto& m = j.at("model");
      det.model_.set_weights(m.at("weights").get<std::vector<double>>());
      det.model_.restore_buffers(m.at("values").get<std::vector<double>>(),
                                 m.at("residuals").get<std::vector<double>>());
      det.scorer_.restore(stats_from(j.at("error_stats")), j.at("points_scored").get<std::uint64_t>());
      return det;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::MalformedRecord, e.what());
    } catch (const Error& e) {
      if (e.code() == ErrorCode::MalformedRecord) throw;
      throw Error(ErrorCode::MalformedRecord, e.what());
    }
  }

  static PadDetector restore_string(const std::string& text) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::MalformedRecord, e.what());
    }
    return restore(j);
  }

 private:
  static DetectorConfig validated(const DetectorConfig& cfg) {
    require_valid(cfg);
    return cfg;
  }

  DetectorConfig cfg_;
  Differencer differencer_;
  OnlineScaler scaler_;
  SnarimaxModel model_;
  ErrorScorer scorer_;
  std::uint64_t ticks_seen_ = 0;
  std::optional<Tick> last_tick_;
};

}  // namespace omlad
