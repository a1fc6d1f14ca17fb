#pragma once

#include <string>

#include "json.hpp"
#include "omlad/core.hpp"

namespace omlad {

inline nlohmann::json rule_to_json(const ThresholdRule& rule) {
  return std::visit(
      [](const auto& r) -> nlohmann::json {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, MeanSigma>) {
          return {{"kind", "mean-sigma"}, {"c", r.c}};
        } else if constexpr (std::is_same_v<T, GaussianQuantile>) {
          return {{"kind", "gaussian"}, {"alpha", r.alpha}};
        } else {
          nlohmann::json j = {{"kind", "gumbel"}, {"alpha", r.alpha}, {"n", nullptr}};
          if (r.n) j["n"] = *r.n;
          return j;
        }
      },
      rule);
}

inline ThresholdRule rule_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "mean-sigma") return MeanSigma{j.at("c").get<double>()};
  if (kind == "gaussian") return GaussianQuantile{j.at("alpha").get<double>()};
  if (kind == "gumbel") {
    GumbelQuantile g{j.at("alpha").get<double>(), std::nullopt};
    if (j.contains("n") && !j.at("n").is_null()) g.n = j.at("n").get<std::int64_t>();
    return g;
  }
  throw Error(ErrorCode::MalformedRecord, "unknown threshold rule '" + kind + "'");
}

inline nlohmann::json stats_mode_to_json(const StatsMode& mode) {
  if (const auto* decay = std::get_if<ExponentialDecay>(&mode)) {
    return {{"kind", "decay"}, {"lambda", decay->lambda}};
  }
  return {{"kind", "global"}};
}

inline StatsMode stats_mode_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "global") return GlobalMoments{};
  if (kind == "decay") return ExponentialDecay{j.at("lambda").get<double>()};
  throw Error(ErrorCode::MalformedRecord, "unknown statistics mode '" + kind + "'");
}

inline nlohmann::json config_to_json(const DetectorConfig& cfg) {
  return {{"p", cfg.p},
          {"d", cfg.d},
          {"q", cfg.q},
          {"P", cfg.P},
          {"D", cfg.D},
          {"Q", cfg.Q},
          {"s", cfg.s},
          {"learning_rate", cfg.learning_rate},
          {"threshold_rule", rule_to_json(cfg.threshold_rule)},
          {"warmup", cfg.warmup},
          {"learn_on_anomaly", cfg.learn_on_anomaly},
          {"error_stats", stats_mode_to_json(cfg.error_stats)}};
}

inline DetectorConfig config_from_json(const nlohmann::json& j) {
  DetectorConfig cfg;
  cfg.p = j.at("p").get<int>();
  cfg.d = j.at("d").get<int>();
  cfg.q = j.at("q").get<int>();
  cfg.P = j.at("P").get<int>();
  cfg.D = j.at("D").get<int>();
  cfg.Q = j.at("Q").get<int>();
  cfg.s = j.at("s").get<int>();
  cfg.learning_rate = j.at("learning_rate").get<double>();
  cfg.threshold_rule = rule_from_json(j.at("threshold_rule"));
  cfg.warmup = j.at("warmup").get<std::int64_t>();
  cfg.learn_on_anomaly = j.at("learn_on_anomaly").get<bool>();
  cfg.error_stats = stats_mode_from_json(j.at("error_stats"));
  return cfg;
}

}  // namespace omlad
