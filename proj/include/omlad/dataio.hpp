#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "omlad/core.hpp"
#include "omlad/rng.hpp"

namespace omlad {

struct SeriesMeta {
  std::string name;
  std::string source;
  std::string units;
  std::optional<int> season_hint;
};

/// Ticks are 0..n-1; original timestamps are kept alongside. Every
/// observation carries a label (false unless known anomalous).
struct LabeledSeries {
  std::vector<Observation> observations;
  std::vector<std::string> timestamps;
  SeriesMeta meta;

  std::size_t size() const noexcept { return observations.size(); }

  std::vector<double> values() const {
    std::vector<double> out;
    out.reserve(observations.size());
    for (const auto& o : observations) out.push_back(o.value);
    return out;
  }

  std::vector<bool> labels() const {
    std::vector<bool> out;
    out.reserve(observations.size());
    for (const auto& o : observations) out.push_back(o.label.value_or(false));
    return out;
  }

  std::size_t anomaly_count() const {
    std::size_t n = 0;
    for (const auto& o : observations) n += o.label.value_or(false) ? 1 : 0;
    return n;
  }
};

/// Shortest decimal text that parses back to exactly `x`.
inline std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

// Accepts what from_chars accepts plus a leading '+'; NaN and infinities
// parse and are rejected later as non-finite.
inline std::optional<double> parse_double(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::optional<bool> parse_label(std::string_view s) {
  if (s == "1" || s == "true" || s == "True" || s == "TRUE") return true;
  if (s == "0" || s == "false" || s == "False" || s == "FALSE" || s.empty()) return false;
  return std::nullopt;
}

inline std::string where(std::size_t row, std::size_t line) {
  return "row " + std::to_string(row) + " (line " + std::to_string(line) + ")";
}

// Strictly increasing timestamps: numeric order when every timestamp is a
// number, lexicographic order otherwise (ISO-8601 text sorts correctly).
inline void check_monotone(const std::vector<std::string>& times, const std::vector<std::size_t>& lines) {
  std::vector<double> numeric;
  numeric.reserve(times.size());
  for (const auto& t : times) {
    auto v = parse_double(t);
    if (!v || !std::isfinite(*v)) {
      numeric.clear();
      break;
    }
    numeric.push_back(*v);
  }
  const bool use_numeric = numeric.size() == times.size();
  for (std::size_t i = 1; i < times.size(); ++i) {
    const bool ok = use_numeric ? numeric[i] > numeric[i - 1] : times[i] > times[i - 1];
    if (!ok) {
      throw Error(ErrorCode::NonMonotoneTime,
                  where(i + 1, lines[i]) + ": time '" + times[i] + "' does not follow '" + times[i - 1] + "'", i + 1);
    }
  }
}

}  // namespace detail

struct CsvSchema {
  std::string time_column = "time";
  std::string value_column = "value";
  // Used when present in the header; labels default to false otherwise.
  std::string label_column = "label";
  bool require_label = false;
};

/// Reads `time,value[,label]` CSV with a header row. Blank lines and lines
/// starting with '#' are skipped. Errors carry the 1-based data row.
inline LabeledSeries read_csv(std::istream& in, const CsvSchema& schema = {}, std::string name = "") {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string_view> header;
  std::string header_line;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    header_line = line;
    break;
  }
  if (header_line.empty()) {
    throw Error(ErrorCode::MissingColumn, "CSV input has no header row");
  }
  header = detail::split_csv(header_line);
  auto find_col = [&](const std::string& col) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == col) return i;
    }
    return std::nullopt;
  };
  const auto time_idx = find_col(schema.time_column);
  const auto value_idx = find_col(schema.value_column);
  const auto label_idx = find_col(schema.label_column);
  if (!time_idx) throw Error(ErrorCode::MissingColumn, "missing time column '" + schema.time_column + "'");
  if (!value_idx) throw Error(ErrorCode::MissingColumn, "missing value column '" + schema.value_column + "'");
  if (schema.require_label && !label_idx) {
    throw Error(ErrorCode::MissingColumn, "missing label column '" + schema.label_column + "'");
  }

  LabeledSeries series;
  series.meta.name = std::move(name);
  series.meta.source = "csv";
  std::vector<std::size_t> lines;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto trimmed = detail::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    ++row;
    const auto cells = detail::split_csv(line);
    if (cells.size() != header.size()) {
      throw Error(ErrorCode::ParseError,
                  detail::where(row, line_no) + ": expected " + std::to_string(header.size()) + " fields, got " +
                      std::to_string(cells.size()),
                  row);
    }
    const auto value = detail::parse_double(cells[*value_idx]);
    if (!value) {
      throw Error(ErrorCode::ParseError,
                  detail::where(row, line_no) + ": value '" + std::string(cells[*value_idx]) + "' is not a number", row);
    }
    if (!std::isfinite(*value)) {
      throw Error(ErrorCode::NonFiniteValue, detail::where(row, line_no) + ": value is not finite", row);
    }
    bool label = false;
    if (label_idx) {
      const auto parsed = detail::parse_label(cells[*label_idx]);
      if (!parsed) {
        throw Error(ErrorCode::ParseError,
                    detail::where(row, line_no) + ": label '" + std::string(cells[*label_idx]) + "' is not 0 or 1",
                    row);
      }
      label = *parsed;
    }
    series.observations.push_back(Observation{static_cast<Tick>(row - 1), *value, label});
    series.timestamps.emplace_back(cells[*time_idx]);
    lines.push_back(line_no);
  }
  detail::check_monotone(series.timestamps, lines);
  return series;
}

inline LabeledSeries read_csv_file(const std::string& path, const CsvSchema& schema = {}) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  return read_csv(in, schema, path);
}

/// Writes `time,value,label`; values use the shortest round-trip form.
inline void write_csv(std::ostream& out, const LabeledSeries& series) {
  out << "time,value,label\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& o = series.observations[i];
    const std::string time = i < series.timestamps.size() ? series.timestamps[i] : std::to_string(o.t);
    out << time << ',' << format_double(o.value) << ',' << (o.label.value_or(false) ? 1 : 0) << '\n';
  }
}

/// NAB timestamps come as "YYYY-MM-DD HH:MM:SS[.ffffff]" or with a 'T'
/// separator and trailing 'Z'. Normalizes to "YYYY-MM-DD HH:MM:SS".
inline std::string normalize_timestamp(std::string_view ts) {
  std::string s(detail::trim(ts));
  if (s.size() > 10 && s[10] == 'T') s[10] = ' ';
  if (!s.empty() && s.back() == 'Z') s.pop_back();
  if (const auto dot = s.find('.'); dot != std::string::npos && dot >= 19) s.erase(dot);
  return s;
}

struct LabelWindow {
  std::string start;
  std::string end;
};

/// Parses a label-window document: either an array of [start, end] pairs or
/// an object mapping series names to such arrays (the NAB layout). With an
/// object, `series_key` selects the entry; a key that matches the end of
/// exactly one entry's name is accepted too.
inline std::vector<LabelWindow> parse_label_windows(const std::string& text, const std::string& series_key = "") {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("label windows: ") + e.what());
  }
  const nlohmann::json* arr = &doc;
  if (doc.is_object()) {
    arr = nullptr;
    if (doc.contains(series_key)) {
      arr = &doc.at(series_key);
    } else if (!series_key.empty()) {
      for (const auto& [key, value] : doc.items()) {
        if (key.size() >= series_key.size() && key.compare(key.size() - series_key.size(), series_key.size(), series_key) == 0) {
          if (arr) throw Error(ErrorCode::ParseError, "label windows: key '" + series_key + "' is ambiguous");
          arr = &value;
        }
      }
    }
    if (!arr) throw Error(ErrorCode::MissingColumn, "label windows: no entry for '" + series_key + "'");
  }
  if (!arr->is_array()) throw Error(ErrorCode::ParseError, "label windows: expected an array of [start, end] pairs");
  std::vector<LabelWindow> out;
  for (const auto& w : *arr) {
    if (!w.is_array() || w.size() != 2 || !w[0].is_string() || !w[1].is_string()) {
      throw Error(ErrorCode::ParseError, "label windows: each window must be [start, end]");
    }
    out.push_back({normalize_timestamp(w[0].get<std::string>()), normalize_timestamp(w[1].get<std::string>())});
  }
  return out;
}

/// NAB layout: `timestamp,value` CSV plus label windows. A point is labeled
/// iff its timestamp lies inside some window, bounds included.
inline LabeledSeries read_nab(std::istream& csv, const std::vector<LabelWindow>& windows, std::string name = "") {
  CsvSchema schema;
  schema.time_column = "timestamp";
  schema.value_column = "value";
  LabeledSeries series = read_csv(csv, schema, std::move(name));
  series.meta.source = "nab";
  for (std::size_t i = 0; i < series.size(); ++i) {
    series.timestamps[i] = normalize_timestamp(series.timestamps[i]);
    bool inside = false;
    for (const auto& w : windows) {
      if (series.timestamps[i] >= w.start && series.timestamps[i] <= w.end) {
        inside = true;
        break;
      }
    }
    series.observations[i].label = inside;
  }
  return series;
}

/// Picks k distinct indices from [0, n) by a partial Fisher-Yates shuffle.
/// Indices are returned in selection order.
inline std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, Rng& rng) {
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.uniform_index(n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

inline double celsius_to_fahrenheit(double c) { return c * 9.0 / 5.0 + 32.0; }

/// Converts floor(rate * n) distinct, uniformly chosen points from Celsius to
/// Fahrenheit and labels them. Existing labels are discarded.
inline LabeledSeries inject_c_to_f(LabeledSeries series, double rate, std::uint64_t seed) {
  if (!(rate > 0.0 && rate < 1.0)) {
    throw Error(ErrorCode::RateOutOfRange, "injection rate must lie in (0, 1)");
  }
  const std::size_t n = series.size();
  const auto k = static_cast<std::size_t>(std::floor(rate * static_cast<double>(n)));
  for (auto& o : series.observations) o.label = false;
  Rng rng(seed);
  for (std::size_t idx : sample_indices(n, k, rng)) {
    auto& o = series.observations[idx];
    o.value = celsius_to_fahrenheit(o.value);
    o.label = true;
  }
  return series;
}

// Drift shapes for synthetic data.

struct NoDrift {};

struct SuddenDrift {
  std::int64_t at = 0;
  double delta = 0.0;
};

/// Linear ramp from 0 at `from` to `total_delta` at `to`, constant after.
struct IncrementalDrift {
  std::int64_t from = 0;
  std::int64_t to = 0;
  double total_delta = 0.0;
};

using DriftSpec = std::variant<NoDrift, SuddenDrift, IncrementalDrift>;

struct SynthSpec {
  std::int64_t n = 1000;
  double level = 0.0;
  double trend = 0.0;
  double amplitude = 0.0;
  std::int64_t period = 52;
  double noise_std = 1.0;
  DriftSpec drift = NoDrift{};
  double anomaly_rate = 0.0;
  // Spike size in multiples of noise_std (absolute when noise_std is 0).
  double anomaly_magnitude = 4.0;
  std::uint64_t seed = 0;
  std::string name = "synthetic";
};

inline void validate_synth_spec(const SynthSpec& spec) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidSpec, msg); };
  if (spec.n < 1) fail("n must be >= 1");
  if (spec.period < 1) fail("period must be >= 1");
  if (!(spec.noise_std >= 0.0) || !std::isfinite(spec.noise_std)) fail("noise_std must be finite and >= 0");
  if (!(spec.anomaly_rate >= 0.0 && spec.anomaly_rate < 1.0)) fail("anomaly_rate must lie in [0, 1)");
  for (double v : {spec.level, spec.trend, spec.amplitude, spec.anomaly_magnitude}) {
    if (!std::isfinite(v)) fail("synthetic parameters must be finite");
  }
  if (const auto* s = std::get_if<SuddenDrift>(&spec.drift)) {
    if (s->at < 0 || s->at >= spec.n) fail("sudden drift index outside [0, n)");
    if (!std::isfinite(s->delta)) fail("drift delta must be finite");
  }
  if (const auto* inc = std::get_if<IncrementalDrift>(&spec.drift)) {
    if (inc->from < 0 || inc->to >= spec.n || inc->from > inc->to) fail("incremental drift needs 0 <= from <= to < n");
    if (!std::isfinite(inc->total_delta)) fail("drift delta must be finite");
  }
}

inline double drift_term(const DriftSpec& drift, std::int64_t t) {
  if (const auto* s = std::get_if<SuddenDrift>(&drift)) {
    return t >= s->at ? s->delta : 0.0;
  }
  if (const auto* inc = std::get_if<IncrementalDrift>(&drift)) {
    if (t < inc->from) return 0.0;
    if (t >= inc->to) return inc->total_delta;
    return inc->total_delta * static_cast<double>(t - inc->from) / static_cast<double>(inc->to - inc->from);
  }
  return 0.0;
}

/// Noise-free part of the generator at tick t.
inline double synth_signal(const SynthSpec& spec, std::int64_t t) {
  const double td = static_cast<double>(t);
  return spec.level + spec.trend * td +
         spec.amplitude * std::sin(2.0 * std::numbers::pi * td / static_cast<double>(spec.period)) +
         drift_term(spec.drift, t);
}

/// x_t = signal(t) + noise_std * z_t, then floor(rate * n) spikes of
/// +/- magnitude * noise_std at distinct random positions. Draw order: one
/// normal per tick, then the index sample, then one sign per spike.
inline LabeledSeries generate_synthetic(const SynthSpec& spec) {
  validate_synth_spec(spec);
  Rng rng(spec.seed);
  LabeledSeries series;
  series.meta.name = spec.name;
  series.meta.source = "synthetic";
  series.meta.season_hint = static_cast<int>(spec.period);
  const auto n = static_cast<std::size_t>(spec.n);
  series.observations.reserve(n);
  series.timestamps.reserve(n);
  for (std::int64_t t = 0; t < spec.n; ++t) {
    const double z = rng.normal();
    series.observations.push_back(Observation{t, synth_signal(spec, t) + spec.noise_std * z, false});
    series.timestamps.push_back(std::to_string(t));
  }
  const auto k = static_cast<std::size_t>(std::floor(spec.anomaly_rate * static_cast<double>(n)));
  const double spike = spec.noise_std > 0.0 ? spec.anomaly_magnitude * spec.noise_std : spec.anomaly_magnitude;
  for (std::size_t idx : sample_indices(n, k, rng)) {
    const double sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
    series.observations[idx].value += sign * spike;
    series.observations[idx].label = true;
  }
  return series;
}

/// Reads a synthetic spec from `key = value` lines ('#' starts a comment).
/// Keys: n, level, trend, amplitude, period, noise_std, drift
/// (none|sudden|incremental), drift_at, drift_delta, drift_from, drift_to,
/// anomaly_rate, anomaly_magnitude, seed, name.
inline SynthSpec parse_synth_spec(std::istream& in) {
  SynthSpec spec;
  std::string kind = "none";
  std::int64_t at = 0;
  std::int64_t from = 0;
  std::int64_t to = 0;
  double delta = 0.0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto trimmed = detail::trim(line);
    if (trimmed.empty()) continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::InvalidSpec, "line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(detail::trim(trimmed.substr(0, eq)));
    const std::string value(detail::trim(trimmed.substr(eq + 1)));
    auto number = [&]() {
      const auto v = detail::parse_double(value);
      if (!v || !std::isfinite(*v)) {
        throw Error(ErrorCode::InvalidSpec, "line " + std::to_string(line_no) + ": '" + key + "' needs a number");
      }
      return *v;
    };
    auto integer = [&]() {
      const double v = number();
      if (v != std::floor(v) || std::abs(v) > 9.0e15) {
        throw Error(ErrorCode::InvalidSpec, "line " + std::to_string(line_no) + ": '" + key + "' needs an integer");
      }
      return static_cast<std::int64_t>(v);
    };
    if (key == "n") spec.n = integer();
    else if (key == "level") spec.level = number();
    else if (key == "trend") spec.trend = number();
    else if (key == "amplitude") spec.amplitude = number();
    else if (key == "period") spec.period = integer();
    else if (key == "noise_std") spec.noise_std = number();
    else if (key == "drift") kind = value;
    else if (key == "drift_at") at = integer();
    else if (key == "drift_delta") delta = number();
    else if (key == "drift_from") from = integer();
    else if (key == "drift_to") to = integer();
    else if (key == "anomaly_rate") spec.anomaly_rate = number();
    else if (key == "anomaly_magnitude") spec.anomaly_magnitude = number();
    else if (key == "seed") {
      const std::int64_t s = integer();
      if (s < 0) throw Error(ErrorCode::InvalidSpec, "seed must be >= 0");
      spec.seed = static_cast<std::uint64_t>(s);
    } else if (key == "name") spec.name = value;
    else throw Error(ErrorCode::InvalidSpec, "line " + std::to_string(line_no) + ": unknown key '" + key + "'");
  }
  if (kind == "none") spec.drift = NoDrift{};
  else if (kind == "sudden") spec.drift = SuddenDrift{at, delta};
  else if (kind == "incremental") spec.drift = IncrementalDrift{from, to, delta};
  else throw Error(ErrorCode::InvalidSpec, "unknown drift kind '" + kind + "'");
  validate_synth_spec(spec);
  return spec;
}

inline std::string drift_kind(const DriftSpec& drift) {
  if (std::holds_alternative<SuddenDrift>(drift)) return "sudden";
  if (std::holds_alternative<IncrementalDrift>(drift)) return "incremental";
  return "none";
}

/// Means over consecutive blocks of `block` points (e.g. 7 for daily to
/// weekly). A trailing partial block is dropped. A block is labeled when any
/// member is; its timestamp is that of its first member.
inline LabeledSeries aggregate_mean(const LabeledSeries& series, std::size_t block) {
  if (block < 1) throw Error(ErrorCode::InvalidSpec, "block size must be >= 1");
  LabeledSeries out;
  out.meta = series.meta;
  const std::size_t blocks = series.size() / block;
  for (std::size_t b = 0; b < blocks; ++b) {
    double sum = 0.0;
    bool label = false;
    for (std::size_t i = b * block; i < (b + 1) * block; ++i) {
      sum += series.observations[i].value;
      label = label || series.observations[i].label.value_or(false);
    }
    out.observations.push_back(Observation{static_cast<Tick>(b), sum / static_cast<double>(block), label});
    out.timestamps.push_back(b * block < series.timestamps.size() ? series.timestamps[b * block] : std::to_string(b));
  }
  return out;
}

}  // namespace omlad
