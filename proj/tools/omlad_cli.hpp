#pragma once

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "omlad/omlad.hpp"

namespace omlad::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;

inline constexpr const char* kScoredSchema = "omlad.scored";
inline constexpr int kScoredVersion = 1;

/// Error codes that describe bad parameters rather than bad input data.
inline bool is_config_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidOrder:
    case ErrorCode::InvalidSeason:
    case ErrorCode::InvalidRate:
    case ErrorCode::InvalidThreshold:
    case ErrorCode::InvalidWarmup:
    case ErrorCode::InvalidStatsMode:
    case ErrorCode::AlphaOutOfRange:
    case ErrorCode::NTooSmall:
    case ErrorCode::InvalidSpec:
    case ErrorCode::RateOutOfRange:
      return true;
    default:
      return false;
  }
}

/// Thrown for configuration problems found outside the library (bad config
/// file, conflicting flags).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

/// Reads `key = value` lines into `--key=value` arguments. '#' starts a
/// comment; a leading "--" on the key is optional.
inline std::vector<std::string> config_file_args(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::vector<std::string> args;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string trimmed(omlad::detail::trim(line));
    if (trimmed.empty()) continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key = value");
    }
    std::string key(omlad::detail::trim(std::string_view(trimmed).substr(0, eq)));
    const std::string value(omlad::detail::trim(std::string_view(trimmed).substr(eq + 1)));
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    if (key.empty() || key == "config") {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": invalid key '" + key + "'");
    }
    args.push_back("--" + key + "=" + value);
  }
  return args;
}

// Config-file values go right after the subcommand so that command-line
// flags, which come later and use take-last semantics, override them.
inline std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::optional<std::string> path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (!path || args.size() < 2 || args[1].empty() || args[1][0] == '-') return args;
  auto extra = config_file_args(*path);
  args.insert(args.begin() + 2, extra.begin(), extra.end());
  return args;
}

struct OutputTarget {
  std::ostream* stream = nullptr;
  std::unique_ptr<std::ofstream> file;

  OutputTarget(const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
      stream = &fallback;
      return;
    }
    file = std::make_unique<std::ofstream>(path);
    if (!*file) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
    stream = file.get();
  }

  std::ostream& operator*() { return *stream; }
};

inline std::string read_all(const std::string& path, std::istream& stdin_stream) {
  std::ostringstream buf;
  if (path.empty() || path == "-") {
    buf << stdin_stream.rdbuf();
    return buf.str();
  }
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace detail

/// Detector flags shared by `detect` and `benchmark`.
struct ModelFlags {
  int p = 2, d = 1, q = 2, P = 2, D = 0, Q = 2, s = 52;
  double lr = 0.001;
  std::string rule = "mean-sigma";
  double c = 3.0;
  double alpha = 0.05;
  std::optional<std::int64_t> gumbel_n;
  std::optional<std::int64_t> warmup;
  std::string stats = "decay";
  double lambda = 0.01;
  bool learn_on_anomaly = true;

  void attach(CLI::App& app) {
    app.add_option("--p", p, "AR order")->capture_default_str();
    app.add_option("--d", d, "differencing order")->capture_default_str();
    app.add_option("--q", q, "MA order")->capture_default_str();
    app.add_option("--P", P, "seasonal AR order")->capture_default_str();
    app.add_option("--D", D, "seasonal differencing order")->capture_default_str();
    app.add_option("--Q", Q, "seasonal MA order")->capture_default_str();
    app.add_option("--s", s, "season length")->capture_default_str();
    app.add_option("--lr", lr, "OGD learning rate")->capture_default_str();
    app.add_option("--rule", rule, "threshold rule")
        ->check(CLI::IsMember({"mean-sigma", "gaussian", "gumbel"}))
        ->capture_default_str();
    app.add_option("--c", c, "multiplier for mean-sigma")->capture_default_str();
    app.add_option("--alpha", alpha, "false-positive level for gaussian/gumbel")->capture_default_str();
    app.add_option("--gumbel-n", gumbel_n, "residual count for gumbel (default: points scored so far)");
    app.add_option("--warmup", warmup, "ticks before scores are emitted");
    app.add_option("--stats", stats, "error statistics mode")
        ->check(CLI::IsMember({"decay", "global"}))
        ->capture_default_str();
    app.add_option("--lambda", lambda, "decay rate for --stats decay")->capture_default_str();
    app.add_flag("--learn-on-anomaly,!--no-learn-on-anomaly", learn_on_anomaly,
                 "keep learning from flagged points")
        ->capture_default_str();
  }

  DetectorConfig config() const {
    DetectorConfig cfg;
    cfg.p = p;
    cfg.d = d;
    cfg.q = q;
    cfg.P = P;
    cfg.D = D;
    cfg.Q = Q;
    cfg.s = s;
    cfg.learning_rate = lr;
    if (rule == "mean-sigma") cfg.threshold_rule = MeanSigma{c};
    if (rule == "gaussian") cfg.threshold_rule = GaussianQuantile{alpha};
    if (rule == "gumbel") cfg.threshold_rule = GumbelQuantile{alpha, gumbel_n};
    if (stats == "global") cfg.error_stats = GlobalMoments{};
    else cfg.error_stats = ExponentialDecay{lambda};
    cfg.learn_on_anomaly = learn_on_anomaly;
    cfg.warmup = warmup.value_or(0);
    if (!warmup) {
      // Ill-formed orders are reported by validation below, not here.
      cfg.warmup = std::max<std::int64_t>(cfg.recommended_warmup(), 0);
    }
    return cfg;
  }
};

/// Synthetic-data flags shared by `synth` and `benchmark`. Unset flags fall
/// back to the spec file, then to the defaults of the drift fixture.
struct SynthFlags {
  std::string spec_file;
  std::optional<std::int64_t> n, period, drift_at, drift_from, drift_to;
  std::optional<double> level, trend, amplitude, noise, drift_delta, anomaly_rate, anomaly_k;
  std::optional<std::string> drift, name;

  void attach(CLI::App& app) {
    app.add_option("--spec", spec_file, "synthetic spec file (key = value)");
    app.add_option("--n", n, "number of points");
    app.add_option("--level", level, "constant level");
    app.add_option("--trend", trend, "trend per step");
    app.add_option("--amplitude", amplitude, "seasonal amplitude");
    app.add_option("--period", period, "seasonal period");
    app.add_option("--noise", noise, "noise standard deviation");
    app.add_option("--drift", drift, "drift kind")->check(CLI::IsMember({"none", "sudden", "incremental"}));
    app.add_option("--drift-at", drift_at, "sudden drift index");
    app.add_option("--drift-delta", drift_delta, "drift size");
    app.add_option("--drift-from", drift_from, "incremental drift start");
    app.add_option("--drift-to", drift_to, "incremental drift end");
    app.add_option("--anomaly-rate", anomaly_rate, "fraction of points turned into spikes");
    app.add_option("--anomaly-k", anomaly_k, "spike size in noise standard deviations");
    app.add_option("--name", name, "dataset name");
  }

  /// Drift fixture: weekly-like seasonality with a level shift halfway.
  static SynthSpec fixture(std::uint64_t seed) {
    SynthSpec spec;
    spec.n = 3000;
    spec.level = 10.0;
    spec.amplitude = 1.0;
    spec.period = 52;
    spec.noise_std = 1.0;
    spec.drift = SuddenDrift{1500, 10.0};
    spec.anomaly_rate = 0.01;
    spec.anomaly_magnitude = 4.0;
    spec.seed = seed;
    spec.name = "synthetic-drift";
    return spec;
  }

  SynthSpec resolve(std::uint64_t seed, bool seed_given) const {
    SynthSpec spec = fixture(seed);
    if (!spec_file.empty()) {
      std::ifstream in(spec_file);
      if (!in) throw ConfigError("cannot open spec file '" + spec_file + "'");
      spec = parse_synth_spec(in);
      if (seed_given) spec.seed = seed;
    }
    if (n) spec.n = *n;
    if (level) spec.level = *level;
    if (trend) spec.trend = *trend;
    if (amplitude) spec.amplitude = *amplitude;
    if (period) spec.period = *period;
    if (noise) spec.noise_std = *noise;
    if (anomaly_rate) spec.anomaly_rate = *anomaly_rate;
    if (anomaly_k) spec.anomaly_magnitude = *anomaly_k;
    if (name) spec.name = *name;

    std::string kind = drift.value_or(drift_kind(spec.drift));
    std::int64_t at = 0, from = 0, to = 0;
    double delta = 0.0;
    if (const auto* s = std::get_if<SuddenDrift>(&spec.drift)) {
      at = s->at;
      delta = s->delta;
    } else if (const auto* inc = std::get_if<IncrementalDrift>(&spec.drift)) {
      from = inc->from;
      to = inc->to;
      delta = inc->total_delta;
    }
    at = drift_at.value_or(at);
    from = drift_from.value_or(from);
    to = drift_to.value_or(to);
    delta = drift_delta.value_or(delta);
    if (kind == "sudden") spec.drift = SuddenDrift{at, delta};
    else if (kind == "incremental") spec.drift = IncrementalDrift{from, to, delta};
    else spec.drift = NoDrift{};
    validate_synth_spec(spec);
    return spec;
  }
};

inline void write_scored_header(std::ostream& out, bool csv) {
  if (csv) {
    out << "# schema=" << kScoredSchema << " version=" << kScoredVersion << '\n';
    out << "t,value,prediction,error,threshold,score,flag\n";
  } else {
    out << R"({"schema":")" << kScoredSchema << R"(","version":)" << kScoredVersion
        << R"(,"fields":["t","value","prediction","error","threshold","score","flag"]})" << '\n';
  }
}

inline void write_scored(std::ostream& out, const ScoredPoint& sp, bool csv) {
  const int flag = sp.flagged() ? 1 : 0;
  if (csv) {
    out << sp.t << ',' << format_double(sp.truth) << ',' << format_double(sp.prediction) << ','
        << format_double(sp.error) << ',' << format_double(sp.threshold) << ',' << format_double(sp.score) << ','
        << flag << '\n';
  } else {
    out << R"({"t":)" << sp.t << R"(,"value":)" << format_double(sp.truth) << R"(,"prediction":)"
        << format_double(sp.prediction) << R"(,"error":)" << format_double(sp.error) << R"(,"threshold":)"
        << format_double(sp.threshold) << R"(,"score":)" << format_double(sp.score) << R"(,"flag":)" << flag
        << "}\n";
  }
}

struct PlotRow {
  std::string t;
  double truth, prediction, error, threshold;
  int flag;
};

/// Parses scored output (JSON lines or CSV, as written by `detect`).
inline std::vector<PlotRow> parse_scored(const std::string& text) {
  std::vector<PlotRow> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::size_t row = 0;
  std::optional<bool> is_json;
  std::vector<std::string> header;
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::ParseError,
                "row " + std::to_string(row) + " (line " + std::to_string(line_no) + "): " + why, row);
  };
  auto check_flag = [&](int flag) {
    if (flag != 0 && flag != 1) fail("flag must be 0 or 1");
    return flag;
  };
  while (std::getline(in, line)) {
    ++line_no;
    const auto trimmed = omlad::detail::trim(line);
    if (trimmed.empty()) continue;
    if (!is_json) is_json = trimmed.front() == '{';
    if (*is_json) {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(trimmed);
      } catch (const nlohmann::json::exception&) {
        ++row;
        fail("not valid JSON");
      }
      if (j.contains("schema")) continue;
      ++row;
      try {
        const auto& t = j.at("t");
        PlotRow r{t.is_string() ? t.get<std::string>() : t.dump(),
                  j.at("value").get<double>(),
                  j.at("prediction").get<double>(),
                  j.at("error").get<double>(),
                  j.at("threshold").get<double>(),
                  0};
        const auto& flag = j.at("flag");
        r.flag = check_flag(flag.is_boolean() ? (flag.get<bool>() ? 1 : 0) : flag.get<int>());
        rows.push_back(r);
      } catch (const nlohmann::json::exception& e) {
        fail(std::string("bad record: ") + e.what());
      }
      continue;
    }
    if (trimmed.front() == '#') continue;
    const auto cells = omlad::detail::split_csv(trimmed);
    if (header.empty()) {
      for (auto c : cells) header.emplace_back(c);
      for (const char* need : {"t", "value", "prediction", "error", "threshold", "flag"}) {
        if (std::find(header.begin(), header.end(), need) == header.end()) {
          throw Error(ErrorCode::MissingColumn, std::string("scored input lacks column '") + need + "'");
        }
      }
      continue;
    }
    ++row;
    if (cells.size() != header.size()) fail("wrong number of fields");
    auto col = [&](const char* name) {
      return cells[static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin())];
    };
    auto num = [&](const char* name) {
      const auto v = omlad::detail::parse_double(col(name));
      if (!v || !std::isfinite(*v)) fail(std::string("field '") + name + "' is not a finite number");
      return *v;
    };
    const double flag = num("flag");
    rows.push_back(PlotRow{std::string(col("t")), num("value"), num("prediction"), num("error"), num("threshold"),
                           check_flag(static_cast<int>(flag == 1.0 ? 1 : (flag == 0.0 ? 0 : -1)))});
  }
  return rows;
}

inline void write_plot_rows(std::ostream& out, const std::vector<PlotRow>& rows) {
  out << "t,truth,prediction,error,threshold,flag\n";
  for (const auto& r : rows) {
    out << r.t << ',' << format_double(r.truth) << ',' << format_double(r.prediction) << ','
        << format_double(r.error) << ',' << format_double(r.threshold) << ',' << r.flag << '\n';
  }
}

/// Entry point; returns the process exit code.
inline int run(const std::vector<std::string>& raw_args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Online anomaly detection for non-stationary time series", "omlad"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "show help for every subcommand");

  std::string config_path;
  bool verbose = false;
  std::uint64_t seed = 0;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key = value file with flag defaults");
    sub->add_flag("--verbose", verbose, "print the resolved configuration to stderr");
    sub->add_option("--seed", seed, "seed for all randomness")->capture_default_str();
  };

  // detect
  auto* detect = app.add_subcommand("detect", "score a stream");
  ModelFlags detect_model;
  detect_model.attach(*detect);
  std::string detect_input = "-", detect_output = "-", detect_format = "jsonl";
  std::string state_in, state_out;
  CsvSchema detect_schema;
  detect->add_option("input", detect_input, "CSV input path or '-' for stdin")->capture_default_str();
  detect->add_option("-o,--output", detect_output, "output path or '-'")->capture_default_str();
  detect->add_option("--format", detect_format, "output format")
      ->check(CLI::IsMember({"jsonl", "csv"}))
      ->capture_default_str();
  detect->add_option("--time-col", detect_schema.time_column, "time column")->capture_default_str();
  detect->add_option("--value-col", detect_schema.value_column, "value column")->capture_default_str();
  detect->add_option("--label-col", detect_schema.label_column, "label column")->capture_default_str();
  detect->add_option("--state-in", state_in, "resume from a saved detector state");
  detect->add_option("--state-out", state_out, "save the detector state after the stream");
  common(detect);

  // benchmark
  auto* bench = app.add_subcommand("benchmark", "compare the online detector against batch baselines");
  ModelFlags bench_model;
  bench_model.attach(*bench);
  SynthFlags bench_synth;
  bench_synth.attach(*bench);
  std::string bench_input, nab_input, nab_windows, nab_key, report_path;
  std::optional<double> bench_inject;
  std::string contenders = "oml-ad,baseline-none,baseline-scheduled,baseline-dynamic";
  int repeats = 100;
  bool json_stdout = false, include_timing = false, parallel = false;
  BenchmarkOptions bench_opt;
  bench->add_option("--input", bench_input, "labeled CSV (time,value,label)");
  bench->add_option("--nab", nab_input, "NAB-format CSV (timestamp,value)");
  bench->add_option("--windows", nab_windows, "NAB label windows JSON");
  bench->add_option("--series-key", nab_key, "entry of the windows file to use");
  bench->add_option("--inject-cf", bench_inject, "relabel: convert this fraction of points from C to F");
  bench->add_option("--contenders", contenders, "comma-separated subset of oml-ad, baseline-none, baseline-scheduled, baseline-dynamic")
      ->capture_default_str();
  bench->add_option("--repeats", repeats, "timed passes per contender")->capture_default_str();
  bench->add_option("--baseline-p", bench_opt.baseline.p, "baseline AR order")->capture_default_str();
  bench->add_option("--baseline-window", bench_opt.baseline.window, "baseline fit window")->capture_default_str();
  bench->add_option("--retrain-period", bench_opt.retrain_period, "scheduled retraining period")
      ->capture_default_str();
  bench->add_option("--adwin-delta", bench_opt.adwin.delta, "ADWIN confidence")->capture_default_str();
  bench->add_option("--report", report_path, "write the JSON report here");
  bench->add_flag("--json", json_stdout, "print the JSON report instead of the table");
  bench->add_flag("--include-timing", include_timing, "include wall-clock timing in the JSON report");
  bench->add_flag("--parallel", parallel, "run contenders on parallel workers");
  common(bench);

  // synth
  auto* synth = app.add_subcommand("synth", "generate or relabel a dataset");
  SynthFlags synth_flags;
  synth_flags.attach(*synth);
  std::string synth_output = "-", synth_input;
  bool inject_cf = false;
  double inject_rate = 0.01;
  std::size_t aggregate = 1;
  synth->add_option("-o,--output", synth_output, "output CSV path or '-'")->capture_default_str();
  synth->add_flag("--inject-cf", inject_cf, "convert a fraction of --input from Celsius to Fahrenheit");
  synth->add_option("--input", synth_input, "CSV to relabel with --inject-cf");
  synth->add_option("--rate", inject_rate, "fraction of points to convert")->capture_default_str();
  synth->add_option("--aggregate", aggregate, "average blocks of this many input points first (7: daily to weekly)")
      ->capture_default_str();
  common(synth);

  // plotdata
  auto* plot = app.add_subcommand("plotdata", "turn scored output into plot-ready CSV");
  std::string plot_input = "-", plot_output = "-";
  plot->add_option("input", plot_input, "scored JSON lines or CSV, '-' for stdin")->capture_default_str();
  plot->add_option("-o,--output", plot_output, "output path or '-'")->capture_default_str();
  common(plot);

  std::vector<std::string> args;
  try {
    args = detail::expand_config(raw_args);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  try {
    // CLI11 consumes the reversed argument list without the program name.
    std::vector<std::string> rev(args.rbegin(), args.rend());
    if (!rev.empty()) rev.pop_back();
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }
  const bool seed_given = [&] {
    for (auto* sub : {detect, bench, synth, plot}) {
      if (sub->parsed() && sub->count("--seed") > 0) return true;
    }
    return false;
  }();

  try {
    if (detect->parsed()) {
      std::optional<PadDetector> det;
      Tick offset = 0;
      if (!state_in.empty()) {
        det = PadDetector::restore_string(detail::read_all(state_in, in));
        if (det->last_tick()) offset = *det->last_tick() + 1;
      } else {
        const DetectorConfig cfg = detect_model.config();
        require_valid(cfg);
        det.emplace(cfg);
      }
      if (verbose) {
        err << nlohmann::json{{"subcommand", "detect"},
                              {"detector", config_to_json(det->config())},
                              {"input", detect_input},
                              {"format", detect_format},
                              {"resumed", !state_in.empty()},
                              {"seed", seed}}
                   .dump()
            << '\n';
      }
      LabeledSeries series;
      if (detect_input == "-") {
        series = read_csv(in, detect_schema, "stdin");
      } else {
        series = read_csv_file(detect_input, detect_schema);
      }
      detail::OutputTarget target(detect_output, out);
      const bool csv = detect_format == "csv";
      write_scored_header(*target, csv);
      for (auto obs : series.observations) {
        obs.t += offset;
        if (const auto sp = det->score_learn(obs)) write_scored(*target, *sp, csv);
      }
      if (!state_out.empty()) {
        std::ofstream state(state_out);
        if (!state) throw Error(ErrorCode::IoError, "cannot write '" + state_out + "'");
        state << det->snapshot_string() << '\n';
      }
      return kExitOk;
    }

    if (bench->parsed()) {
      bench_opt.detector = bench_model.config();
      bench_opt.baseline.s = bench_opt.detector.s;
      bench_opt.warmup = bench_model.warmup.value_or(800);
      bench_opt.repeats = repeats;
      bench_opt.parallel = parallel;
      require_valid(bench_opt.detector);
      if (repeats < 1) throw ConfigError("--repeats must be >= 1");
      std::vector<Contender> chosen;
      for (auto name : omlad::detail::split_csv(contenders)) {
        if (!name.empty()) chosen.push_back(parse_contender(std::string(name)));
      }

      LabeledSeries series;
      SynthSpec spec;
      if (!bench_input.empty()) {
        CsvSchema schema;
        schema.require_label = !bench_inject.has_value();
        series = read_csv_file(bench_input, schema);
      } else if (!nab_input.empty()) {
        if (nab_windows.empty()) throw ConfigError("--nab needs --windows");
        std::ifstream csv(nab_input);
        if (!csv) throw Error(ErrorCode::IoError, "cannot open '" + nab_input + "'");
        series = read_nab(csv, parse_label_windows(detail::read_all(nab_windows, in), nab_key), nab_input);
      } else {
        spec = bench_synth.resolve(seed, seed_given);
        series = generate_synthetic(spec);
      }
      if (bench_inject) series = inject_c_to_f(std::move(series), *bench_inject, seed);
      if (verbose) {
        err << report_to_json({}, series, bench_opt, include_timing)["config"].dump() << '\n';
      }
      const auto reports = run_benchmark(series, chosen, bench_opt);
      const auto report = report_to_json(reports, series, bench_opt, include_timing);
      if (!report_path.empty()) {
        std::ofstream f(report_path);
        if (!f) throw Error(ErrorCode::IoError, "cannot write '" + report_path + "'");
        f << report.dump(2) << '\n';
      }
      if (json_stdout) {
        out << report.dump(2) << '\n';
      } else {
        print_table(out, reports);
      }
      return kExitOk;
    }

    if (synth->parsed()) {
      LabeledSeries series;
      std::string kind = "none";
      if (inject_cf) {
        if (synth_input.empty()) throw ConfigError("--inject-cf needs --input");
        series = read_csv_file(synth_input);
        if (aggregate > 1) series = aggregate_mean(series, aggregate);
        series = inject_c_to_f(std::move(series), inject_rate, seed);
      } else {
        if (!synth_input.empty()) throw ConfigError("--input is only used with --inject-cf");
        const SynthSpec spec = synth_flags.resolve(seed, seed_given);
        kind = drift_kind(spec.drift);
        series = generate_synthetic(spec);
      }
      if (verbose) err << nlohmann::json{{"subcommand", "synth"}, {"seed", seed}, {"drift", kind}}.dump() << '\n';
      detail::OutputTarget target(synth_output, out);
      write_csv(*target, series);
      std::ostream& summary = (synth_output == "-") ? err : out;
      summary << "n=" << series.size() << " anomalies=" << series.anomaly_count() << " drift=" << kind << '\n';
      return kExitOk;
    }

    if (plot->parsed()) {
      if (verbose) err << nlohmann::json{{"subcommand", "plotdata"}, {"input", plot_input}}.dump() << '\n';
      const auto rows = parse_scored(detail::read_all(plot_input, in));
      detail::OutputTarget target(plot_output, out);
      write_plot_rows(*target, rows);
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return is_config_error(e.code()) ? kExitConfig : kExitData;
  }
  return kExitOk;
}

inline int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  return run(std::vector<std::string>(argv, argv + argc), in, out, err);
}

}  // namespace omlad::cli
