#include <gtest/gtest.h>

#include <cstring>
#include <set>
#include <sstream>

#include "omlad/dataio.hpp"
#include "omlad/rng.hpp"
#include "support.hpp"

using namespace omlad;

namespace {

LabeledSeries parse(const std::string& text, const CsvSchema& schema = {}) {
  std::istringstream in(text);
  return read_csv(in, schema);
}

LabeledSeries constant_series(std::size_t n, double v) {
  LabeledSeries s;
  for (std::size_t i = 0; i < n; ++i) {
    s.observations.push_back({static_cast<Tick>(i), v + static_cast<double>(i % 17), false});
    s.timestamps.push_back(std::to_string(i));
  }
  return s;
}

std::uint64_t bits_of(double x) {
  std::uint64_t b;
  std::memcpy(&b, &x, sizeof b);
  return b;
}

}  // namespace

TEST(Rng, SplitMixReferenceOutput) {
  SplitMix64 sm(0);
  EXPECT_EQ(sm.next(), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(sm.next(), 0x6E789E6AA1B965F4ULL);
}

TEST(Rng, XoshiroMatchesReferenceStep) {
  // Reference xoshiro256** transcribed independently of the library.
  std::uint64_t s[4];
  SplitMix64 sm(42);
  for (auto& w : s) w = sm.next();
  auto rotl = [](std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
  Rng rng(42);
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t expected = rotl(s[1] * 5, 7) * 9;
    const std::uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], 45);
    ASSERT_EQ(rng.next(), expected) << i;
  }
}

TEST(Rng, DrawsAreInRangeAndReproducible) {
  Rng a(7), b(7);
  for (int i = 0; i < 10000; ++i) {
    const double u = a.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_EQ(bits_of(u), bits_of(b.uniform01()));
    ASSERT_LT(a.uniform_index(13), 13u);
    b.uniform_index(13);
    ASSERT_EQ(bits_of(a.normal()), bits_of(b.normal()));
  }
}

TEST(Rng, NormalHasUnitMoments) {
  Rng rng(3);
  double sum = 0.0, sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sq += z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sq / n, 1.0, 0.015);
}

TEST(ReadCsv, ThreeRows) {
  const auto s = parse("time,value\n2020-01-01,1.5\n2020-01-02,2\n2020-01-03,-3e2\n");
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s.observations[2].value, -300.0);
  EXPECT_EQ(s.observations[1].t, 1);
  EXPECT_EQ(s.timestamps[0], "2020-01-01");
  EXPECT_EQ(s.anomaly_count(), 0u);
  for (const auto& o : s.observations) EXPECT_EQ(o.label, false);
}

TEST(ReadCsv, LabelsAndCommentsAndCustomColumns) {
  CsvSchema schema;
  schema.time_column = "ts";
  schema.value_column = "temp";
  schema.label_column = "anomaly";
  const auto s = parse("# exported\nts,temp,anomaly\n1,10,0\n\n# gap\n2,11,1\n3,12,0\n", schema);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s.labels(), (std::vector<bool>{false, true, false}));
}

TEST(ReadCsv, NonFiniteValueCarriesRow) {
  try {
    parse("time,value\n1,1\n2,NaN\n3,3\n");
    FAIL() << "expected NonFiniteValue";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonFiniteValue);
    EXPECT_EQ(e.row(), 2u);
    EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos) << e.what();
  }
  EXPECT_OMLAD_ERROR(parse("time,value\n1,inf\n"), ErrorCode::NonFiniteValue);
}

TEST(ReadCsv, MalformedInputs) {
  EXPECT_OMLAD_ERROR(parse("time,val\n1,2\n"), ErrorCode::MissingColumn);
  EXPECT_OMLAD_ERROR(parse(""), ErrorCode::MissingColumn);
  CsvSchema need_label;
  need_label.require_label = true;
  EXPECT_OMLAD_ERROR(parse("time,value\n1,2\n", need_label), ErrorCode::MissingColumn);
  EXPECT_OMLAD_ERROR(parse("time,value\n1,abc\n"), ErrorCode::ParseError);
  EXPECT_OMLAD_ERROR(parse("time,value\n1,2,3\n"), ErrorCode::ParseError);
  EXPECT_OMLAD_ERROR(parse("time,value,label\n1,2,yes\n"), ErrorCode::ParseError);
  EXPECT_OMLAD_ERROR(parse("time,value\n2,1\n1,2\n"), ErrorCode::NonMonotoneTime);
  EXPECT_OMLAD_ERROR(parse("time,value\n1,1\n1,2\n"), ErrorCode::NonMonotoneTime);
  try {
    parse("time,value\n1,1\n2,2\n3,x\n");
  } catch (const Error& e) {
    EXPECT_EQ(e.row(), 3u);
  }
}

TEST(ReadCsv, RoundTripPreservesFullPrecision) {
  Rng rng(5);
  LabeledSeries s;
  for (int i = 0; i < 500; ++i) {
    const double v = (rng.uniform01() - 0.5) * std::pow(10.0, static_cast<double>(rng.uniform_index(40)) - 20.0);
    s.observations.push_back({i, v, rng.bernoulli(0.1)});
    s.timestamps.push_back(std::to_string(1000 + i));
  }
  std::ostringstream out;
  write_csv(out, s);
  const auto back = parse(out.str());
  ASSERT_EQ(back.size(), s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    ASSERT_EQ(bits_of(back.observations[i].value), bits_of(s.observations[i].value)) << i;
    ASSERT_EQ(back.observations[i].label, s.observations[i].label);
    ASSERT_EQ(back.timestamps[i], s.timestamps[i]);
  }
}

TEST(Nab, LabelsExactlyInsideWindows) {
  const std::string csv =
      "timestamp,value\n"
      "2014-04-01 00:00:00,1\n"
      "2014-04-01 00:05:00,2\n"
      "2014-04-01 00:10:00,3\n"
      "2014-04-01 00:15:00,4\n"
      "2014-04-01 00:20:00,5\n"
      "2014-04-01 00:25:00,6\n";
  const std::string windows = R"({
    "realKnownCause/machine_temperature.csv": [
      ["2014-04-01 00:05:00.000000", "2014-04-01 00:10:00.000000"],
      ["2014-04-01T00:25:00Z", "2014-04-01 00:30:00"]
    ],
    "other/series.csv": []
  })";
  const auto w = parse_label_windows(windows, "machine_temperature.csv");
  ASSERT_EQ(w.size(), 2u);
  EXPECT_EQ(w[0].start, "2014-04-01 00:05:00");
  std::istringstream in(csv);
  const auto s = read_nab(in, w);
  EXPECT_EQ(s.labels(), (std::vector<bool>{false, true, true, false, false, true}));
  EXPECT_EQ(s.meta.source, "nab");
}

TEST(Nab, WindowDocumentErrors) {
  EXPECT_EQ(parse_label_windows(R"([["a","b"]])").size(), 1u);
  EXPECT_OMLAD_ERROR(parse_label_windows("{not json"), ErrorCode::ParseError);
  EXPECT_OMLAD_ERROR(parse_label_windows(R"({"x.csv": []})", "y.csv"), ErrorCode::MissingColumn);
  EXPECT_OMLAD_ERROR(parse_label_windows(R"([["a"]])"), ErrorCode::ParseError);
  EXPECT_OMLAD_ERROR(parse_label_windows(R"({"a/x.csv": [], "b/x.csv": []})", "x.csv"), ErrorCode::ParseError);
}

TEST(InjectCtoF, ConversionExamples) {
  EXPECT_EQ(celsius_to_fahrenheit(0.0), 32.0);
  EXPECT_EQ(celsius_to_fahrenheit(100.0), 212.0);
  EXPECT_EQ(celsius_to_fahrenheit(-40.0), -40.0);
}

TEST(InjectCtoF, FixedPointIsStillLabeled) {
  LabeledSeries s;
  for (int i = 0; i < 10; ++i) s.observations.push_back({i, -40.0, false});
  const auto out = inject_c_to_f(s, 0.5, 1);
  EXPECT_EQ(out.anomaly_count(), 5u);
  for (const auto& o : out.observations) EXPECT_EQ(o.value, -40.0);
}

TEST(InjectCtoF, CountDeterminismAndUntouchedPoints) {
  const auto s = constant_series(1000, 12.5);
  const auto a = inject_c_to_f(s, 0.01, 77);
  const auto b = inject_c_to_f(s, 0.01, 77);
  EXPECT_EQ(a.anomaly_count(), 10u);
  ASSERT_EQ(a.size(), s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_EQ(bits_of(a.observations[i].value), bits_of(b.observations[i].value));
    EXPECT_EQ(a.observations[i].label, b.observations[i].label);
    const double orig = s.observations[i].value;
    if (*a.observations[i].label) {
      EXPECT_EQ(a.observations[i].value, celsius_to_fahrenheit(orig));
    } else {
      EXPECT_EQ(bits_of(a.observations[i].value), bits_of(orig));
    }
  }
  EXPECT_NE(inject_c_to_f(s, 0.01, 78).labels(), a.labels());
}

TEST(InjectCtoF, RateMustBeInOpenUnitInterval) {
  const auto s = constant_series(10, 1.0);
  for (double r : {0.0, 1.0, -0.1, 2.0, std::nan("")}) {
    EXPECT_OMLAD_ERROR(inject_c_to_f(s, r, 0), ErrorCode::RateOutOfRange);
  }
}

TEST(SampleIndices, DistinctAndInRange) {
  Rng rng(9);
  const auto idx = sample_indices(100, 40, rng);
  EXPECT_EQ(idx.size(), 40u);
  std::set<std::size_t> uniq(idx.begin(), idx.end());
  EXPECT_EQ(uniq.size(), 40u);
  EXPECT_LT(*uniq.rbegin(), 100u);
}

TEST(Synthetic, ConstantLevel) {
  SynthSpec spec;
  spec.noise_std = 0.0;
  spec.level = 5.0;
  const auto s = generate_synthetic(spec);
  ASSERT_EQ(s.size(), 1000u);
  for (const auto& o : s.observations) EXPECT_EQ(o.value, 5.0);
}

TEST(Synthetic, SuddenDriftShiftsMean) {
  SynthSpec spec;
  spec.noise_std = 0.0;
  spec.level = 1.0;
  spec.drift = SuddenDrift{500, 10.0};
  const auto v = generate_synthetic(spec).values();
  double before = 0.0, after = 0.0;
  for (int t = 0; t < 500; ++t) before += v[t];
  for (int t = 600; t < 1000; ++t) after += v[t];
  EXPECT_EQ(after / 400.0 - before / 500.0, 10.0);
}

TEST(Synthetic, IncrementalDriftRamps) {
  SynthSpec spec;
  spec.drift = IncrementalDrift{100, 200, 5.0};
  EXPECT_EQ(drift_term(spec.drift, 99), 0.0);
  EXPECT_EQ(drift_term(spec.drift, 100), 0.0);
  EXPECT_EQ(drift_term(spec.drift, 150), 2.5);
  EXPECT_EQ(drift_term(spec.drift, 200), 5.0);
  EXPECT_EQ(drift_term(spec.drift, 900), 5.0);
}

TEST(Synthetic, NoiseFreeEqualsClosedForm) {
  SynthSpec spec;
  spec.n = 700;
  spec.noise_std = 0.0;
  spec.level = -2.0;
  spec.trend = 0.01;
  spec.amplitude = 3.0;
  spec.period = 52;
  spec.drift = IncrementalDrift{100, 400, 7.0};
  const auto s = generate_synthetic(spec);
  for (std::int64_t t = 0; t < spec.n; ++t) {
    const double td = static_cast<double>(t);
    const double ramp = t < 100 ? 0.0 : t >= 400 ? 7.0 : 7.0 * static_cast<double>(t - 100) / 300.0;
    const double expected = -2.0 + 0.01 * td + 3.0 * std::sin(2.0 * std::numbers::pi * td / 52.0) + ramp;
    ASSERT_EQ(bits_of(s.observations[t].value), bits_of(expected)) << t;
  }
}

TEST(Synthetic, SeedDeterminesSeries) {
  SynthSpec spec;
  spec.anomaly_rate = 0.02;
  spec.seed = 11;
  const auto a = generate_synthetic(spec);
  const auto b = generate_synthetic(spec);
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_EQ(bits_of(a.observations[i].value), bits_of(b.observations[i].value));
    ASSERT_EQ(a.observations[i].label, b.observations[i].label);
  }
  EXPECT_EQ(a.anomaly_count(), 20u);
  spec.seed = 12;
  EXPECT_NE(generate_synthetic(spec).values(), a.values());
}

TEST(Synthetic, SpikesAreSignedMultiplesOfNoise) {
  SynthSpec spec;
  spec.noise_std = 0.0;
  spec.level = 3.0;
  spec.anomaly_rate = 0.05;
  spec.anomaly_magnitude = 4.0;
  const auto s = generate_synthetic(spec);
  for (const auto& o : s.observations) {
    if (*o.label) {
      EXPECT_TRUE(o.value == 7.0 || o.value == -1.0) << o.value;
    } else {
      EXPECT_EQ(o.value, 3.0);
    }
  }
}

TEST(Synthetic, InvalidSpecs) {
  auto bad = [](auto mutate) {
    SynthSpec spec;
    mutate(spec);
    EXPECT_OMLAD_ERROR(generate_synthetic(spec), ErrorCode::InvalidSpec);
  };
  bad([](SynthSpec& s) { s.n = 0; });
  bad([](SynthSpec& s) { s.period = 0; });
  bad([](SynthSpec& s) { s.noise_std = -1.0; });
  bad([](SynthSpec& s) { s.anomaly_rate = 1.0; });
  bad([](SynthSpec& s) { s.drift = SuddenDrift{1000, 1.0}; });
  bad([](SynthSpec& s) { s.drift = IncrementalDrift{10, 5, 1.0}; });
}

TEST(SynthSpecFile, ParsesKeyValueLines) {
  std::istringstream in(
      "# drifting weekly series\n"
      "n = 300\nlevel = 10  # celsius\namplitude=2\nperiod=52\nnoise_std=0.5\n"
      "drift = sudden\ndrift_at = 150\ndrift_delta = 4\nanomaly_rate = 0.02\nseed = 3\nname = demo\n");
  const auto spec = parse_synth_spec(in);
  EXPECT_EQ(spec.n, 300);
  EXPECT_EQ(spec.level, 10.0);
  EXPECT_EQ(spec.noise_std, 0.5);
  EXPECT_EQ(spec.seed, 3u);
  EXPECT_EQ(spec.name, "demo");
  ASSERT_TRUE(std::holds_alternative<SuddenDrift>(spec.drift));
  EXPECT_EQ(std::get<SuddenDrift>(spec.drift).at, 150);
  EXPECT_EQ(drift_kind(spec.drift), "sudden");
}

TEST(SynthSpecFile, RejectsBadLines) {
  for (const char* text : {"n 300\n", "colour = red\n", "n = 1.5\n", "drift = sideways\n", "level = abc\n",
                           "n = 10\ndrift = sudden\ndrift_at = 20\n"}) {
    std::istringstream in(text);
    EXPECT_OMLAD_ERROR(parse_synth_spec(in), ErrorCode::InvalidSpec);
  }
}

TEST(AggregateMean, WeeklyBlocks) {
  LabeledSeries daily;
  for (int i = 0; i < 16; ++i) {
    daily.observations.push_back({i, static_cast<double>(i), i == 9});
    daily.timestamps.push_back("d" + std::to_string(i));
  }
  const auto weekly = aggregate_mean(daily, 7);
  ASSERT_EQ(weekly.size(), 2u);
  EXPECT_EQ(weekly.observations[0].value, 3.0);
  EXPECT_EQ(weekly.observations[1].value, 10.0);
  EXPECT_EQ(weekly.labels(), (std::vector<bool>{false, true}));
  EXPECT_EQ(weekly.timestamps[1], "d7");
  EXPECT_OMLAD_ERROR(aggregate_mean(daily, 0), ErrorCode::InvalidSpec);
}
