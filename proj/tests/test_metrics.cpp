#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "dereverb/diagnostics.hpp"
#include "dereverb/errors.hpp"
#include "dereverb/metrics.hpp"
#include "oracles.hpp"
#include "test_util.hpp"
#include "json.hpp"

using namespace dereverb;

TEST(Lpa, IdenticalIsZero) {
  const Signal z(oracle::white_noise(1000, 70), 8000.0);
  EXPECT_EQ(lpa(z, z), 0.0);
}

TEST(Lpa, HalfAmplitudeWithArbitraryMean) {
  const auto v = oracle::white_noise(1000, 71);
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= v.size();
  std::vector<double> after(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) after[i] = 0.5 * (v[i] - mean) + 3.7;
  EXPECT_NEAR(lpa(Signal(v, 1.0), Signal(after, 1.0)), -6.020599913279624, 1e-9);
}

TEST(Lpa, AntisymmetricAndOffsetInvariant) {
  const Signal a(oracle::white_noise(500, 72), 1.0);
  const Signal b(oracle::white_noise(500, 73, 0.3), 1.0);
  EXPECT_NEAR(lpa(a, b), -lpa(b, a), 1e-12);
  std::vector<double> shifted(b.samples().begin(), b.samples().end());
  for (auto& x : shifted) x += 0.25;
  EXPECT_NEAR(lpa(a, Signal(shifted, 1.0)), lpa(a, b), 1e-10);
}

TEST(Lpa, TrimsWithWarningAndRejectsSilence) {
  std::vector<std::string> msgs;
  ScopedWarningCapture cap([&](std::string_view m) { msgs.emplace_back(m); });
  const auto v = oracle::white_noise(100, 74);
  std::vector<double> longer(v);
  longer.resize(150, 5.0);
  EXPECT_NEAR(lpa(Signal(v, 1.0), Signal(longer, 1.0)), 0.0, 1e-12);
  EXPECT_EQ(msgs.size(), 1u);
  try {
    lpa(Signal(std::vector<double>(10, 0.0), 1.0), Signal(v, 1.0));
    FAIL();
  } catch (const ParameterError& e) {
    EXPECT_NE(std::string(e.what()).find("silent reference"), std::string::npos);
  }
}

TEST(D50, DeltaIsHundred) {
  std::vector<double> h(1000, 0.0);
  h[0] = 1.0;
  EXPECT_EQ(d50(ImpulseResponse(h, 8000.0)), 100.0);
}

TEST(D50, TwoEqualTapsAreFifty) {
  const double fs = 8000.0;
  std::vector<double> h(2000, 0.0);
  const std::size_t onset = 37;
  h[onset] = 0.001;  // below 1 % of peak
  h[onset + 79] = 0.5;
  h[onset + 80] = 1.0;
  h[onset + 800] = 1.0;
  ImpulseResponse ir(h, fs);
  EXPECT_EQ(ir_onset(ir), onset + 79);
  // Energy: 0.25 + 1 early, 1 late, 1e-6 before onset.
  EXPECT_NEAR(d50(ir), 100.0 * 1.25 / (2.25 + 1e-6), 1e-9);

  std::vector<double> two(2000, 0.0);
  two[80] = 1.0;   // 10 ms, becomes the onset
  two[800] = 1.0;  // 100 ms
  EXPECT_NEAR(d50(ImpulseResponse(two, fs)), 50.0, 1e-12);
}

TEST(D50, RangeAndSupport) {
  const auto v = oracle::white_noise(3000, 75);
  const double d = d50(ImpulseResponse(v, 8000.0));
  EXPECT_GE(d, 0.0);
  EXPECT_LE(d, 100.0);
  std::vector<double> short_ir(v.begin(), v.begin() + 399);
  EXPECT_DOUBLE_EQ(d50(ImpulseResponse(short_ir, 8000.0)), 100.0);
  EXPECT_THROW(d50(ImpulseResponse(std::vector<double>(5, 0.0), 8000.0)),
               ParameterError);
}

TEST(SignalStats, Silence) {
  const auto s = signal_stats(Signal(std::vector<double>(800, 0.0), 8000.0));
  EXPECT_TRUE(std::isinf(s.dc_offset_db) && s.dc_offset_db < 0);
  EXPECT_TRUE(std::isinf(s.peak_amplitude_db) && s.peak_amplitude_db < 0);
  EXPECT_TRUE(std::isinf(s.min_rms_db) && s.min_rms_db < 0);
}

TEST(SignalStats, ConstantHalf) {
  const auto s = signal_stats(Signal(std::vector<double>(800, 0.5), 8000.0));
  EXPECT_EQ(s.min_sample, 0.5);
  EXPECT_EQ(s.max_sample, 0.5);
  EXPECT_NEAR(s.dc_offset_db, -6.020599913279624, 1e-12);
  EXPECT_NEAR(s.avg_rms_db, -6.020599913279624, 1e-12);
}

TEST(SignalStats, FullScaleSquareWave) {
  std::vector<double> sq(8000);
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = (i / 20) % 2 ? -1.0 : 1.0;
  const auto s = signal_stats(Signal(sq, 8000.0));
  EXPECT_EQ(s.peak_amplitude_db, 0.0);
  EXPECT_EQ(s.min_rms_db, 0.0);
  EXPECT_EQ(s.max_rms_db, 0.0);
  EXPECT_EQ(s.avg_rms_db, 0.0);
}

TEST(SignalStats, SilentWindowsExcludedFromMinimum) {
  std::vector<double> v(1200, 0.0);
  for (std::size_t i = 0; i < 400; ++i) v[i] = 0.5;
  const auto s = signal_stats(Signal(v, 8000.0));
  EXPECT_NEAR(s.min_rms_db, -6.020599913279624, 1e-12);
  EXPECT_NEAR(s.avg_rms_db, 10.0 * std::log10(0.25 / 3.0), 1e-12);
  EXPECT_LE(s.peak_amplitude_db, 0.0);
}

TEST(MetricsJson, InfinityIsAString) {
  TempDir dir;
  MetricsReport r;
  r.lpa_db = -3.5;
  r.d50_percent_after = 100.0;
  r.stats_before.dc_offset_db = -INFINITY;
  write_metrics_json(dir / "m.json", r);
  const auto j = nlohmann::json::parse(slurp(dir / "m.json"));
  EXPECT_EQ(j["lpa_db"], -3.5);
  EXPECT_TRUE(j["d50_percent_before"].is_null());
  EXPECT_EQ(j["d50_percent_after"], 100.0);
  EXPECT_EQ(j["stats_before"]["dc_offset_db"], "-inf");
  for (const char* key : {"lpa_db", "d50_percent_before", "d50_percent_after",
                          "t60_broadband_before_s", "t60_broadband_after_s",
                          "stats_before", "stats_after"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
}
