#include "dereverb/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "dereverb/diagnostics.hpp"
#include "dereverb/errors.hpp"
#include "dereverb/t60.hpp"
#include "json.hpp"

namespace dereverb {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double power_db(double p) { return p > 0.0 ? 10.0 * std::log10(p) : -kInf; }
double amplitude_db(double a) {
  return a > 0.0 ? 20.0 * std::log10(a) : -kInf;
}

double variance(std::span<const double> s) {
  double mean = 0.0;
  for (double v : s) mean += v;
  mean /= static_cast<double>(s.size());
  double acc = 0.0;
  for (double v : s) acc += (v - mean) * (v - mean);
  return acc / static_cast<double>(s.size());
}

nlohmann::json number(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  if (std::isnan(v)) return "nan";
  return v;
}

nlohmann::json stats_json(const SignalStats& s) {
  return {
      {"min_sample", number(s.min_sample)},
      {"max_sample", number(s.max_sample)},
      {"peak_amplitude_db", number(s.peak_amplitude_db)},
      {"dc_offset_db", number(s.dc_offset_db)},
      {"min_rms_db", number(s.min_rms_db)},
      {"max_rms_db", number(s.max_rms_db)},
      {"avg_rms_db", number(s.avg_rms_db)},
  };
}

}  // namespace

double lpa(const Signal& before, const Signal& after) {
  std::size_t n = before.size();
  if (after.size() != n) {
    n = std::min(n, after.size());
    std::ostringstream os;
    os << "lpa: lengths differ (" << before.size() << " vs " << after.size()
       << "), trimming to " << n;
    warn(os.str());
  }
  const double v_before = variance(before.samples().first(n));
  if (!(v_before > 0.0)) throw ParameterError("lpa: silent reference");
  const double v_after = variance(after.samples().first(n));
  return 10.0 * std::log10(v_after / v_before);
}

std::size_t ir_onset(const ImpulseResponse& h) {
  const double peak = peak_abs(h.taps());
  if (!(peak > 0.0)) throw ParameterError("d50: all-zero impulse response");
  const double level = kD50OnsetFraction * peak;
  for (std::size_t n = 0; n < h.size(); ++n) {
    if (std::abs(h[n]) >= level) return n;
  }
  return 0;
}

double d50(const ImpulseResponse& h) {
  const std::size_t onset = ir_onset(h);
  const double window = kD50WindowSeconds * h.sample_rate();
  double early = 0.0;
  double total = 0.0;
  for (std::size_t n = 0; n < h.size(); ++n) {
    const double e = h[n] * h[n];
    total += e;
    if (n >= onset && static_cast<double>(n - onset) < window) early += e;
  }
  return 100.0 * early / total;
}

SignalStats signal_stats(const Signal& s, double rms_window_s) {
  if (!(rms_window_s > 0.0)) {
    throw ParameterError("signal_stats: rms window must be positive");
  }
  SignalStats st;
  const auto x = s.samples();
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  st.min_sample = *lo;
  st.max_sample = *hi;
  st.peak_amplitude_db =
      amplitude_db(std::max(std::abs(st.min_sample), std::abs(st.max_sample)));

  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  st.dc_offset_db = amplitude_db(std::abs(mean));

  const auto win = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(rms_window_s * s.sample_rate())));
  double min_p = kInf;
  double max_p = 0.0;
  double sum_p = 0.0;
  std::size_t windows = 0;
  for (std::size_t begin = 0; begin < x.size(); begin += win) {
    const std::size_t end = std::min(x.size(), begin + win);
    double acc = 0.0;
    for (std::size_t n = begin; n < end; ++n) acc += x[n] * x[n];
    const double p = acc / static_cast<double>(end - begin);
    if (p > 0.0) min_p = std::min(min_p, p);
    max_p = std::max(max_p, p);
    sum_p += p;
    ++windows;
  }
  st.min_rms_db = std::isinf(min_p) ? -kInf : power_db(min_p);
  st.max_rms_db = power_db(max_p);
  st.avg_rms_db = power_db(sum_p / static_cast<double>(windows));
  return st;
}

MetricsReport compute_metrics(const Signal& before, const Signal& after,
                              const FrameParams& t60_params,
                              double t60_threshold,
                              const ImpulseResponse* ir_before,
                              const ImpulseResponse* ir_after) {
  MetricsReport r;
  r.lpa_db = lpa(before, after);
  if (ir_before != nullptr) r.d50_percent_before = d50(*ir_before);
  if (ir_after != nullptr) r.d50_percent_after = d50(*ir_after);
  r.t60_broadband_before_s = t60_broadband(before, t60_params, t60_threshold);
  r.t60_broadband_after_s = t60_broadband(after, t60_params, t60_threshold);
  r.stats_before = signal_stats(before);
  r.stats_after = signal_stats(after);
  return r;
}

void write_metrics_json(const std::filesystem::path& path,
                        const MetricsReport& report) {
  nlohmann::json j;
  j["lpa_db"] = number(report.lpa_db);
  j["d50_percent_before"] = report.d50_percent_before
                                ? number(*report.d50_percent_before)
                                : nlohmann::json(nullptr);
  j["d50_percent_after"] = report.d50_percent_after
                               ? number(*report.d50_percent_after)
                               : nlohmann::json(nullptr);
  j["t60_broadband_before_s"] = number(report.t60_broadband_before_s);
  j["t60_broadband_after_s"] = number(report.t60_broadband_after_s);
  j["stats_before"] = stats_json(report.stats_before);
  j["stats_after"] = stats_json(report.stats_after);
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace dereverb
