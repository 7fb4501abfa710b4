#pragma once

#include <filesystem>
#include <optional>

#include "dereverb/signal.hpp"
#include "dereverb/spectral.hpp"

namespace dereverb {

// 10 log10(var(after) / var(before)) with mean-removed powers. Unequal
// lengths are trimmed to the shorter one with a warning. Throws
// ParameterError("silent reference") when var(before) == 0.
double lpa(const Signal& before, const Signal& after);

inline constexpr double kD50WindowSeconds = 0.05;
inline constexpr double kD50OnsetFraction = 0.01;

// Index of the first tap with |tap| >= 1 % of the peak.
std::size_t ir_onset(const ImpulseResponse& h);

// Percentage of tap energy in [onset, onset + 50 ms). Throws ParameterError
// for an all-zero IR.
double d50(const ImpulseResponse& h);

struct SignalStats {
  double min_sample = 0.0;
  double max_sample = 0.0;
  double peak_amplitude_db = 0.0;
  double dc_offset_db = 0.0;
  double min_rms_db = 0.0;
  double max_rms_db = 0.0;
  double avg_rms_db = 0.0;
};

inline constexpr double kDefaultRmsWindowSeconds = 0.05;

// RMS statistics use non-overlapping windows of rms_window_s (the last one
// may be shorter). Silent windows are left out of the minimum; the average
// is 10 log10 of the mean window power. Zero levels are -inf.
SignalStats signal_stats(const Signal& s,
                         double rms_window_s = kDefaultRmsWindowSeconds);

struct MetricsReport {
  double lpa_db = 0.0;
  std::optional<double> d50_percent_before;
  std::optional<double> d50_percent_after;
  double t60_broadband_before_s = 0.0;
  double t60_broadband_after_s = 0.0;
  SignalStats stats_before;
  SignalStats stats_after;
};

MetricsReport compute_metrics(const Signal& before, const Signal& after,
                              const FrameParams& t60_params,
                              double t60_threshold,
                              const ImpulseResponse* ir_before = nullptr,
                              const ImpulseResponse* ir_after = nullptr);

// Infinite values are written as the strings "-inf" / "inf"; absent D50
// values as null.
void write_metrics_json(const std::filesystem::path& path,
                        const MetricsReport& report);

}  // namespace dereverb
