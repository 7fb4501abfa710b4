#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>

#include "dereverb/signal.hpp"
#include "dereverb/spectral.hpp"

namespace dereverb {

struct ChirpSettings {
  double f0_hz = 20.0;
  // Unset means the Nyquist frequency.
  std::optional<double> f1_hz;
  double duration_s = 2.0;
  int periods = 3;

  bool operator==(const ChirpSettings&) const = default;
};

// Every tunable of the toolkit. Unset n_dft / n_hop resolve to 5 * f_s and
// n_dft / 2.
struct PipelineConfig {
  double sample_rate = 48000.0;
  ChirpSettings chirp;
  std::optional<std::size_t> n_dft;
  std::optional<std::size_t> n_hop;
  double epsilon_analysis = 1e-10;
  double epsilon_filter = 1e-6;
  double t60_threshold = 0.001;
  double rho_floor = 1e-6;
  double dk = 0.0;

  std::size_t resolved_n_dft() const;
  std::size_t resolved_n_hop() const;
  ChirpSpec chirp_spec() const;

  // Rectangular forward framing for identification and T60 analysis.
  FrameParams analysis_params() const;
  // Centred Hann framing for IR shaping.
  FrameParams shaping_params() const;

  // Throws ParameterError naming the offending field.
  void validate() const;

  bool operator==(const PipelineConfig&) const = default;
};

std::string config_to_json(const PipelineConfig& c);
// Missing keys keep the values already in `base`.
PipelineConfig config_from_json(const std::string& text,
                                const PipelineConfig& base = {});
PipelineConfig load_config(const std::filesystem::path& path,
                           const PipelineConfig& base = {});
void save_config(const std::filesystem::path& path, const PipelineConfig& c);

}  // namespace dereverb
