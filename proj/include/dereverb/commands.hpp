#pragma once

#include <filesystem>
#include <optional>

#include "dereverb/config.hpp"
#include "dereverb/metrics.hpp"

namespace dereverb {

namespace fs = std::filesystem;

// File-to-file front ends. Each reads its inputs, runs one stage and writes
// its outputs; errors surface as the exceptions in errors.hpp. Input WAVs
// must use config.sample_rate.

struct ChirpReport {
  double duration_s = 0.0;
  std::size_t period_samples = 0;
  bool period_rounded = false;
};
ChirpReport cmd_chirp(const PipelineConfig& config, const fs::path& out_wav);

// Writes out_ir (float32 WAV) and the sidecar out_ir with extension .json.
void cmd_identify(const fs::path& x_wav, const fs::path& y_wav,
                  const PipelineConfig& config, const fs::path& out_ir);

void cmd_t60(const fs::path& in_wav, const PipelineConfig& config,
             const fs::path& out_csv);

void cmd_shape(const fs::path& ir_wav, const fs::path& t60_x_csv,
               const fs::path& t60_y_csv, const PipelineConfig& config,
               const fs::path& out_ir, const fs::path& out_decay_csv);

void cmd_filter(const fs::path& z_wav, const fs::path& ir_wav,
                const PipelineConfig& config, const fs::path& out_wav);

MetricsReport cmd_metrics(const fs::path& before_wav,
                          const fs::path& after_wav,
                          const std::optional<fs::path>& ir_before,
                          const std::optional<fs::path>& ir_after,
                          const PipelineConfig& config,
                          const fs::path& out_json);

void cmd_simulate(const fs::path& dry_wav, const fs::path& channel_json,
                  const fs::path& out_wet, const fs::path& out_true_ir);

// Artifact names written by cmd_pipeline inside outdir.
struct PipelineArtifacts {
  static constexpr const char* kIr = "ir.wav";
  static constexpr const char* kT60X = "t60_x.csv";
  static constexpr const char* kT60Y = "t60_y.csv";
  static constexpr const char* kShapedIr = "ir_shaped.wav";
  static constexpr const char* kDecay = "decay.csv";
  static constexpr const char* kFiltered = "filtered.wav";
  static constexpr const char* kMetrics = "metrics.json";
  static constexpr const char* kConfig = "config.json";
};

// identify -> t60(x), t60(y) -> shape -> filter -> metrics, each stage
// reading the previous stage's files.
MetricsReport cmd_pipeline(const fs::path& x_wav, const fs::path& y_wav,
                           const fs::path& z_wav, const PipelineConfig& config,
                           const fs::path& outdir);

}  // namespace dereverb
