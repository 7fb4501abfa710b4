#pragma once

#include <filesystem>

#include "dereverb/signal.hpp"

namespace dereverb {

enum class SampleFormat { kPcm16, kPcm24, kFloat32 };

struct WavInfo {
  SampleFormat format = SampleFormat::kFloat32;
  int channels = 1;
};

// Reads a mono WAV (16/24-bit integer PCM or 32-bit float). Integer samples
// are mapped to [-1, 1) by dividing by 2^(bits-1). Multi-channel files
// yield channel 0 and emit a warning. Throws IoError on malformed input.
Signal read_wav(const std::filesystem::path& path, WavInfo* info = nullptr);

// Integer formats clamp to the representable range; float32 is written as is.
void write_wav(const std::filesystem::path& path, const Signal& signal,
               SampleFormat format = SampleFormat::kFloat32);

}  // namespace dereverb
