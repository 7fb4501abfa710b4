#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "dereverb/signal.hpp"

namespace dereverb {

struct ChannelEcho {
  double delay_s = 0.0;
  double gain = 0.0;
};

// Band-limited exponential tail: white Gaussian noise restricted to
// [f_lo_hz, f_hi_hz], scaled to unit RMS, multiplied by
// gain * 10^(-3 t / t60_s) so its amplitude falls 60 dB after t60_s.
// t is measured from the direct path.
struct ChannelTail {
  double f_lo_hz = 0.0;
  double f_hi_hz = 0.0;
  double t60_s = 0.0;
  double gain = 0.0;
};

// Synthetic room channel. Without length_s the IR runs to the latest echo
// or the end of the longest tail, whichever is later.
struct ChannelSpec {
  std::optional<double> length_s;
  double direct_gain = 1.0;
  double direct_delay_s = 0.0;
  std::vector<ChannelEcho> echoes;
  std::vector<ChannelTail> tails;
  std::uint64_t seed = 0;

  // Throws ParameterError for negative delays, bad bands, t60 <= 0 or a
  // feature outside length_s.
  void validate(double sample_rate) const;
};

ChannelSpec parse_channel_spec(std::string_view json_text);
ChannelSpec read_channel_spec(const std::filesystem::path& path);

// Deterministic for a given spec and sample rate.
ImpulseResponse synthesize_channel(const ChannelSpec& spec,
                                   double sample_rate);

struct Simulation {
  Signal wet;
  ImpulseResponse ir;
};

// wet = full convolution of dry with the synthesized channel.
Simulation simulate(const Signal& dry, const ChannelSpec& spec);

}  // namespace dereverb
