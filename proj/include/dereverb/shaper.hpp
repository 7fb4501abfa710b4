#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "dereverb/matrix.hpp"
#include "dereverb/signal.hpp"
#include "dereverb/spectral.hpp"
#include "dereverb/t60.hpp"

namespace dereverb {

inline constexpr double kDefaultRhoFloor = 1e-6;

// Per-bin T60(y) / T60(x), numerator and denominator floored before the
// division and the quotient floored after it.
struct T60Ratio {
  std::vector<double> rho;
  double floor = kDefaultRhoFloor;
};

// Uses t60_paper_s of both profiles. Throws ParameterError when the
// profiles differ in n_dft or frame parameters, or floor <= 0.
T60Ratio t60_ratio(const T60Profile& y, const T60Profile& x,
                   double floor = kDefaultRhoFloor);

// D(mu, eta) = exp(-(eta * n_hop / f_s) / rho_mu), never below the smallest
// normal double so every entry stays in (0, 1].
struct DecayMatrix {
  FrameMatrix<double> values;
  FrameParams params;

  std::size_t n_dft() const noexcept { return values.bins(); }
  std::size_t n_frames() const noexcept { return values.frames(); }
};

DecayMatrix build_decay_matrix(const T60Ratio& rho, const FrameParams& p,
                               std::size_t n_frames);

// Frame parameters used to shape an impulse response: Hann analysis,
// centred framing so tap 0 is not multiplied by a window zero.
FrameParams shaping_params(std::size_t n_dft, std::size_t n_hop,
                           double sample_rate);

// Number of frames shape_ir() produces for an IR of `length` taps.
std::size_t shaping_frame_count(std::size_t length, const FrameParams& p);

// STFT of h under p, multiplied by D, Hann-synthesis overlap-add, trimmed
// to len(h). Not renormalized. Throws ParameterError if d.params != p or the
// dimensions of D and the spectrogram differ.
ImpulseResponse shape_ir(const ImpulseResponse& h, const DecayMatrix& d,
                         const FrameParams& p);

// h_n * exp(-dk * n). Throws ParameterError for dk < 0 or non-finite dk.
ImpulseResponse apply_global_decay(const ImpulseResponse& h, double dk);

// Bins-by-frames CSV for plotting:
//   # n_dft=..,n_hop=..,sample_rate=..,n_frames=..
//   bin_index,frequency_hz,frame_0,...,frame_{F-1}
void write_decay_csv(const std::filesystem::path& path, const DecayMatrix& d);

}  // namespace dereverb
