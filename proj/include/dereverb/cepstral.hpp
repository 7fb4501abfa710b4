#pragma once

#include <complex>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "dereverb/signal.hpp"
#include "dereverb/spectral.hpp"

namespace dereverb {

inline constexpr double kDefaultAnalysisEpsilon = 1e-10;

// c = Re{ IDFT( ln max(|X|, epsilon) ) }. Even-symmetric about index 0.
std::vector<double> real_cepstrum_frame(
    std::span<const std::complex<double>> spectrum_frame, double epsilon);

// Number of frames estimate_ir() averages for a common length L: only
// complete frames, 1 + (L - n_dft) / n_hop, or a single zero-padded frame
// when L < n_dft.
std::size_t ir_frame_count(std::size_t length, const FrameParams& p);

// Frame-wise cepstral deconvolution of the recording y by the excitation x.
//
// Per frame: C_h = C_y - C_x, H = exp(DFT(C_h)), h = Re{IDFT(H)}. The frame
// responses are averaged in the time domain and the mean is divided by its
// peak magnitude. Only log-magnitudes enter, so the result is the zero-phase
// response with the estimated magnitude: taps at the end of the buffer are
// negative lags.
//
// The shorter input is zero-padded to the common length. p normally uses the
// rectangular window and 50 % overlap. Throws ParameterError on rate
// mismatch, inputs shorter than one hop, or silent input (max|s| <= epsilon,
// "insufficient excitation").
ImpulseResponse estimate_ir(const Signal& x, const Signal& y,
                            const FrameParams& p,
                            double epsilon = kDefaultAnalysisEpsilon);

// Provenance stored next to an impulse-response WAV as <ir>.json.
struct IrSidecar {
  double sample_rate = 0.0;
  std::size_t n_dft = 0;
  std::size_t n_hop = 0;
  double epsilon = kDefaultAnalysisEpsilon;
  std::string x_path;
  std::string y_path;
};

void write_ir_sidecar(const std::filesystem::path& path, const IrSidecar& s);
IrSidecar read_ir_sidecar(const std::filesystem::path& path);

}  // namespace dereverb
