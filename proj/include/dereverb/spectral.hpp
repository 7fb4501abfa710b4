#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "dereverb/matrix.hpp"
#include "dereverb/signal.hpp"

namespace dereverb {

enum class Window { kRectangular, kHann };

// Frame layout of a short-time transform.
//
// Frame eta covers samples [eta*n_hop, eta*n_hop + n_dft) of the padded
// source, which is `lead` zeros, then the signal, then zeros up to the end
// of the last frame. lead = 0 is plain forward framing; lead = n_dft - n_hop
// ("centred") puts sample 0 under a full window so no sample sits only at a
// Hann zero.
struct FrameParams {
  std::size_t n_dft = 0;
  std::size_t n_hop = 0;
  double sample_rate = 0.0;
  Window analysis_window = Window::kRectangular;
  std::size_t lead = 0;

  static FrameParams forward(std::size_t n_dft, std::size_t n_hop,
                             double sample_rate,
                             Window window = Window::kRectangular);
  static FrameParams centred(std::size_t n_dft, std::size_t n_hop,
                             double sample_rate, Window window = Window::kHann);

  void validate() const;
  // o = 1 - n_hop / n_dft
  double overlap() const noexcept;
  // ceil((lead + length) / n_hop)
  std::size_t frame_count(std::size_t length) const noexcept;
  // Time of frame eta, eta * n_hop / f_s.
  double frame_time(std::size_t eta) const noexcept;

  bool operator==(const FrameParams&) const = default;
};

// Periodic windows (denominator N), COLA-exact for Hann at 50 % hop.
std::vector<double> make_window(Window w, std::size_t n);

class Spectrogram {
 public:
  // source_length is the unpadded signal length istft() restores.
  Spectrogram(FrameParams params, std::size_t n_frames,
              std::size_t source_length);
  Spectrogram(FrameParams params, FrameMatrix<std::complex<double>> bins,
              std::size_t source_length);

  const FrameParams& params() const noexcept { return params_; }
  std::size_t n_dft() const noexcept { return bins_.bins(); }
  std::size_t n_frames() const noexcept { return bins_.frames(); }
  std::size_t source_length() const noexcept { return source_length_; }

  std::complex<double>& operator()(std::size_t bin, std::size_t frame) {
    return bins_(bin, frame);
  }
  const std::complex<double>& operator()(std::size_t bin,
                                         std::size_t frame) const {
    return bins_(bin, frame);
  }
  std::span<std::complex<double>> frame(std::size_t f) { return bins_.frame(f); }
  std::span<const std::complex<double>> frame(std::size_t f) const {
    return bins_.frame(f);
  }
  const FrameMatrix<std::complex<double>>& matrix() const noexcept {
    return bins_;
  }

  bool all_finite() const noexcept;

 private:
  FrameParams params_;
  FrameMatrix<std::complex<double>> bins_;
  std::size_t source_length_;
};

Spectrogram stft(const Signal& s, const FrameParams& p);
Spectrogram stft(std::span<const double> samples, const FrameParams& p);

// Inverse transform of every frame (real part), synthesis window, overlap-add,
// then division by the accumulated analysis*synthesis window envelope where
// it is at least kColaFloor. Returns source_length samples.
Signal istft(const Spectrogram& g, Window synthesis = Window::kHann);

inline constexpr double kColaFloor = 1e-8;

// Elementwise max(|X|, epsilon).
FrameMatrix<double> regularized_magnitude(const Spectrogram& g, double epsilon);

// Streams frames through analysis -> modify -> synthesis without holding the
// whole spectrogram. `modify(eta, spectrum)` edits one frame in place and is
// called concurrently for different frames. Output has `samples.size()`
// samples and is bit-identical for any thread count.
std::vector<double> process_frames(
    std::span<const double> samples, const FrameParams& p, Window synthesis,
    const std::function<void(std::size_t, std::span<std::complex<double>>)>&
        modify);

}  // namespace dereverb
