#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dereverb {

// Mono sampled audio. Immutable once constructed; the constructor enforces
// a positive sample rate, at least one sample and finite samples.
class Signal {
 public:
  Signal(std::vector<double> samples, double sample_rate);

  std::span<const double> samples() const noexcept { return samples_; }
  double operator[](std::size_t i) const { return samples_[i]; }
  std::size_t size() const noexcept { return samples_.size(); }
  double sample_rate() const noexcept { return sample_rate_; }
  double duration() const noexcept {
    return static_cast<double>(samples_.size()) / sample_rate_;
  }

  // Moves the sample storage out, leaving *this unusable.
  std::vector<double> release() && { return std::move(samples_); }

 private:
  std::vector<double> samples_;
  double sample_rate_;
};

// Time-domain system estimate. Same invariants as Signal; estimate_ir()
// additionally guarantees max|tap| == 1.
class ImpulseResponse {
 public:
  ImpulseResponse(std::vector<double> taps, double sample_rate);
  explicit ImpulseResponse(const Signal& s);

  std::span<const double> taps() const noexcept { return taps_; }
  double operator[](std::size_t i) const { return taps_[i]; }
  std::size_t size() const noexcept { return taps_.size(); }
  double sample_rate() const noexcept { return sample_rate_; }

  Signal as_signal() const { return Signal(taps_, sample_rate_); }

 private:
  std::vector<double> taps_;
  double sample_rate_;
};

// Periodic linear sine sweep from f0 to f1 over duration T, tiled P times.
struct ChirpSpec {
  double f0_hz = 20.0;
  double f1_hz = 20000.0;
  double duration_s = 2.0;
  int periods = 3;
  double sample_rate = 48000.0;

  // Throws ParameterError naming the violated bound.
  void validate() const;
  // N = round(T * f_s), the samples in one period.
  std::size_t period_samples() const;
  // True when T * f_s is not an integer and N had to be rounded.
  bool period_was_rounded() const;
};

// sample n = sin(2 pi (f0 t + (f1 - f0) / (2T) t^2)), t = (n mod N) / f_s.
// Phase is evaluated in closed form per sample, so periods are bit-exact
// copies of each other.
Signal generate_chirp(const ChirpSpec& spec);

// Full linear convolution, length len(x) + len(h) - 1.
Signal convolve(const Signal& x, const ImpulseResponse& h);

namespace detail {
std::vector<double> convolve_direct(std::span<const double> x,
                                    std::span<const double> h);
std::vector<double> convolve_fft(std::span<const double> x,
                                 std::span<const double> h);
}  // namespace detail

enum class PeakNormalization {
  // Divide by max|s| only when it exceeds 1 (clip prevention).
  kIfClipping,
  // Always divide by max|s|; zero peak is an error.
  kAlways,
};

Signal normalize_peak(const Signal& s,
                      PeakNormalization mode = PeakNormalization::kIfClipping);
ImpulseResponse normalize_peak(const ImpulseResponse& h,
                               PeakNormalization mode);

// In-place variant shared by the overloads above.
void normalize_peak_inplace(std::span<double> samples, PeakNormalization mode);

double peak_abs(std::span<const double> samples) noexcept;
bool all_finite(std::span<const double> samples) noexcept;

}  // namespace dereverb
