#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "dereverb/matrix.hpp"
#include "dereverb/spectral.hpp"

namespace dereverb {

inline constexpr double kDefaultT60Threshold = 0.001;

// Normalized tail energy E(mu, eta) = sum_{eta' >= eta} S / sum_{eta'} S,
// per bin. Entries lie in [0, 1], are non-increasing along frames, and the
// first frame is exactly 1 for every bin with energy. Bins without energy
// are all zero (fully decayed).
class EnergyMatrix {
 public:
  explicit EnergyMatrix(FrameMatrix<double> values);
  const FrameMatrix<double>& values() const noexcept { return values_; }
  double operator()(std::size_t bin, std::size_t frame) const {
    return values_(bin, frame);
  }
  std::size_t bins() const noexcept { return values_.bins(); }
  std::size_t frames() const noexcept { return values_.frames(); }

 private:
  FrameMatrix<double> values_;
};

// Per-bin reverberation times.
//
// eta_t60[mu] is the first frame whose tail energy drops below the threshold.
// t60_paper_s = o * eta / f_s is the reference formula; t60_hop_s =
// eta * n_hop / f_s is the conventional frame-time reading of the same index.
// A bin that never crosses gets eta = n_frames and is flagged censored; a
// bin with no energy gets eta = 0 and is flagged censored as well (no decay
// was observed either way).
struct T60Profile {
  FrameParams params;
  double threshold = kDefaultT60Threshold;
  std::size_t n_frames = 0;
  std::vector<std::size_t> eta_t60;
  std::vector<double> t60_paper_s;
  std::vector<double> t60_hop_s;
  std::vector<std::uint8_t> censored;

  std::size_t n_dft() const noexcept { return t60_paper_s.size(); }
};

FrameMatrix<double> psd(const Spectrogram& g);

// Throws ParameterError on negative or non-finite entries.
EnergyMatrix cumulative_tail_energy(const FrameMatrix<double>& psd);

// First eta with curve[eta] < threshold, or curve.size() when none.
std::size_t first_crossing(std::span<const double> curve, double threshold);

T60Profile t60_per_bin(const Spectrogram& g,
                       double threshold = kDefaultT60Threshold);

struct BroadbandT60 {
  std::size_t eta_t60 = 0;
  std::size_t n_frames = 0;
  double t60_paper_s = 0.0;
  double t60_hop_s = 0.0;
  bool censored = false;
};

// The per-bin procedure applied to the PSD summed over all bins.
BroadbandT60 t60_broadband_detail(const Signal& s, const FrameParams& p,
                                  double threshold = kDefaultT60Threshold);
double t60_broadband(const Signal& s, const FrameParams& p,
                     double threshold = kDefaultT60Threshold);

// CSV: bin_index,frequency_hz,t60_paper_s,t60_hop_s,censored
// Values are written with round-trip precision.
void write_t60_csv(const std::filesystem::path& path, const T60Profile& profile);

// Reads a profile CSV back. n_dft is the row count; n_hop, sample_rate,
// threshold and n_frames are not stored in the file and come from `params`
// (whose n_dft must match). eta_t60 is recovered from t60_hop_s.
T60Profile read_t60_csv(const std::filesystem::path& path,
                        const FrameParams& params,
                        double threshold = kDefaultT60Threshold);

}  // namespace dereverb
