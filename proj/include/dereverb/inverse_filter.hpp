#pragma once

#include <complex>
#include <vector>

#include "dereverb/signal.hpp"
#include "dereverb/spectral.hpp"

namespace dereverb {

inline constexpr double kDefaultFilterEpsilon = 1e-6;

// Time-invariant spectral filterbank built from one impulse response.
//
// response is the unwindowed DFT of the IR zero-padded to n_dft, which is
// len(h) rounded up to an even length so the 50 % Hann hop is exact. The
// same spectrum divides every frame of the filtered signal.
struct FilterBank {
  std::vector<std::complex<double>> response;
  double epsilon = kDefaultFilterEpsilon;
  FrameParams params;
  std::size_t ir_length = 0;
};

// Warns "filter uninformative" when every |H| <= epsilon.
FilterBank build_filterbank(const ImpulseResponse& h,
                            double epsilon = kDefaultFilterEpsilon);

// Z / (H * max(1, epsilon / |H|)) per frame, Hann overlap-add, trimmed to
// len(z), then scaled down only if the peak exceeds 1. A bin with H == 0
// is divided by epsilon.
Signal filter_signal(const Signal& z, const FilterBank& fb);

}  // namespace dereverb
