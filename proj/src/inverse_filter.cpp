#include "dereverb/inverse_filter.hpp"

#include <cmath>
#include <sstream>

#include "dereverb/diagnostics.hpp"
#include "dereverb/errors.hpp"
#include "dereverb/fft.hpp"

namespace dereverb {

FilterBank build_filterbank(const ImpulseResponse& h, double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw ParameterError("build_filterbank: epsilon must be positive");
  }
  std::size_t n_dft = h.size();
  if (n_dft % 2 != 0) ++n_dft;
  if (n_dft < 2) n_dft = 2;

  FilterBank fb;
  fb.epsilon = epsilon;
  fb.ir_length = h.size();
  fb.params = FrameParams::centred(n_dft, n_dft / 2, h.sample_rate(),
                                   Window::kHann);
  fb.response.resize(n_dft);
  Fft fft(n_dft);
  fft.forward(h.taps(), fb.response);

  bool informative = false;
  for (const auto& v : fb.response) {
    if (std::abs(v) > epsilon) {
      informative = true;
      break;
    }
  }
  if (!informative) warn("filter uninformative: every |H| <= epsilon");
  return fb;
}

Signal filter_signal(const Signal& z, const FilterBank& fb) {
  if (z.sample_rate() != fb.params.sample_rate) {
    std::ostringstream os;
    os << "filter_signal: signal sample rate " << z.sample_rate()
       << " differs from filter " << fb.params.sample_rate;
    throw ParameterError(os.str());
  }
  if (fb.response.size() != fb.params.n_dft) {
    throw ParameterError("filter_signal: response length differs from n_dft");
  }
  // Regularized reciprocal, computed once and shared by all frames.
  std::vector<std::complex<double>> inverse(fb.response.size());
  for (std::size_t mu = 0; mu < inverse.size(); ++mu) {
    const auto hv = fb.response[mu];
    const double mag = std::abs(hv);
    inverse[mu] = mag == 0.0 ? std::complex<double>(1.0 / fb.epsilon, 0.0)
                  : mag < fb.epsilon ? 1.0 / (hv * (fb.epsilon / mag))
                                     : 1.0 / hv;
  }
  auto out = process_frames(
      z.samples(), fb.params, Window::kHann,
      [&](std::size_t, std::span<std::complex<double>> frame) {
        for (std::size_t mu = 0; mu < frame.size(); ++mu) {
          frame[mu] *= inverse[mu];
        }
      });
  if (!all_finite(out)) {
    throw NumericalError("filter_signal: non-finite output");
  }
  normalize_peak_inplace(out, PeakNormalization::kIfClipping);
  return Signal(std::move(out), z.sample_rate());
}

}  // namespace dereverb
