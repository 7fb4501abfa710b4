#include "dereverb/signal.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "dereverb/errors.hpp"
#include "dereverb/fft.hpp"

namespace dereverb {
namespace {

void check_samples(std::span<const double> samples, double sample_rate,
                   const char* what) {
  if (!(sample_rate > 0.0) || !std::isfinite(sample_rate)) {
    std::ostringstream os;
    os << what << ": sample_rate must be positive, got " << sample_rate;
    throw ParameterError(os.str());
  }
  if (samples.empty()) {
    throw ParameterError(std::string(what) + ": at least one sample required");
  }
  if (!all_finite(samples)) {
    throw NumericalError(std::string(what) + ": non-finite sample");
  }
}

// Products below this size use the direct double loop.
constexpr std::size_t kDirectConvolutionLimit = std::size_t{1} << 22;

}  // namespace

Signal::Signal(std::vector<double> samples, double sample_rate)
    : samples_(std::move(samples)), sample_rate_(sample_rate) {
  check_samples(samples_, sample_rate_, "Signal");
}

ImpulseResponse::ImpulseResponse(std::vector<double> taps, double sample_rate)
    : taps_(std::move(taps)), sample_rate_(sample_rate) {
  check_samples(taps_, sample_rate_, "ImpulseResponse");
}

ImpulseResponse::ImpulseResponse(const Signal& s)
    : ImpulseResponse(std::vector<double>(s.samples().begin(), s.samples().end()),
                      s.sample_rate()) {}

double peak_abs(std::span<const double> samples) noexcept {
  double peak = 0.0;
  for (double v : samples) peak = std::max(peak, std::abs(v));
  return peak;
}

bool all_finite(std::span<const double> samples) noexcept {
  return std::all_of(samples.begin(), samples.end(),
                     [](double v) { return std::isfinite(v); });
}

void ChirpSpec::validate() const {
  std::ostringstream os;
  if (!(sample_rate > 0.0) || !std::isfinite(sample_rate)) {
    os << "chirp: sample_rate must be > 0 (got " << sample_rate << ")";
  } else if (!(f0_hz >= 0.0) || f0_hz > sample_rate / 2.0) {
    os << "chirp: f0 must satisfy 0 <= f0 <= sample_rate/2 = "
       << sample_rate / 2.0 << " (got " << f0_hz << ")";
  } else if (!(f1_hz >= 0.0) || f1_hz > sample_rate / 2.0) {
    os << "chirp: f1 must satisfy 0 <= f1 <= sample_rate/2 = "
       << sample_rate / 2.0 << " (got " << f1_hz << ")";
  } else if (!(duration_s > 0.0) || !std::isfinite(duration_s)) {
    os << "chirp: duration T must be > 0 (got " << duration_s << ")";
  } else if (periods < 1) {
    os << "chirp: periods P must be >= 1 (got " << periods << ")";
  } else if (std::llround(duration_s * sample_rate) < 1) {
    os << "chirp: round(T * sample_rate) must be >= 1 (T = " << duration_s
       << ")";
  }
  if (!os.str().empty()) throw ParameterError(os.str());
}

std::size_t ChirpSpec::period_samples() const {
  return static_cast<std::size_t>(std::llround(duration_s * sample_rate));
}

bool ChirpSpec::period_was_rounded() const {
  const double exact = duration_s * sample_rate;
  return exact != static_cast<double>(period_samples());
}

Signal generate_chirp(const ChirpSpec& spec) {
  spec.validate();
  const std::size_t n_period = spec.period_samples();
  const std::size_t total = n_period * static_cast<std::size_t>(spec.periods);
  const double sweep_rate = (spec.f1_hz - spec.f0_hz) / (2.0 * spec.duration_s);

  std::vector<double> period(n_period);
  for (std::size_t n = 0; n < n_period; ++n) {
    const double t = static_cast<double>(n) / spec.sample_rate;
    period[n] = std::sin(2.0 * std::numbers::pi *
                         (spec.f0_hz * t + sweep_rate * t * t));
  }
  std::vector<double> out;
  out.reserve(total);
  for (int p = 0; p < spec.periods; ++p) {
    out.insert(out.end(), period.begin(), period.end());
  }
  return Signal(std::move(out), spec.sample_rate);
}

namespace detail {

std::vector<double> convolve_direct(std::span<const double> x,
                                    std::span<const double> h) {
  std::vector<double> y(x.size() + h.size() - 1, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    double* out = y.data() + i;
    for (std::size_t k = 0; k < h.size(); ++k) out[k] += xi * h[k];
  }
  return y;
}

std::vector<double> convolve_fft(std::span<const double> x,
                                 std::span<const double> h) {
  const std::size_t len = x.size() + h.size() - 1;
  std::size_t n = 1;
  while (n < len) n <<= 1;
  Fft fft(n);
  std::vector<std::complex<double>> xs(n), hs(n);
  fft.forward(x, xs);
  fft.forward(h, hs);
  for (std::size_t i = 0; i < n; ++i) xs[i] *= hs[i];
  std::vector<double> full(n);
  fft.inverse_real(xs, full);
  full.resize(len);
  return full;
}

}  // namespace detail

Signal convolve(const Signal& x, const ImpulseResponse& h) {
  if (x.sample_rate() != h.sample_rate()) {
    std::ostringstream os;
    os << "convolve: sample-rate mismatch (" << x.sample_rate() << " vs "
       << h.sample_rate() << ")";
    throw ParameterError(os.str());
  }
  const bool direct = x.size() * h.size() <= kDirectConvolutionLimit;
  auto y = direct ? detail::convolve_direct(x.samples(), h.taps())
                  : detail::convolve_fft(x.samples(), h.taps());
  return Signal(std::move(y), x.sample_rate());
}

void normalize_peak_inplace(std::span<double> samples, PeakNormalization mode) {
  const double peak = peak_abs(samples);
  if (mode == PeakNormalization::kAlways) {
    if (peak == 0.0) throw NumericalError("normalize_peak: zero peak");
  } else if (peak <= 1.0) {
    return;
  }
  for (double& v : samples) v /= peak;
}

Signal normalize_peak(const Signal& s, PeakNormalization mode) {
  std::vector<double> out(s.samples().begin(), s.samples().end());
  normalize_peak_inplace(out, mode);
  return Signal(std::move(out), s.sample_rate());
}

ImpulseResponse normalize_peak(const ImpulseResponse& h,
                               PeakNormalization mode) {
  std::vector<double> out(h.taps().begin(), h.taps().end());
  normalize_peak_inplace(out, mode);
  return ImpulseResponse(std::move(out), h.sample_rate());
}

}  // namespace dereverb
