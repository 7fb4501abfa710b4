#include "dereverb/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dereverb/diagnostics.hpp"
#include "dereverb/errors.hpp"
#include "dereverb/fft.hpp"
#include "dereverb/parallel.hpp"

namespace dereverb {
namespace {

// Copies frame eta of the padded source into `out`, applying the window.
void load_frame(std::span<const double> samples, const FrameParams& p,
                std::span<const double> window, std::size_t eta,
                std::span<double> out) {
  const auto start = static_cast<std::ptrdiff_t>(eta * p.n_hop) -
                     static_cast<std::ptrdiff_t>(p.lead);
  const auto len = static_cast<std::ptrdiff_t>(samples.size());
  for (std::size_t nu = 0; nu < p.n_dft; ++nu) {
    const std::ptrdiff_t i = start + static_cast<std::ptrdiff_t>(nu);
    out[nu] = (i >= 0 && i < len) ? samples[static_cast<std::size_t>(i)] * window[nu]
                                  : 0.0;
  }
}

void warn_if_not_cola(const FrameParams& p, Window synthesis) {
  if (synthesis == Window::kHann && 2 * p.n_hop != p.n_dft) {
    std::ostringstream os;
    os << "Hann synthesis is COLA-exact only for n_hop = n_dft/2 (n_dft="
       << p.n_dft << ", n_hop=" << p.n_hop << "); relying on envelope division";
    warn(os.str());
  }
}

// Envelope sum_eta wa[m - eta*hop] * ws[m - eta*hop] over the padded axis.
std::vector<double> window_envelope(const FrameParams& p, std::size_t n_frames,
                                    std::span<const double> wa,
                                    std::span<const double> ws) {
  std::vector<double> env((n_frames - 1) * p.n_hop + p.n_dft, 0.0);
  for (std::size_t eta = 0; eta < n_frames; ++eta) {
    double* e = env.data() + eta * p.n_hop;
    for (std::size_t nu = 0; nu < p.n_dft; ++nu) e[nu] += wa[nu] * ws[nu];
  }
  return env;
}

// Trims the padded overlap-add buffer to the source and applies the envelope.
std::vector<double> finish_overlap_add(std::span<const double> acc,
                                       std::span<const double> env,
                                       std::size_t lead,
                                       std::size_t source_length) {
  std::vector<double> out(source_length, 0.0);
  for (std::size_t i = 0; i < source_length; ++i) {
    const std::size_t m = i + lead;
    if (m >= acc.size()) break;
    out[i] = env[m] >= kColaFloor ? acc[m] / env[m] : acc[m];
  }
  return out;
}

}  // namespace

FrameParams FrameParams::forward(std::size_t n_dft, std::size_t n_hop,
                                 double sample_rate, Window window) {
  return FrameParams{n_dft, n_hop, sample_rate, window, 0};
}

FrameParams FrameParams::centred(std::size_t n_dft, std::size_t n_hop,
                                 double sample_rate, Window window) {
  return FrameParams{n_dft, n_hop, sample_rate, window,
                     n_dft >= n_hop ? n_dft - n_hop : 0};
}

void FrameParams::validate() const {
  std::ostringstream os;
  if (n_dft < 1) {
    os << "frame params: n_dft must be >= 1";
  } else if (n_hop < 1 || n_hop > n_dft) {
    os << "frame params: need 1 <= n_hop <= n_dft (n_hop=" << n_hop
       << ", n_dft=" << n_dft << ")";
  } else if (!(sample_rate > 0.0) || !std::isfinite(sample_rate)) {
    os << "frame params: sample_rate must be > 0 (got " << sample_rate << ")";
  } else if (lead >= n_dft) {
    os << "frame params: lead padding must be < n_dft";
  }
  if (!os.str().empty()) throw ParameterError(os.str());
}

double FrameParams::overlap() const noexcept {
  return 1.0 - static_cast<double>(n_hop) / static_cast<double>(n_dft);
}

std::size_t FrameParams::frame_count(std::size_t length) const noexcept {
  return (lead + length + n_hop - 1) / n_hop;
}

double FrameParams::frame_time(std::size_t eta) const noexcept {
  return static_cast<double>(eta) * static_cast<double>(n_hop) / sample_rate;
}

std::vector<double> make_window(Window w, std::size_t n) {
  std::vector<double> out(n, 1.0);
  if (w == Window::kHann) {
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi *
                                    static_cast<double>(i) /
                                    static_cast<double>(n));
    }
  }
  return out;
}

Spectrogram::Spectrogram(FrameParams params, std::size_t n_frames,
                         std::size_t source_length)
    : params_(params),
      bins_(params.n_dft, n_frames),
      source_length_(source_length) {
  params_.validate();
  if (n_frames < 1) throw ParameterError("spectrogram: n_frames must be >= 1");
}

Spectrogram::Spectrogram(FrameParams params,
                         FrameMatrix<std::complex<double>> bins,
                         std::size_t source_length)
    : params_(params), bins_(std::move(bins)), source_length_(source_length) {
  params_.validate();
  if (bins_.bins() != params_.n_dft) {
    throw ParameterError("spectrogram: bin count differs from n_dft");
  }
  if (bins_.frames() < 1) {
    throw ParameterError("spectrogram: n_frames must be >= 1");
  }
  if (!all_finite()) throw NumericalError("spectrogram: non-finite entry");
}

bool Spectrogram::all_finite() const noexcept {
  for (const auto& z : bins_.data()) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

Spectrogram stft(const Signal& s, const FrameParams& p) {
  if (s.sample_rate() != p.sample_rate) {
    std::ostringstream os;
    os << "stft: signal sample rate " << s.sample_rate()
       << " differs from frame params " << p.sample_rate;
    throw ParameterError(os.str());
  }
  return stft(s.samples(), p);
}

Spectrogram stft(std::span<const double> samples, const FrameParams& p) {
  p.validate();
  if (samples.empty()) throw ParameterError("stft: empty signal");
  const std::size_t n_frames = p.frame_count(samples.size());
  Spectrogram g(p, n_frames, samples.size());
  const auto window = make_window(p.analysis_window, p.n_dft);

  parallel_chunks(n_frames, [&](std::size_t, std::size_t begin, std::size_t end) {
    Fft fft(p.n_dft);
    std::vector<double> buf(p.n_dft);
    for (std::size_t eta = begin; eta < end; ++eta) {
      load_frame(samples, p, window, eta, buf);
      fft.forward(std::span<const double>(buf), g.frame(eta));
    }
  });
  return g;
}

Signal istft(const Spectrogram& g, Window synthesis) {
  const FrameParams& p = g.params();
  warn_if_not_cola(p, synthesis);
  const std::size_t n_frames = g.n_frames();
  const auto wa = make_window(p.analysis_window, p.n_dft);
  const auto ws = make_window(synthesis, p.n_dft);

  FrameMatrix<double> frames(p.n_dft, n_frames);
  parallel_chunks(n_frames, [&](std::size_t, std::size_t begin, std::size_t end) {
    Fft fft(p.n_dft);
    for (std::size_t eta = begin; eta < end; ++eta) {
      auto out = frames.frame(eta);
      fft.inverse_real(g.frame(eta), out);
      for (std::size_t nu = 0; nu < p.n_dft; ++nu) out[nu] *= ws[nu];
    }
  });

  std::vector<double> acc((n_frames - 1) * p.n_hop + p.n_dft, 0.0);
  for (std::size_t eta = 0; eta < n_frames; ++eta) {
    const auto f = frames.frame(eta);
    double* a = acc.data() + eta * p.n_hop;
    for (std::size_t nu = 0; nu < p.n_dft; ++nu) a[nu] += f[nu];
  }
  const auto env = window_envelope(p, n_frames, wa, ws);
  const std::size_t length = std::max<std::size_t>(g.source_length(), 1);
  return Signal(finish_overlap_add(acc, env, p.lead, length), p.sample_rate);
}

FrameMatrix<double> regularized_magnitude(const Spectrogram& g, double epsilon) {
  if (!(epsilon > 0.0)) {
    throw ParameterError("regularized_magnitude: epsilon must be > 0");
  }
  FrameMatrix<double> out(g.n_dft(), g.n_frames());
  const auto in = g.matrix().data();
  auto dst = out.data();
  for (std::size_t i = 0; i < in.size(); ++i) {
    dst[i] = std::max(std::abs(in[i]), epsilon);
  }
  return out;
}

std::vector<double> process_frames(
    std::span<const double> samples, const FrameParams& p, Window synthesis,
    const std::function<void(std::size_t, std::span<std::complex<double>>)>&
        modify) {
  p.validate();
  if (samples.empty()) throw ParameterError("process_frames: empty signal");
  warn_if_not_cola(p, synthesis);
  const std::size_t n_frames = p.frame_count(samples.size());
  const auto wa = make_window(p.analysis_window, p.n_dft);
  const auto ws = make_window(synthesis, p.n_dft);

  // Frames are transformed in parallel a block at a time, then added to the
  // output strictly in frame order.
  const std::size_t block = std::max<std::size_t>(1, max_threads()) * 2;
  std::vector<double> acc((n_frames - 1) * p.n_hop + p.n_dft, 0.0);
  FrameMatrix<double> scratch(p.n_dft, std::min(block, n_frames));

  for (std::size_t first = 0; first < n_frames; first += block) {
    const std::size_t count = std::min(block, n_frames - first);
    parallel_chunks(count, [&](std::size_t, std::size_t begin, std::size_t end) {
      Fft fft(p.n_dft);
      std::vector<double> buf(p.n_dft);
      std::vector<std::complex<double>> spec(p.n_dft);
      for (std::size_t k = begin; k < end; ++k) {
        const std::size_t eta = first + k;
        load_frame(samples, p, wa, eta, buf);
        fft.forward(std::span<const double>(buf), spec);
        modify(eta, spec);
        auto out = scratch.frame(k);
        fft.inverse_real(spec, out);
        for (std::size_t nu = 0; nu < p.n_dft; ++nu) out[nu] *= ws[nu];
      }
    });
    for (std::size_t k = 0; k < count; ++k) {
      const auto f = scratch.frame(k);
      double* a = acc.data() + (first + k) * p.n_hop;
      for (std::size_t nu = 0; nu < p.n_dft; ++nu) a[nu] += f[nu];
    }
  }
  const auto env = window_envelope(p, n_frames, wa, ws);
  return finish_overlap_add(acc, env, p.lead, samples.size());
}

}  // namespace dereverb
