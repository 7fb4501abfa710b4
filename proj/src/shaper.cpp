#include "dereverb/shaper.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "dereverb/errors.hpp"
#include "dereverb/parallel.hpp"

namespace dereverb {

T60Ratio t60_ratio(const T60Profile& y, const T60Profile& x, double floor) {
  if (!(floor > 0.0) || !std::isfinite(floor)) {
    throw ParameterError("t60_ratio: floor must be positive and finite");
  }
  if (y.n_dft() != x.n_dft()) {
    std::ostringstream os;
    os << "t60_ratio: profiles have " << y.n_dft() << " and " << x.n_dft()
       << " bins";
    throw ParameterError(os.str());
  }
  if (!(y.params == x.params)) {
    throw ParameterError("t60_ratio: profiles use different frame parameters");
  }
  T60Ratio out;
  out.floor = floor;
  out.rho.resize(y.n_dft());
  for (std::size_t mu = 0; mu < out.rho.size(); ++mu) {
    const double num = std::max(y.t60_paper_s[mu], floor);
    const double den = std::max(x.t60_paper_s[mu], floor);
    out.rho[mu] = std::max(num / den, floor);
  }
  return out;
}

DecayMatrix build_decay_matrix(const T60Ratio& rho, const FrameParams& p,
                               std::size_t n_frames) {
  p.validate();
  if (n_frames == 0) throw ParameterError("build_decay_matrix: n_frames is 0");
  if (rho.rho.size() != p.n_dft) {
    std::ostringstream os;
    os << "build_decay_matrix: " << rho.rho.size() << " ratios for n_dft "
       << p.n_dft;
    throw ParameterError(os.str());
  }
  for (double r : rho.rho) {
    if (!(r > 0.0)) {
      throw ParameterError("build_decay_matrix: ratios must be positive");
    }
  }
  DecayMatrix d{FrameMatrix<double>(p.n_dft, n_frames), p};
  parallel_for(n_frames, [&](std::size_t eta) {
    const double tau = p.frame_time(eta);
    auto col = d.values.frame(eta);
    for (std::size_t mu = 0; mu < p.n_dft; ++mu) {
      // Clamped so underflow cannot produce an exact zero.
      col[mu] = std::max(std::exp(-tau / rho.rho[mu]),
                         std::numeric_limits<double>::min());
    }
  });
  return d;
}

FrameParams shaping_params(std::size_t n_dft, std::size_t n_hop,
                           double sample_rate) {
  return FrameParams::centred(n_dft, n_hop, sample_rate, Window::kHann);
}

std::size_t shaping_frame_count(std::size_t length, const FrameParams& p) {
  return p.frame_count(length);
}

ImpulseResponse shape_ir(const ImpulseResponse& h, const DecayMatrix& d,
                         const FrameParams& p) {
  p.validate();
  if (h.sample_rate() != p.sample_rate) {
    throw ParameterError("shape_ir: IR sample rate differs from parameters");
  }
  if (!(d.params == p)) {
    throw ParameterError("shape_ir: decay matrix built with other parameters");
  }
  auto g = stft(h.taps(), p);
  if (g.n_dft() != d.n_dft() || g.n_frames() != d.n_frames()) {
    std::ostringstream os;
    os << "shape_ir: decay matrix is " << d.n_dft() << "x" << d.n_frames()
       << " but the IR spectrogram is " << g.n_dft() << "x" << g.n_frames();
    throw ParameterError(os.str());
  }
  parallel_for(g.n_frames(), [&](std::size_t eta) {
    auto frame = g.frame(eta);
    const auto decay = d.values.frame(eta);
    for (std::size_t mu = 0; mu < frame.size(); ++mu) frame[mu] *= decay[mu];
  });
  Signal shaped = istft(g, Window::kHann);
  return ImpulseResponse(std::move(shaped).release(), p.sample_rate);
}

ImpulseResponse apply_global_decay(const ImpulseResponse& h, double dk) {
  if (!(dk >= 0.0) || !std::isfinite(dk)) {
    throw ParameterError("apply_global_decay: dk must be finite and >= 0");
  }
  std::vector<double> taps(h.taps().begin(), h.taps().end());
  if (dk > 0.0) {
    for (std::size_t n = 0; n < taps.size(); ++n) {
      taps[n] *= std::exp(-dk * static_cast<double>(n));
    }
  }
  return ImpulseResponse(std::move(taps), h.sample_rate());
}

void write_decay_csv(const std::filesystem::path& path, const DecayMatrix& d) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "# n_dft=" << d.params.n_dft << ",n_hop=" << d.params.n_hop
      << ",sample_rate=" << d.params.sample_rate
      << ",n_frames=" << d.n_frames() << '\n';
  out << "bin_index,frequency_hz";
  for (std::size_t eta = 0; eta < d.n_frames(); ++eta) out << ",frame_" << eta;
  out << '\n';
  const double df = d.params.sample_rate / static_cast<double>(d.n_dft());
  for (std::size_t mu = 0; mu < d.n_dft(); ++mu) {
    out << mu << ',' << static_cast<double>(mu) * df;
    for (std::size_t eta = 0; eta < d.n_frames(); ++eta) {
      out << ',' << d.values(mu, eta);
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace dereverb
