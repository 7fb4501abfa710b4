#include "dereverb/cepstral.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "dereverb/errors.hpp"
#include "dereverb/fft.hpp"
#include "dereverb/matrix.hpp"
#include "dereverb/parallel.hpp"

namespace dereverb {
namespace {

void log_magnitude(std::span<const std::complex<double>> frame, double epsilon,
                   std::span<std::complex<double>> out) {
  for (std::size_t i = 0; i < frame.size(); ++i) {
    out[i] = {std::log(std::max(std::abs(frame[i]), epsilon)), 0.0};
  }
}

// Zero-padded copy of frame eta (forward framing, lead 0).
void frame_of(std::span<const double> s, const FrameParams& p,
              std::span<const double> window, std::size_t eta,
              std::span<double> out) {
  const std::size_t start = eta * p.n_hop;
  for (std::size_t nu = 0; nu < p.n_dft; ++nu) {
    const std::size_t i = start + nu;
    out[nu] = i < s.size() ? s[i] * window[nu] : 0.0;
  }
}

}  // namespace

std::vector<double> real_cepstrum_frame(
    std::span<const std::complex<double>> spectrum_frame, double epsilon) {
  if (!(epsilon > 0.0)) {
    throw ParameterError("real_cepstrum_frame: epsilon must be > 0");
  }
  if (spectrum_frame.empty()) {
    throw ParameterError("real_cepstrum_frame: empty frame");
  }
  const std::size_t n = spectrum_frame.size();
  Fft fft(n);
  std::vector<std::complex<double>> logmag(n);
  log_magnitude(spectrum_frame, epsilon, logmag);
  std::vector<double> c(n);
  fft.inverse_real(logmag, c);
  return c;
}

std::size_t ir_frame_count(std::size_t length, const FrameParams& p) {
  if (length < p.n_dft) return 1;
  return 1 + (length - p.n_dft) / p.n_hop;
}

ImpulseResponse estimate_ir(const Signal& x, const Signal& y,
                            const FrameParams& p, double epsilon) {
  p.validate();
  if (!(epsilon > 0.0)) throw ParameterError("estimate_ir: epsilon must be > 0");
  if (x.sample_rate() != y.sample_rate() || x.sample_rate() != p.sample_rate) {
    std::ostringstream os;
    os << "estimate_ir: sample-rate mismatch (x " << x.sample_rate() << ", y "
       << y.sample_rate() << ", frames " << p.sample_rate << ")";
    throw ParameterError(os.str());
  }
  if (p.lead != 0) {
    throw ParameterError("estimate_ir: frame params must use forward framing");
  }
  if (x.size() < p.n_hop || y.size() < p.n_hop) {
    throw ParameterError("estimate_ir: signals must be at least one hop long");
  }
  if (peak_abs(x.samples()) <= epsilon || peak_abs(y.samples()) <= epsilon) {
    throw ParameterError("estimate_ir: insufficient excitation");
  }

  const std::size_t length = std::max(x.size(), y.size());
  const std::size_t n_frames = ir_frame_count(length, p);
  const std::size_t n = p.n_dft;
  const auto window = make_window(p.analysis_window, n);

  FrameMatrix<double> responses(n, n_frames);
  parallel_chunks(n_frames, [&](std::size_t, std::size_t begin, std::size_t end) {
    Fft fft(n);
    std::vector<double> buf(n), cx(n), cy(n);
    std::vector<std::complex<double>> spec(n), logmag(n);
    for (std::size_t eta = begin; eta < end; ++eta) {
      frame_of(x.samples(), p, window, eta, buf);
      fft.forward(std::span<const double>(buf), spec);
      log_magnitude(spec, epsilon, logmag);
      fft.inverse_real(logmag, cx);

      frame_of(y.samples(), p, window, eta, buf);
      fft.forward(std::span<const double>(buf), spec);
      log_magnitude(spec, epsilon, logmag);
      fft.inverse_real(logmag, cy);

      for (std::size_t i = 0; i < n; ++i) buf[i] = cy[i] - cx[i];
      fft.forward(std::span<const double>(buf), spec);
      for (auto& v : spec) v = std::exp(v);
      fft.inverse_real(spec, responses.frame(eta));
    }
  });

  std::vector<double> mean(n, 0.0);
  for (std::size_t eta = 0; eta < n_frames; ++eta) {
    const auto h = responses.frame(eta);
    for (std::size_t i = 0; i < n; ++i) mean[i] += h[i];
  }
  const double inv = 1.0 / static_cast<double>(n_frames);
  for (double& v : mean) v *= inv;
  if (!all_finite(mean)) throw NumericalError("estimate_ir: non-finite taps");
  normalize_peak_inplace(mean, PeakNormalization::kAlways);
  return ImpulseResponse(std::move(mean), p.sample_rate);
}

void write_ir_sidecar(const std::filesystem::path& path, const IrSidecar& s) {
  nlohmann::ordered_json j;
  j["sample_rate"] = s.sample_rate;
  j["n_dft"] = s.n_dft;
  j["n_hop"] = s.n_hop;
  j["epsilon"] = s.epsilon;
  j["created_from"] = {{"x_path", s.x_path}, {"y_path", s.y_path}};
  std::ofstream out(path);
  if (!out) throw IoError("cannot write sidecar " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

IrSidecar read_ir_sidecar(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open sidecar " + path.string());
  try {
    const auto j = nlohmann::json::parse(in);
    IrSidecar s;
    s.sample_rate = j.at("sample_rate").get<double>();
    s.n_dft = j.at("n_dft").get<std::size_t>();
    s.n_hop = j.at("n_hop").get<std::size_t>();
    s.epsilon = j.at("epsilon").get<double>();
    s.x_path = j.at("created_from").at("x_path").get<std::string>();
    s.y_path = j.at("created_from").at("y_path").get<std::string>();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed sidecar " + path.string() + ": " + e.what());
  }
}

}  // namespace dereverb
