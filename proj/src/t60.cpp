#include "dereverb/t60.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>

#include "dereverb/errors.hpp"
#include "dereverb/parallel.hpp"

namespace dereverb {
namespace {

void check_threshold(double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    std::ostringstream os;
    os << "t60: threshold must lie in (0, 1), got " << threshold;
    throw ParameterError(os.str());
  }
}

double paper_seconds(std::size_t eta, const FrameParams& p) {
  return p.overlap() * static_cast<double>(eta) / p.sample_rate;
}

double hop_seconds(std::size_t eta, const FrameParams& p) {
  return static_cast<double>(eta) * static_cast<double>(p.n_hop) /
         p.sample_rate;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

double parse_double(const std::string& s, const std::filesystem::path& path) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw IoError("t60 csv " + path.string() + ": bad number '" + s + "'");
  }
}

}  // namespace

EnergyMatrix::EnergyMatrix(FrameMatrix<double> values)
    : values_(std::move(values)) {}

FrameMatrix<double> psd(const Spectrogram& g) {
  FrameMatrix<double> out(g.n_dft(), g.n_frames());
  const auto in = g.matrix().data();
  auto dst = out.data();
  for (std::size_t i = 0; i < in.size(); ++i) dst[i] = std::norm(in[i]);
  return out;
}

EnergyMatrix cumulative_tail_energy(const FrameMatrix<double>& s) {
  for (double v : s.data()) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ParameterError("cumulative_tail_energy: PSD must be finite and >= 0");
    }
  }
  const std::size_t bins = s.bins();
  const std::size_t frames = s.frames();
  FrameMatrix<double> e(bins, frames, 0.0);
  parallel_for(bins, [&](std::size_t mu) {
    // Backward running sum: tail[eta] = tail[eta + 1] + S[eta], which is
    // monotone under rounding, and tail[0] is the total.
    double tail = 0.0;
    for (std::size_t eta = frames; eta-- > 0;) {
      tail += s(mu, eta);
      e(mu, eta) = tail;
    }
    const double total = tail;
    if (total > 0.0) {
      for (std::size_t eta = 0; eta < frames; ++eta) e(mu, eta) /= total;
    }
  });
  return EnergyMatrix(std::move(e));
}

std::size_t first_crossing(std::span<const double> curve, double threshold) {
  for (std::size_t eta = 0; eta < curve.size(); ++eta) {
    if (curve[eta] < threshold) return eta;
  }
  return curve.size();
}

T60Profile t60_per_bin(const Spectrogram& g, double threshold) {
  check_threshold(threshold);
  const FrameParams& p = g.params();
  const auto energy = cumulative_tail_energy(psd(g));
  const std::size_t bins = g.n_dft();
  const std::size_t frames = g.n_frames();

  T60Profile profile;
  profile.params = p;
  profile.threshold = threshold;
  profile.n_frames = frames;
  profile.eta_t60.resize(bins);
  profile.t60_paper_s.resize(bins);
  profile.t60_hop_s.resize(bins);
  profile.censored.resize(bins);

  std::vector<double> curve(frames);
  for (std::size_t mu = 0; mu < bins; ++mu) {
    for (std::size_t eta = 0; eta < frames; ++eta) curve[eta] = energy(mu, eta);
    const std::size_t eta = first_crossing(curve, threshold);
    profile.eta_t60[mu] = eta;
    profile.t60_paper_s[mu] = paper_seconds(eta, p);
    profile.t60_hop_s[mu] = hop_seconds(eta, p);
    profile.censored[mu] = (eta == frames || curve[0] == 0.0) ? 1 : 0;
  }
  return profile;
}

BroadbandT60 t60_broadband_detail(const Signal& s, const FrameParams& p,
                                  double threshold) {
  check_threshold(threshold);
  const auto g = stft(s, p);
  const auto power = psd(g);
  FrameMatrix<double> summed(1, g.n_frames(), 0.0);
  for (std::size_t eta = 0; eta < g.n_frames(); ++eta) {
    double acc = 0.0;
    for (double v : power.frame(eta)) acc += v;
    summed(0, eta) = acc;
  }
  const auto energy = cumulative_tail_energy(summed);
  BroadbandT60 out;
  out.n_frames = g.n_frames();
  out.eta_t60 = first_crossing(energy.values().data(), threshold);
  out.t60_paper_s = paper_seconds(out.eta_t60, p);
  out.t60_hop_s = hop_seconds(out.eta_t60, p);
  out.censored = out.eta_t60 == out.n_frames || energy(0, 0) == 0.0;
  return out;
}

double t60_broadband(const Signal& s, const FrameParams& p, double threshold) {
  return t60_broadband_detail(s, p, threshold).t60_paper_s;
}

void write_t60_csv(const std::filesystem::path& path,
                   const T60Profile& profile) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "bin_index,frequency_hz,t60_paper_s,t60_hop_s,censored\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  const double df =
      profile.params.sample_rate / static_cast<double>(profile.n_dft());
  for (std::size_t mu = 0; mu < profile.n_dft(); ++mu) {
    out << mu << ',' << static_cast<double>(mu) * df << ','
        << profile.t60_paper_s[mu] << ',' << profile.t60_hop_s[mu] << ','
        << static_cast<int>(profile.censored[mu]) << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

T60Profile read_t60_csv(const std::filesystem::path& path,
                        const FrameParams& params, double threshold) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) ||
      line != "bin_index,frequency_hz,t60_paper_s,t60_hop_s,censored") {
    throw IoError("t60 csv " + path.string() + ": unexpected header");
  }
  T60Profile profile;
  profile.params = params;
  profile.threshold = threshold;
  double bin1_hz = 0.0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 5) {
      throw IoError("t60 csv " + path.string() + ": expected 5 columns");
    }
    const auto mu = static_cast<std::size_t>(parse_double(f[0], path));
    if (mu != profile.t60_paper_s.size()) {
      throw IoError("t60 csv " + path.string() + ": bins out of order");
    }
    if (mu == 1) bin1_hz = parse_double(f[1], path);
    profile.t60_paper_s.push_back(parse_double(f[2], path));
    const double hop_s = parse_double(f[3], path);
    profile.t60_hop_s.push_back(hop_s);
    profile.eta_t60.push_back(static_cast<std::size_t>(std::llround(
        hop_s * params.sample_rate / static_cast<double>(params.n_hop))));
    profile.censored.push_back(parse_double(f[4], path) != 0.0 ? 1 : 0);
  }
  if (profile.t60_paper_s.size() != params.n_dft) {
    std::ostringstream os;
    os << "t60 csv " << path.string() << ": " << profile.t60_paper_s.size()
       << " bins but n_dft is " << params.n_dft;
    throw ParameterError(os.str());
  }
  const double expected_df =
      params.sample_rate / static_cast<double>(params.n_dft);
  if (params.n_dft > 1 &&
      std::abs(bin1_hz - expected_df) > 1e-9 * std::max(1.0, expected_df)) {
    throw ParameterError("t60 csv " + path.string() +
                         ": bin spacing does not match the sample rate");
  }
  std::size_t max_eta = 0;
  for (auto e : profile.eta_t60) max_eta = std::max(max_eta, e);
  profile.n_frames = max_eta;
  return profile;
}

}  // namespace dereverb
