#include "dereverb/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "dereverb/errors.hpp"
#include "dereverb/fft.hpp"
#include "json.hpp"

namespace dereverb {
namespace {

std::size_t to_index(double seconds, double fs) {
  return static_cast<std::size_t>(std::llround(seconds * fs));
}

std::size_t default_length(const ChannelSpec& spec, double fs) {
  std::size_t n = to_index(spec.direct_delay_s, fs) + 1;
  for (const auto& e : spec.echoes) n = std::max(n, to_index(e.delay_s, fs) + 1);
  for (const auto& t : spec.tails) {
    n = std::max(n, to_index(spec.direct_delay_s + t.t60_s, fs));
  }
  return n;
}

std::vector<double> band_noise(std::size_t n, double f_lo, double f_hi,
                               double fs, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> noise(n);
  for (auto& v : noise) v = gauss(rng);
  Fft fft(n);
  std::vector<std::complex<double>> spec(n);
  fft.forward(std::span<const double>(noise), spec);
  for (std::size_t mu = 0; mu < n; ++mu) {
    const std::size_t k = std::min(mu, n - mu);
    const double f = static_cast<double>(k) * fs / static_cast<double>(n);
    if (f < f_lo || f > f_hi) spec[mu] = 0.0;
  }
  fft.inverse_real(spec, noise);
  double power = 0.0;
  for (double v : noise) power += v * v;
  const double rms = std::sqrt(power / static_cast<double>(n));
  if (rms > 0.0) {
    for (auto& v : noise) v /= rms;
  }
  return noise;
}

double get_number(const nlohmann::json& j, const char* key, double fallback) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  if (!j[key].is_number()) {
    throw ParameterError(std::string("channel spec: '") + key +
                         "' must be a number");
  }
  return j[key].get<double>();
}

double require_number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) {
    throw ParameterError(std::string("channel spec: missing '") + key + "'");
  }
  return get_number(j, key, 0.0);
}

}  // namespace

void ChannelSpec::validate(double fs) const {
  if (!(fs > 0.0)) throw ParameterError("channel spec: sample rate must be > 0");
  auto fail = [](const std::string& msg) {
    throw ParameterError("channel spec: " + msg);
  };
  if (length_s && !(*length_s > 0.0)) fail("length_s must be > 0");
  if (!(direct_delay_s >= 0.0)) fail("direct_delay_s must be >= 0");
  const double limit = length_s ? *length_s : INFINITY;
  if (direct_delay_s >= limit) fail("direct path lies beyond length_s");
  for (const auto& e : echoes) {
    if (!(e.delay_s >= 0.0)) fail("echo delay_s must be >= 0");
    if (e.delay_s >= limit) fail("echo lies beyond length_s");
  }
  for (const auto& t : tails) {
    if (!(t.t60_s > 0.0)) fail("tail t60_s must be > 0");
    if (!(t.f_lo_hz >= 0.0 && t.f_lo_hz <= t.f_hi_hz && t.f_hi_hz <= fs / 2)) {
      fail("tail band needs 0 <= f_lo_hz <= f_hi_hz <= f_s/2");
    }
  }
}

ChannelSpec parse_channel_spec(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("channel spec: ") + e.what());
  }
  if (!j.is_object()) throw ParameterError("channel spec: expected an object");
  ChannelSpec spec;
  if (j.contains("length_s") && !j["length_s"].is_null()) {
    spec.length_s = get_number(j, "length_s", 0.0);
  }
  spec.direct_gain = get_number(j, "direct_gain", spec.direct_gain);
  spec.direct_delay_s = get_number(j, "direct_delay_s", spec.direct_delay_s);
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) {
      throw ParameterError("channel spec: 'seed' must be an integer");
    }
    spec.seed = j["seed"].get<std::uint64_t>();
  }
  for (const auto& e : j.value("echoes", nlohmann::json::array())) {
    spec.echoes.push_back({require_number(e, "delay_s"),
                           require_number(e, "gain")});
  }
  for (const auto& t : j.value("tails", nlohmann::json::array())) {
    spec.tails.push_back({require_number(t, "f_lo_hz"),
                          require_number(t, "f_hi_hz"),
                          require_number(t, "t60_s"), require_number(t, "gain")});
  }
  return spec;
}

ChannelSpec read_channel_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_channel_spec(ss.str());
}

ImpulseResponse synthesize_channel(const ChannelSpec& spec, double fs) {
  spec.validate(fs);
  const std::size_t n =
      spec.length_s ? std::max<std::size_t>(1, to_index(*spec.length_s, fs))
                    : default_length(spec, fs);
  std::vector<double> h(n, 0.0);
  const std::size_t direct = to_index(spec.direct_delay_s, fs);
  if (direct < n) h[direct] += spec.direct_gain;
  for (const auto& e : spec.echoes) {
    const std::size_t k = to_index(e.delay_s, fs);
    if (k < n) h[k] += e.gain;
  }
  std::mt19937_64 rng(spec.seed);
  for (const auto& t : spec.tails) {
    if (direct >= n) break;
    const std::size_t len = n - direct;
    const auto noise = band_noise(len, t.f_lo_hz, t.f_hi_hz, fs, rng);
    for (std::size_t i = 0; i < len; ++i) {
      const double time = static_cast<double>(i) / fs;
      h[direct + i] += t.gain * noise[i] * std::pow(10.0, -3.0 * time / t.t60_s);
    }
  }
  return ImpulseResponse(std::move(h), fs);
}

Simulation simulate(const Signal& dry, const ChannelSpec& spec) {
  auto ir = synthesize_channel(spec, dry.sample_rate());
  auto wet = convolve(dry, ir);
  return {std::move(wet), std::move(ir)};
}

}  // namespace dereverb
