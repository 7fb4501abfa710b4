#include "dereverb/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "dereverb/errors.hpp"
#include "dereverb/shaper.hpp"
#include "json.hpp"

namespace dereverb {
namespace {

using nlohmann::json;

template <typename T>
void read_field(const json& j, const char* key, T& dst) {
  if (!j.contains(key)) return;
  try {
    dst = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ParameterError(std::string("config: bad value for '") + key + "'");
  }
}

template <typename T>
void read_optional(const json& j, const char* key, std::optional<T>& dst) {
  if (!j.contains(key)) return;
  if (j.at(key).is_null()) {
    dst.reset();
    return;
  }
  T v{};
  read_field(j, key, v);
  dst = v;
}

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ParameterError("config: " + msg);
}

}  // namespace

std::size_t PipelineConfig::resolved_n_dft() const {
  if (n_dft) return *n_dft;
  return static_cast<std::size_t>(std::llround(5.0 * sample_rate));
}

std::size_t PipelineConfig::resolved_n_hop() const {
  if (n_hop) return *n_hop;
  return std::max<std::size_t>(1, resolved_n_dft() / 2);
}

ChirpSpec PipelineConfig::chirp_spec() const {
  ChirpSpec s;
  s.f0_hz = chirp.f0_hz;
  s.f1_hz = chirp.f1_hz.value_or(sample_rate / 2.0);
  s.duration_s = chirp.duration_s;
  s.periods = chirp.periods;
  s.sample_rate = sample_rate;
  return s;
}

FrameParams PipelineConfig::analysis_params() const {
  return FrameParams::forward(resolved_n_dft(), resolved_n_hop(), sample_rate,
                              Window::kRectangular);
}

FrameParams PipelineConfig::shaping_params() const {
  return dereverb::shaping_params(resolved_n_dft(), resolved_n_hop(),
                                  sample_rate);
}

void PipelineConfig::validate() const {
  require(sample_rate > 0.0 && std::isfinite(sample_rate),
          "sample_rate must be > 0");
  require(!n_dft || *n_dft >= 1, "n_dft must be >= 1");
  require(resolved_n_hop() >= 1 && resolved_n_hop() <= resolved_n_dft(),
          "need 1 <= n_hop <= n_dft");
  require(epsilon_analysis > 0.0, "epsilon_analysis must be > 0");
  require(epsilon_filter > 0.0, "epsilon_filter must be > 0");
  require(t60_threshold > 0.0 && t60_threshold < 1.0,
          "t60_threshold must lie in (0, 1)");
  require(rho_floor > 0.0, "rho_floor must be > 0");
  require(dk >= 0.0 && std::isfinite(dk), "dk must be >= 0");
  chirp_spec().validate();
}

std::string config_to_json(const PipelineConfig& c) {
  json j;
  j["sample_rate"] = c.sample_rate;
  j["chirp"] = {{"f0_hz", c.chirp.f0_hz},
                {"f1_hz", optional_json(c.chirp.f1_hz)},
                {"duration_s", c.chirp.duration_s},
                {"periods", c.chirp.periods}};
  j["n_dft"] = optional_json(c.n_dft);
  j["n_hop"] = optional_json(c.n_hop);
  j["epsilon_analysis"] = c.epsilon_analysis;
  j["epsilon_filter"] = c.epsilon_filter;
  j["t60_threshold"] = c.t60_threshold;
  j["rho_floor"] = c.rho_floor;
  j["dk"] = c.dk;
  return j.dump(2);
}

PipelineConfig config_from_json(const std::string& text,
                                const PipelineConfig& base) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw ParameterError("config: expected a JSON object");
  static const char* const kKnown[] = {
      "sample_rate",    "chirp",         "n_dft",     "n_hop", "epsilon_analysis",
      "epsilon_filter", "t60_threshold", "rho_floor", "dk"};
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : kKnown) known = known || item.key() == k;
    if (!known) throw ParameterError("config: unknown key '" + item.key() + "'");
  }
  PipelineConfig c = base;
  read_field(j, "sample_rate", c.sample_rate);
  if (j.contains("chirp")) {
    const auto& ch = j["chirp"];
    if (!ch.is_object()) throw ParameterError("config: 'chirp' must be an object");
    read_field(ch, "f0_hz", c.chirp.f0_hz);
    read_optional(ch, "f1_hz", c.chirp.f1_hz);
    read_field(ch, "duration_s", c.chirp.duration_s);
    read_field(ch, "periods", c.chirp.periods);
  }
  read_optional(j, "n_dft", c.n_dft);
  read_optional(j, "n_hop", c.n_hop);
  read_field(j, "epsilon_analysis", c.epsilon_analysis);
  read_field(j, "epsilon_filter", c.epsilon_filter);
  read_field(j, "t60_threshold", c.t60_threshold);
  read_field(j, "rho_floor", c.rho_floor);
  read_field(j, "dk", c.dk);
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path,
                           const PipelineConfig& base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str(), base);
}

void save_config(const std::filesystem::path& path, const PipelineConfig& c) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << config_to_json(c) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace dereverb
