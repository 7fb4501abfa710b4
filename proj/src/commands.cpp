#include "dereverb/commands.hpp"

#include <cmath>
#include <sstream>

#include "dereverb/cepstral.hpp"
#include "dereverb/diagnostics.hpp"
#include "dereverb/errors.hpp"
#include "dereverb/inverse_filter.hpp"
#include "dereverb/shaper.hpp"
#include "dereverb/simulate.hpp"
#include "dereverb/t60.hpp"
#include "dereverb/wav.hpp"

namespace dereverb {
namespace {

Signal read_input(const fs::path& path, const PipelineConfig& config) {
  Signal s = read_wav(path);
  if (s.sample_rate() != config.sample_rate) {
    std::ostringstream os;
    os << path.string() << ": sample rate " << s.sample_rate()
       << " Hz differs from the configured " << config.sample_rate << " Hz";
    throw ParameterError(os.str());
  }
  return s;
}

void warn_if_short(const fs::path& path, std::size_t length,
                   const FrameParams& p) {
  if (length < p.n_dft + p.n_hop) {
    std::ostringstream os;
    os << path.string() << " is shorter than two analysis frames (" << length
       << " samples, n_dft " << p.n_dft << ")";
    warn(os.str());
  }
}

void check_finite(std::span<const double> v, const char* what) {
  if (!all_finite(v)) {
    throw NumericalError(std::string(what) + ": non-finite values");
  }
}

}  // namespace

ChirpReport cmd_chirp(const PipelineConfig& config, const fs::path& out_wav) {
  config.validate();
  const ChirpSpec spec = config.chirp_spec();
  ChirpReport r;
  r.period_samples = spec.period_samples();
  r.period_rounded = spec.period_was_rounded();
  if (r.period_rounded) {
    std::ostringstream os;
    os << "T * f_s = " << spec.duration_s * spec.sample_rate
       << " is not an integer; using N = " << r.period_samples;
    warn(os.str());
  }
  const Signal chirp = generate_chirp(spec);
  r.duration_s = chirp.duration();
  write_wav(out_wav, chirp);
  return r;
}

void cmd_identify(const fs::path& x_wav, const fs::path& y_wav,
                  const PipelineConfig& config, const fs::path& out_ir) {
  config.validate();
  const Signal x = read_input(x_wav, config);
  const Signal y = read_input(y_wav, config);
  const FrameParams p = config.analysis_params();
  warn_if_short(x_wav, std::max(x.size(), y.size()), p);
  const ImpulseResponse h = estimate_ir(x, y, p, config.epsilon_analysis);
  check_finite(h.taps(), "identify");
  write_wav(out_ir, h.as_signal());
  IrSidecar side;
  side.sample_rate = config.sample_rate;
  side.n_dft = p.n_dft;
  side.n_hop = p.n_hop;
  side.epsilon = config.epsilon_analysis;
  side.x_path = x_wav.string();
  side.y_path = y_wav.string();
  fs::path sidecar = out_ir;
  sidecar.replace_extension(".json");
  write_ir_sidecar(sidecar, side);
}

void cmd_t60(const fs::path& in_wav, const PipelineConfig& config,
             const fs::path& out_csv) {
  config.validate();
  const Signal s = read_input(in_wav, config);
  const FrameParams p = config.analysis_params();
  warn_if_short(in_wav, s.size(), p);
  const T60Profile profile = t60_per_bin(stft(s, p), config.t60_threshold);
  write_t60_csv(out_csv, profile);
}

void cmd_shape(const fs::path& ir_wav, const fs::path& t60_x_csv,
               const fs::path& t60_y_csv, const PipelineConfig& config,
               const fs::path& out_ir, const fs::path& out_decay_csv) {
  config.validate();
  const ImpulseResponse h(read_input(ir_wav, config));
  const FrameParams analysis = config.analysis_params();
  const T60Profile x = read_t60_csv(t60_x_csv, analysis, config.t60_threshold);
  const T60Profile y = read_t60_csv(t60_y_csv, analysis, config.t60_threshold);
  const T60Ratio rho = t60_ratio(y, x, config.rho_floor);

  const FrameParams p = config.shaping_params();
  const DecayMatrix d =
      build_decay_matrix(rho, p, shaping_frame_count(h.size(), p));
  const ImpulseResponse shaped =
      apply_global_decay(shape_ir(h, d, p), config.dk);
  check_finite(shaped.taps(), "shape");
  write_wav(out_ir, shaped.as_signal());
  write_decay_csv(out_decay_csv, d);
}

void cmd_filter(const fs::path& z_wav, const fs::path& ir_wav,
                const PipelineConfig& config, const fs::path& out_wav) {
  config.validate();
  const Signal z = read_input(z_wav, config);
  const ImpulseResponse h(read_input(ir_wav, config));
  const FilterBank fb = build_filterbank(h, config.epsilon_filter);
  const Signal out = filter_signal(z, fb);
  write_wav(out_wav, out);
}

MetricsReport cmd_metrics(const fs::path& before_wav,
                          const fs::path& after_wav,
                          const std::optional<fs::path>& ir_before,
                          const std::optional<fs::path>& ir_after,
                          const PipelineConfig& config,
                          const fs::path& out_json) {
  config.validate();
  const Signal before = read_input(before_wav, config);
  const Signal after = read_input(after_wav, config);
  std::optional<ImpulseResponse> hb;
  std::optional<ImpulseResponse> ha;
  if (ir_before) hb.emplace(read_input(*ir_before, config));
  if (ir_after) ha.emplace(read_input(*ir_after, config));
  const MetricsReport r =
      compute_metrics(before, after, config.analysis_params(),
                      config.t60_threshold, hb ? &*hb : nullptr,
                      ha ? &*ha : nullptr);
  if (std::isnan(r.lpa_db)) throw NumericalError("metrics: LPA is NaN");
  write_metrics_json(out_json, r);
  return r;
}

void cmd_simulate(const fs::path& dry_wav, const fs::path& channel_json,
                  const fs::path& out_wet, const fs::path& out_true_ir) {
  const Signal dry = read_wav(dry_wav);
  const ChannelSpec spec = read_channel_spec(channel_json);
  const Simulation sim = simulate(dry, spec);
  check_finite(sim.wet.samples(), "simulate");
  write_wav(out_wet, sim.wet);
  write_wav(out_true_ir, sim.ir.as_signal());
}

MetricsReport cmd_pipeline(const fs::path& x_wav, const fs::path& y_wav,
                           const fs::path& z_wav, const PipelineConfig& config,
                           const fs::path& outdir) {
  using A = PipelineArtifacts;
  config.validate();
  std::error_code ec;
  fs::create_directories(outdir, ec);
  if (ec) throw IoError("cannot create " + outdir.string() + ": " + ec.message());

  save_config(outdir / A::kConfig, config);
  cmd_identify(x_wav, y_wav, config, outdir / A::kIr);
  cmd_t60(x_wav, config, outdir / A::kT60X);
  cmd_t60(y_wav, config, outdir / A::kT60Y);
  cmd_shape(outdir / A::kIr, outdir / A::kT60X, outdir / A::kT60Y, config,
            outdir / A::kShapedIr, outdir / A::kDecay);
  cmd_filter(z_wav, outdir / A::kShapedIr, config, outdir / A::kFiltered);
  return cmd_metrics(z_wav, outdir / A::kFiltered, outdir / A::kIr,
                     outdir / A::kShapedIr, config, outdir / A::kMetrics);
}

}  // namespace dereverb
