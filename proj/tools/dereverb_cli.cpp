// dereverb: single-channel dereverberation from the command line.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "dereverb/commands.hpp"
#include "dereverb/errors.hpp"
#include "dereverb/parallel.hpp"

namespace {

using dereverb::PipelineConfig;

// Flag values, applied over the config file when given.
struct Overrides {
  std::string config_path;
  std::optional<double> fs;
  std::optional<std::size_t> n_dft;
  std::optional<std::size_t> n_hop;
  std::optional<double> eps_analysis;
  std::optional<double> eps_filter;
  std::optional<double> t60_threshold;
  std::optional<double> rho_floor;
  std::optional<double> dk;
  std::optional<double> f0;
  std::optional<double> f1;
  std::optional<double> duration;
  std::optional<int> periods;
  std::size_t threads = 0;

  PipelineConfig resolve() const {
    PipelineConfig c;
    if (!config_path.empty()) c = dereverb::load_config(config_path);
    if (fs) c.sample_rate = *fs;
    if (n_dft) c.n_dft = *n_dft;
    if (n_hop) c.n_hop = *n_hop;
    if (eps_analysis) c.epsilon_analysis = *eps_analysis;
    if (eps_filter) c.epsilon_filter = *eps_filter;
    if (t60_threshold) c.t60_threshold = *t60_threshold;
    if (rho_floor) c.rho_floor = *rho_floor;
    if (dk) c.dk = *dk;
    if (f0) c.chirp.f0_hz = *f0;
    if (f1) c.chirp.f1_hz = *f1;
    if (duration) c.chirp.duration_s = *duration;
    if (periods) c.chirp.periods = *periods;
    c.validate();
    return c;
  }
};

std::string default_sibling(const std::string& path, const std::string& suffix) {
  std::filesystem::path p(path);
  return (p.parent_path() / (p.stem().string() + suffix)).string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-channel dereverberation toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  Overrides o;
  std::string out;
  app.add_option("--config", o.config_path, "JSON config file")
      ->check(CLI::ExistingFile);
  app.add_option("--fs", o.fs, "Sample rate in Hz");
  app.add_option("--n-dft", o.n_dft, "Frame length in samples (default 5*fs)");
  app.add_option("--n-hop", o.n_hop, "Hop in samples (default n_dft/2)");
  app.add_option("--eps-analysis", o.eps_analysis, "Cepstral magnitude floor");
  app.add_option("--eps-filter", o.eps_filter, "Filter denominator floor");
  app.add_option("--t60-threshold", o.t60_threshold, "Tail energy threshold");
  app.add_option("--rho-floor", o.rho_floor, "Floor for T60 ratios");
  app.add_option("--dk", o.dk, "Global per-sample decay rate");
  app.add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  app.add_option("--out", out, "Output file or directory");

  auto* chirp = app.add_subcommand("chirp", "Write the calibration sweep");
  chirp->add_option("--f0", o.f0, "Start frequency in Hz");
  chirp->add_option("--f1", o.f1, "End frequency in Hz (default Nyquist)");
  chirp->add_option("--duration", o.duration, "Period length T in seconds");
  chirp->add_option("--periods", o.periods, "Number of periods P");

  std::string x, y, z, ir, in, t60x, t60y, before, after, ir_before, ir_after,
      dry, channel, decay_out, ir_out;

  auto* identify = app.add_subcommand("identify", "Estimate the IR from x, y");
  identify->add_option("x", x, "Excitation WAV")->required();
  identify->add_option("y", y, "Recorded WAV")->required();

  auto* t60 = app.add_subcommand("t60", "Per-bin T60 profile as CSV");
  t60->add_option("input", in, "Input WAV")->required();

  auto* shape = app.add_subcommand("shape", "Shape an IR with T60 ratios");
  shape->add_option("ir", ir, "IR WAV")->required();
  shape->add_option("t60_x", t60x, "T60 profile of the excitation")->required();
  shape->add_option("t60_y", t60y, "T60 profile of the recording")->required();
  shape->add_option("--decay-out", decay_out, "Decay matrix CSV");

  auto* filter = app.add_subcommand("filter", "Inverse-filter a recording");
  filter->add_option("z", z, "Recording WAV")->required();
  filter->add_option("ir", ir, "Shaped IR WAV")->required();

  auto* metrics = app.add_subcommand("metrics", "Compare before/after");
  metrics->add_option("before", before, "Unfiltered WAV")->required();
  metrics->add_option("after", after, "Filtered WAV")->required();
  metrics->add_option("--ir-before", ir_before, "IR before shaping");
  metrics->add_option("--ir-after", ir_after, "IR after shaping");

  auto* simulate = app.add_subcommand("simulate", "Convolve with a channel");
  simulate->add_option("dry", dry, "Dry WAV")->required();
  simulate->add_option("channel", channel, "Channel JSON")->required();
  simulate->add_option("--ir-out", ir_out, "True IR WAV");

  auto* pipeline = app.add_subcommand("pipeline", "Run every stage");
  pipeline->add_option("x", x, "Excitation WAV")->required();
  pipeline->add_option("y", y, "Recorded WAV")->required();
  pipeline->add_option("z", z, "Signal to dereverberate")->required();

  for (auto* sub : app.get_subcommands({})) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(dereverb::ExitCode::kValidationError);
  }

  try {
    dereverb::set_max_threads(o.threads);
    const PipelineConfig config = o.resolve();
    if (out.empty()) throw dereverb::ParameterError("--out is required");

    if (*chirp) {
      const auto r = dereverb::cmd_chirp(config, out);
      std::printf("wrote %s: %.6g s, N = %zu samples per period\n", out.c_str(),
                  r.duration_s, r.period_samples);
    } else if (*identify) {
      dereverb::cmd_identify(x, y, config, out);
    } else if (*t60) {
      dereverb::cmd_t60(in, config, out);
    } else if (*shape) {
      if (decay_out.empty()) decay_out = default_sibling(out, "_decay.csv");
      dereverb::cmd_shape(ir, t60x, t60y, config, out, decay_out);
    } else if (*filter) {
      dereverb::cmd_filter(z, ir, config, out);
    } else if (*metrics) {
      std::optional<std::filesystem::path> ib, ia;
      if (!ir_before.empty()) ib = ir_before;
      if (!ir_after.empty()) ia = ir_after;
      dereverb::cmd_metrics(before, after, ib, ia, config, out);
    } else if (*simulate) {
      if (ir_out.empty()) ir_out = default_sibling(out, "_ir.wav");
      dereverb::cmd_simulate(dry, channel, out, ir_out);
    } else if (*pipeline) {
      const auto r = dereverb::cmd_pipeline(x, y, z, config, out);
      std::printf("LPA %.3f dB, T60 %.6g s -> %.6g s\n", r.lpa_db,
                  r.t60_broadband_before_s, r.t60_broadband_after_s);
    }
  } catch (const dereverb::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(e.exit_code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(dereverb::ExitCode::kFailure);
  }
  return 0;
}
