#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "dereverb/cepstral.hpp"
#include "dereverb/commands.hpp"
#include "dereverb/errors.hpp"
#include "dereverb/inverse_filter.hpp"
#include "dereverb/metrics.hpp"
#include "dereverb/parallel.hpp"
#include "dereverb/shaper.hpp"
#include "dereverb/simulate.hpp"
#include "dereverb/t60.hpp"
#include "dereverb/wav.hpp"

namespace py = pybind11;
using namespace dereverb;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vector(const Array& a) {
  if (a.ndim() != 1) throw ParameterError("expected a 1-D array");
  return {a.data(), a.data() + a.size()};
}

Array to_array(std::span<const double> v) {
  Array out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

template <typename T>
py::array_t<T> to_array_t(const std::vector<T>& v) {
  py::array_t<T> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::dict stats_dict(const SignalStats& s) {
  py::dict d;
  d["min_sample"] = s.min_sample;
  d["max_sample"] = s.max_sample;
  d["peak_amplitude_db"] = s.peak_amplitude_db;
  d["dc_offset_db"] = s.dc_offset_db;
  d["min_rms_db"] = s.min_rms_db;
  d["max_rms_db"] = s.max_rms_db;
  d["avg_rms_db"] = s.avg_rms_db;
  return d;
}

T60Profile profile_from_seconds(const Array& t60, const FrameParams& p) {
  T60Profile prof;
  prof.params = p;
  prof.t60_paper_s = to_vector(t60);
  return prof;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "dereverb native core";

  auto& base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParameterError>(m, "ParameterError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());

  m.def("set_max_threads", &set_max_threads, py::arg("n"));
  m.def("max_threads", &max_threads);

  m.def(
      "generate_chirp",
      [](double f0, double f1, double duration, int periods, double fs) {
        ChirpSpec s{f0, f1, duration, periods, fs};
        return to_array(generate_chirp(s).samples());
      },
      py::arg("f0_hz"), py::arg("f1_hz"), py::arg("duration_s"),
      py::arg("periods"), py::arg("sample_rate"));

  m.def(
      "convolve",
      [](const Array& x, const Array& h) {
        Signal xs(to_vector(x), 1.0);
        ImpulseResponse hs(to_vector(h), 1.0);
        return to_array(convolve(xs, hs).samples());
      },
      py::arg("x"), py::arg("h"));

  m.def(
      "read_wav",
      [](const std::filesystem::path& path) {
        Signal s = read_wav(path);
        return py::make_tuple(to_array(s.samples()), s.sample_rate());
      },
      py::arg("path"), "Returns (samples, sample_rate).");
  m.def(
      "write_wav",
      [](const std::filesystem::path& path, const Array& x, double fs) {
        write_wav(path, Signal(to_vector(x), fs));
      },
      py::arg("path"), py::arg("samples"), py::arg("sample_rate"));

  m.def(
      "estimate_ir",
      [](const Array& x, const Array& y, double fs, std::size_t n_dft,
         std::optional<std::size_t> n_hop, double eps) {
        const auto p = FrameParams::forward(n_dft, n_hop.value_or(n_dft / 2), fs);
        return to_array(
            estimate_ir(Signal(to_vector(x), fs), Signal(to_vector(y), fs), p,
                        eps)
                .taps());
      },
      py::arg("x"), py::arg("y"), py::arg("sample_rate"), py::arg("n_dft"),
      py::arg("n_hop") = py::none(),
      py::arg("epsilon") = kDefaultAnalysisEpsilon);

  m.def(
      "t60_per_bin",
      [](const Array& s, double fs, std::size_t n_dft,
         std::optional<std::size_t> n_hop, double threshold) {
        const auto p = FrameParams::forward(n_dft, n_hop.value_or(n_dft / 2), fs);
        const auto prof =
            t60_per_bin(stft(Signal(to_vector(s), fs), p), threshold);
        py::dict d;
        d["t60_paper_s"] = to_array_t(prof.t60_paper_s);
        d["t60_hop_s"] = to_array_t(prof.t60_hop_s);
        d["eta"] = to_array_t(prof.eta_t60);
        d["censored"] = to_array_t(prof.censored);
        d["n_frames"] = prof.n_frames;
        return d;
      },
      py::arg("samples"), py::arg("sample_rate"), py::arg("n_dft"),
      py::arg("n_hop") = py::none(),
      py::arg("threshold") = kDefaultT60Threshold);

  m.def(
      "t60_broadband",
      [](const Array& s, double fs, std::size_t n_dft,
         std::optional<std::size_t> n_hop, double threshold) {
        const auto p = FrameParams::forward(n_dft, n_hop.value_or(n_dft / 2), fs);
        return t60_broadband(Signal(to_vector(s), fs), p, threshold);
      },
      py::arg("samples"), py::arg("sample_rate"), py::arg("n_dft"),
      py::arg("n_hop") = py::none(),
      py::arg("threshold") = kDefaultT60Threshold);

  m.def(
      "shape_ir",
      [](const Array& h, const Array& t60_x, const Array& t60_y, double fs,
         std::optional<std::size_t> n_hop, double rho_floor, double dk) {
        const ImpulseResponse ir(to_vector(h), fs);
        const std::size_t n_dft = static_cast<std::size_t>(t60_x.size());
        const std::size_t hop = n_hop.value_or(n_dft / 2);
        const auto analysis = FrameParams::forward(n_dft, hop, fs);
        const auto rho =
            t60_ratio(profile_from_seconds(t60_y, analysis),
                      profile_from_seconds(t60_x, analysis), rho_floor);
        const auto p = shaping_params(n_dft, hop, fs);
        const auto d =
            build_decay_matrix(rho, p, shaping_frame_count(ir.size(), p));
        return to_array(apply_global_decay(shape_ir(ir, d, p), dk).taps());
      },
      py::arg("h"), py::arg("t60_x"), py::arg("t60_y"), py::arg("sample_rate"),
      py::arg("n_hop") = py::none(), py::arg("rho_floor") = kDefaultRhoFloor,
      py::arg("dk") = 0.0,
      "Shapes h with per-bin T60 ratios; n_dft is len(t60_x).");

  py::class_<FilterBank>(m, "FilterBank")
      .def_property_readonly("n_dft",
                             [](const FilterBank& f) { return f.params.n_dft; })
      .def_readonly("epsilon", &FilterBank::epsilon)
      .def_readonly("ir_length", &FilterBank::ir_length)
      .def_property_readonly("response", [](const FilterBank& f) {
        py::array_t<std::complex<double>> out(
            static_cast<py::ssize_t>(f.response.size()));
        std::copy(f.response.begin(), f.response.end(), out.mutable_data());
        return out;
      });

  m.def(
      "build_filterbank",
      [](const Array& h, double fs, double eps) {
        return build_filterbank(ImpulseResponse(to_vector(h), fs), eps);
      },
      py::arg("h"), py::arg("sample_rate"),
      py::arg("epsilon") = kDefaultFilterEpsilon);
  m.def(
      "filter_signal",
      [](const Array& z, const FilterBank& fb) {
        return to_array(
            filter_signal(Signal(to_vector(z), fb.params.sample_rate), fb)
                .samples());
      },
      py::arg("z"), py::arg("filterbank"));

  m.def(
      "lpa",
      [](const Array& before, const Array& after) {
        return lpa(Signal(to_vector(before), 1.0), Signal(to_vector(after), 1.0));
      },
      py::arg("before"), py::arg("after"));
  m.def(
      "d50",
      [](const Array& h, double fs) {
        return d50(ImpulseResponse(to_vector(h), fs));
      },
      py::arg("h"), py::arg("sample_rate"));
  m.def(
      "signal_stats",
      [](const Array& s, double fs, double window) {
        return stats_dict(signal_stats(Signal(to_vector(s), fs), window));
      },
      py::arg("samples"), py::arg("sample_rate"),
      py::arg("rms_window_s") = kDefaultRmsWindowSeconds);

  py::class_<ChannelSpec>(m, "ChannelSpec")
      .def_static("from_json", &parse_channel_spec, py::arg("text"));
  m.def(
      "simulate",
      [](const Array& dry, double fs, const ChannelSpec& spec) {
        const auto sim = simulate(Signal(to_vector(dry), fs), spec);
        return py::make_tuple(to_array(sim.wet.samples()),
                              to_array(sim.ir.taps()));
      },
      py::arg("dry"), py::arg("sample_rate"), py::arg("channel"),
      "Returns (wet, true_ir).");

  m.def(
      "run_pipeline",
      [](const std::filesystem::path& x, const std::filesystem::path& y,
         const std::filesystem::path& z, const std::filesystem::path& outdir,
         const std::string& config_json) {
        const PipelineConfig cfg =
            config_json.empty() ? PipelineConfig{} : config_from_json(config_json);
        const auto r = cmd_pipeline(x, y, z, cfg, outdir);
        py::dict d;
        d["lpa_db"] = r.lpa_db;
        d["d50_percent_before"] = r.d50_percent_before;
        d["d50_percent_after"] = r.d50_percent_after;
        d["t60_broadband_before_s"] = r.t60_broadband_before_s;
        d["t60_broadband_after_s"] = r.t60_broadband_after_s;
        d["stats_before"] = stats_dict(r.stats_before);
        d["stats_after"] = stats_dict(r.stats_after);
        return d;
      },
      py::arg("x_wav"), py::arg("y_wav"), py::arg("z_wav"), py::arg("outdir"),
      py::arg("config_json") = std::string());
}
