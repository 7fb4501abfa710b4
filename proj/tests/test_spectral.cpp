#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "dereverb/diagnostics.hpp"
#include "dereverb/errors.hpp"
#include "dereverb/parallel.hpp"
#include "dereverb/spectral.hpp"
#include "oracles.hpp"

using namespace dereverb;

namespace {

double interior_rel_error(std::span<const double> a, std::span<const double> b,
                          std::size_t margin) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = margin; i + margin < a.size(); ++i) {
    num = std::max(num, std::abs(a[i] - b[i]));
    den = std::max(den, std::abs(a[i]));
  }
  return num / den;
}

}  // namespace

TEST(FrameParams, Validation) {
  EXPECT_THROW(FrameParams::forward(0, 1, 8000.0).validate(), ParameterError);
  EXPECT_THROW(FrameParams::forward(8, 0, 8000.0).validate(), ParameterError);
  EXPECT_THROW(FrameParams::forward(8, 9, 8000.0).validate(), ParameterError);
  EXPECT_THROW(FrameParams::forward(8, 4, 0.0).validate(), ParameterError);
  EXPECT_NO_THROW(FrameParams::forward(8, 8, 8000.0).validate());
  EXPECT_DOUBLE_EQ(FrameParams::forward(8, 2, 1.0).overlap(), 0.75);
}

TEST(Stft, FrameCountPadsRight) {
  const auto p = FrameParams::forward(8, 4, 1.0);
  EXPECT_EQ(stft(std::vector<double>(16, 1.0), p).n_frames(), 4u);
  EXPECT_EQ(stft(std::vector<double>(17, 1.0), p).n_frames(), 5u);
  EXPECT_EQ(stft(std::vector<double>(1, 1.0), p).n_frames(), 1u);
}

TEST(Stft, DeltaGivesFlatSpectrum) {
  std::vector<double> s(16, 0.0);
  s[0] = 1.0;
  const auto g = stft(s, FrameParams::forward(8, 4, 1.0));
  for (std::size_t mu = 0; mu < 8; ++mu) {
    EXPECT_NEAR(g(mu, 0).real(), 1.0, 1e-15);
    EXPECT_NEAR(g(mu, 0).imag(), 0.0, 1e-15);
  }
}

TEST(Stft, ConstantGivesDcOnly) {
  const auto g = stft(std::vector<double>(8, 1.0), FrameParams::forward(8, 4, 1.0));
  EXPECT_NEAR(g(0, 0).real(), 8.0, 1e-12);
  for (std::size_t mu = 1; mu < 8; ++mu) EXPECT_NEAR(std::abs(g(mu, 0)), 0.0, 1e-12);
}

TEST(Stft, MatchesDirectDft) {
  const auto s = oracle::white_noise(64, 21);
  for (Window w : {Window::kRectangular, Window::kHann}) {
    const auto p = FrameParams::forward(16, 8, 1.0, w);
    const auto g = stft(s, p);
    const auto win = make_window(w, 16);
    ASSERT_EQ(g.n_frames(), 8u);
    for (std::size_t eta = 0; eta < g.n_frames(); ++eta) {
      std::vector<double> frame(16, 0.0);
      for (std::size_t nu = 0; nu < 16; ++nu) {
        const std::size_t i = eta * 8 + nu;
        if (i < s.size()) frame[nu] = s[i] * win[nu];
      }
      const auto ref = oracle::dft(frame);
      for (std::size_t mu = 0; mu < 16; ++mu) {
        EXPECT_LT(std::abs(g(mu, eta) - ref[mu]), 1e-10);
      }
    }
  }
}

TEST(Stft, CentredFramingShiftsByLead) {
  const auto s = oracle::white_noise(40, 22);
  const auto p = FrameParams::centred(16, 8, 1.0, Window::kRectangular);
  const auto g = stft(s, p);
  EXPECT_EQ(g.n_frames(), 6u);
  std::vector<double> frame(16, 0.0);
  for (std::size_t nu = 8; nu < 16; ++nu) frame[nu] = s[nu - 8];
  const auto ref = oracle::dft(frame);
  for (std::size_t mu = 0; mu < 16; ++mu) EXPECT_LT(std::abs(g(mu, 0) - ref[mu]), 1e-10);
}

TEST(Stft, Parseval) {
  const auto s = oracle::white_noise(32, 23);
  const auto g = stft(s, FrameParams::forward(32, 16, 1.0));
  double time = 0.0, freq = 0.0;
  for (double v : s) time += v * v;
  for (std::size_t mu = 0; mu < 32; ++mu) freq += std::norm(g(mu, 0));
  EXPECT_NEAR(time, freq / 32.0, 1e-9 * time);
}

TEST(Stft, Linear) {
  const auto a = oracle::white_noise(50, 24);
  const auto b = oracle::white_noise(50, 25);
  std::vector<double> mix(50);
  for (std::size_t i = 0; i < 50; ++i) mix[i] = 2.0 * a[i] - 0.5 * b[i];
  const auto p = FrameParams::forward(16, 8, 1.0, Window::kHann);
  const auto ga = stft(a, p), gb = stft(b, p), gm = stft(mix, p);
  for (std::size_t eta = 0; eta < gm.n_frames(); ++eta) {
    for (std::size_t mu = 0; mu < 16; ++mu) {
      const auto expect = 2.0 * ga(mu, eta) - 0.5 * gb(mu, eta);
      EXPECT_LE(std::abs(gm(mu, eta) - expect), 1e-12 * (1.0 + std::abs(expect)));
    }
  }
}

TEST(Istft, RoundTripInterior) {
  for (std::size_t n : {64u, 256u}) {
    const auto s = oracle::white_noise(10 * n + 7, 26 + n);
    const auto p = FrameParams::forward(n, n / 2, 1.0, Window::kHann);
    const Signal back = istft(stft(s, p));
    ASSERT_EQ(back.size(), s.size());
    EXPECT_LT(interior_rel_error(s, back.samples(), n), 1e-9);
  }
}

TEST(Istft, CentredRoundTripIncludesEdges) {
  const auto s = oracle::white_noise(300, 27);
  const auto p = FrameParams::centred(32, 16, 1.0);
  const Signal back = istft(stft(s, p));
  EXPECT_LT(oracle::max_abs_diff(s, back.samples()), 1e-12);
}

TEST(Istft, ZeroSpectrogramGivesSilence) {
  Spectrogram g(FrameParams::forward(8, 4, 1.0, Window::kHann), 3, 10);
  const Signal s = istft(g);
  ASSERT_EQ(s.size(), 10u);
  for (double v : s.samples()) EXPECT_EQ(v, 0.0);
}

TEST(Istft, SingleFrameWindowedDelta) {
  // The frame holds the spectrum of w[k] * delta_k. Synthesis multiplies by
  // w[k] again and the envelope divides by w[k]^2, restoring a unit delta.
  const std::size_t n = 16, k = 5;
  const auto w = make_window(Window::kHann, n);
  std::vector<double> frame(n, 0.0);
  frame[k] = w[k];
  const auto spec = oracle::dft(frame);
  Spectrogram g(FrameParams::forward(n, n / 2, 1.0, Window::kHann), 1, n);
  for (std::size_t mu = 0; mu < n; ++mu) g(mu, 0) = spec[mu];
  const Signal s = istft(g);
  for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(s[i], i == k ? 1.0 : 0.0, 1e-12);
}

TEST(Istft, WarnsWhenHopIsNotHalf) {
  std::vector<std::string> msgs;
  ScopedWarningCapture cap([&](std::string_view m) { msgs.emplace_back(m); });
  const auto s = oracle::white_noise(100, 28);
  const auto p = FrameParams::forward(16, 4, 1.0, Window::kHann);
  const Signal back = istft(stft(s, p));
  EXPECT_EQ(msgs.size(), 1u);
  EXPECT_LT(interior_rel_error(s, back.samples(), 16), 1e-9);
}

TEST(RegularizedMagnitude, FloorsAndPassesThrough) {
  Spectrogram g(FrameParams::forward(4, 2, 1.0), 2, 4);
  g(1, 0) = {0.3, 0.0};
  g(2, 1) = {3.0, 4.0};
  const auto m = regularized_magnitude(g, 1e-10);
  EXPECT_EQ(m(0, 0), 1e-10);
  EXPECT_EQ(m(1, 0), 0.3);
  EXPECT_EQ(m(2, 1), 5.0);
  EXPECT_THROW(regularized_magnitude(g, 0.0), ParameterError);
}

TEST(RegularizedMagnitude, BoundsOnRandomMatrix) {
  const auto s = oracle::white_noise(64, 29, 1e-9);
  const auto g = stft(s, FrameParams::forward(16, 8, 1.0));
  const double eps = 1e-9;
  const auto m = regularized_magnitude(g, eps);
  for (std::size_t eta = 0; eta < g.n_frames(); ++eta) {
    for (std::size_t mu = 0; mu < 16; ++mu) {
      EXPECT_GE(m(mu, eta), eps);
      EXPECT_GE(m(mu, eta), std::abs(g(mu, eta)));
    }
  }
}

TEST(ProcessFrames, IdentityMatchesIstftOfStft) {
  const auto s = oracle::white_noise(1000, 30);
  const auto p = FrameParams::centred(64, 32, 1.0);
  const auto streamed =
      process_frames(s, p, Window::kHann, [](std::size_t, auto) {});
  const Signal ref = istft(stft(s, p));
  ASSERT_EQ(streamed.size(), ref.size());
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(streamed[i], ref[i]);
}

TEST(Parallel, StftIsIndependentOfThreadCount) {
  const auto s = oracle::white_noise(5000, 31);
  const auto p = FrameParams::forward(128, 64, 1.0, Window::kHann);
  set_max_threads(1);
  const auto a = stft(s, p);
  const auto ra = istft(a);
  set_max_threads(4);
  const auto b = stft(s, p);
  const auto rb = istft(b);
  set_max_threads(0);
  const auto da = a.matrix().data(), db = b.matrix().data();
  ASSERT_EQ(da.size(), db.size());
  EXPECT_TRUE(std::equal(da.begin(), da.end(), db.begin()));
  EXPECT_TRUE(std::equal(ra.samples().begin(), ra.samples().end(),
                         rb.samples().begin()));
}
