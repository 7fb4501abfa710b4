#pragma once

// Brute-force reference implementations used to check the library.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <span>
#include <vector>

namespace oracle {

inline std::vector<std::complex<double>> dft(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      const double a = -2.0 * std::numbers::pi * static_cast<double>(k * v % n) /
                       static_cast<double>(n);
      acc += x[v] * std::complex<double>(std::cos(a), std::sin(a));
    }
    out[k] = acc;
  }
  return out;
}

// Real part of the inverse DFT of a real sequence.
inline std::vector<double> idft_real(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<double> out(n);
  for (std::size_t v = 0; v < n; ++v) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      acc += x[k] * std::cos(2.0 * std::numbers::pi *
                             static_cast<double>(k * v % n) /
                             static_cast<double>(n));
    }
    out[v] = acc / static_cast<double>(n);
  }
  return out;
}

inline std::vector<double> convolve(std::span<const double> x,
                                    std::span<const double> h) {
  std::vector<double> y(x.size() + h.size() - 1, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < h.size(); ++j) y[i + j] += x[i] * h[j];
  }
  return y;
}

// tail[eta] = sum_{k >= eta} s[k] / sum_k s[k], recomputed from scratch.
inline std::vector<double> tail_energy(const std::vector<double>& s) {
  double total = 0.0;
  for (double v : s) total += v;
  std::vector<double> out(s.size(), 0.0);
  if (total == 0.0) return out;
  for (std::size_t eta = 0; eta < s.size(); ++eta) {
    double acc = 0.0;
    for (std::size_t k = eta; k < s.size(); ++k) acc += s[k];
    out[eta] = acc / total;
  }
  return out;
}

// For S_eta = a r^eta over F frames the normalized tail is
// (r^eta - r^F) / (1 - r^F); it drops below thr at the first integer
// eta > log(thr (1 - r^F) + r^F) / log r.
inline double geometric_crossing_bound(double r, double thr, std::size_t frames) {
  const double rf = std::pow(r, static_cast<double>(frames));
  return std::log(thr * (1.0 - rf) + rf) / std::log(r);
}

inline std::size_t geometric_first_crossing(double r, double thr,
                                            std::size_t frames) {
  const double bound = geometric_crossing_bound(r, thr, frames);
  const auto eta = static_cast<std::size_t>(std::floor(bound)) + 1;
  return std::min(eta, frames);
}

inline std::vector<double> white_noise(std::size_t n, std::uint64_t seed,
                                       double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, scale);
  std::vector<double> v(n);
  for (auto& x : v) x = g(rng);
  return v;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    m = std::max(m, std::abs(a[i] - b[i]));
  }
  return m;
}

inline double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace oracle
