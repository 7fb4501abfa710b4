#include "dereverb/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <utility>

#include "dereverb/errors.hpp"

namespace dereverb {
namespace {

// The FFTW planner is not thread safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(std::complex<double>* p) {
  return reinterpret_cast<fftw_complex*>(p);
}

}  // namespace

Fft::Fft(std::size_t n) : n_(n) {
  if (n == 0) throw ParameterError("fft: transform length must be positive");
  std::lock_guard lock(planner_mutex());
  in_ = reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(n));
  out_ = reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(n));
  if (in_ == nullptr || out_ == nullptr) {
    fftw_free(in_);
    fftw_free(out_);
    throw NumericalError("fft: allocation failed");
  }
  const int len = static_cast<int>(n);
  forward_plan_ = fftw_plan_dft_1d(len, as_fftw(in_), as_fftw(out_),
                                   FFTW_FORWARD, FFTW_ESTIMATE);
  inverse_plan_ = fftw_plan_dft_1d(len, as_fftw(in_), as_fftw(out_),
                                   FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft::~Fft() { release(); }

Fft::Fft(Fft&& other) noexcept
    : n_(std::exchange(other.n_, 0)),
      in_(std::exchange(other.in_, nullptr)),
      out_(std::exchange(other.out_, nullptr)),
      forward_plan_(std::exchange(other.forward_plan_, nullptr)),
      inverse_plan_(std::exchange(other.inverse_plan_, nullptr)) {}

Fft& Fft::operator=(Fft&& other) noexcept {
  if (this != &other) {
    release();
    n_ = std::exchange(other.n_, 0);
    in_ = std::exchange(other.in_, nullptr);
    out_ = std::exchange(other.out_, nullptr);
    forward_plan_ = std::exchange(other.forward_plan_, nullptr);
    inverse_plan_ = std::exchange(other.inverse_plan_, nullptr);
  }
  return *this;
}

void Fft::release() noexcept {
  if (in_ == nullptr && forward_plan_ == nullptr) return;
  std::lock_guard lock(planner_mutex());
  if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  if (inverse_plan_) fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
  fftw_free(in_);
  fftw_free(out_);
  forward_plan_ = inverse_plan_ = nullptr;
  in_ = out_ = nullptr;
}

void Fft::execute(bool forward) {
  fftw_execute(static_cast<fftw_plan>(forward ? forward_plan_ : inverse_plan_));
}

void Fft::forward(std::span<const std::complex<double>> in,
                  std::span<std::complex<double>> out) {
  const std::size_t m = std::min(in.size(), n_);
  std::copy_n(in.begin(), m, in_);
  std::fill(in_ + m, in_ + n_, std::complex<double>{});
  execute(true);
  std::copy_n(out_, n_, out.begin());
}

void Fft::forward(std::span<const double> in,
                  std::span<std::complex<double>> out) {
  const std::size_t m = std::min(in.size(), n_);
  for (std::size_t i = 0; i < m; ++i) in_[i] = {in[i], 0.0};
  std::fill(in_ + m, in_ + n_, std::complex<double>{});
  execute(true);
  std::copy_n(out_, n_, out.begin());
}

void Fft::inverse(std::span<const std::complex<double>> in,
                  std::span<std::complex<double>> out) {
  std::copy_n(in.begin(), n_, in_);
  execute(false);
  const double scale = 1.0 / static_cast<double>(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = out_[i] * scale;
}

void Fft::inverse_real(std::span<const std::complex<double>> in,
                       std::span<double> out) {
  std::copy_n(in.begin(), n_, in_);
  execute(false);
  const double scale = 1.0 / static_cast<double>(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = out_[i].real() * scale;
}

}  // namespace dereverb
