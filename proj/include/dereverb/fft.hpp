#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace dereverb {

// Complex DFT of arbitrary length backed by FFTW.
//
//   forward: X[mu] = sum_nu x[nu] e^{-j 2 pi mu nu / n}
//   inverse: x[nu] = (1/n) sum_mu X[mu] e^{+j 2 pi mu nu / n}
//
// An Fft owns its plans and aligned scratch, so one instance must not be
// used from two threads at once; create one per worker instead. Plan
// creation is serialized internally and uses FFTW_ESTIMATE, so the same
// length always yields the same plan and bit-identical results.
class Fft {
 public:
  explicit Fft(std::size_t n);
  ~Fft();
  Fft(Fft&& other) noexcept;
  Fft& operator=(Fft&& other) noexcept;
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  std::size_t size() const noexcept { return n_; }

  // `in` may be shorter than n (zero-padded); `out` must hold n values.
  void forward(std::span<const std::complex<double>> in,
               std::span<std::complex<double>> out);
  void forward(std::span<const double> in, std::span<std::complex<double>> out);

  void inverse(std::span<const std::complex<double>> in,
               std::span<std::complex<double>> out);
  // Real part of the inverse transform.
  void inverse_real(std::span<const std::complex<double>> in,
                    std::span<double> out);

 private:
  void release() noexcept;
  void execute(bool forward);

  std::size_t n_ = 0;
  std::complex<double>* in_ = nullptr;
  std::complex<double>* out_ = nullptr;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

}  // namespace dereverb
