#pragma once

#include <complex>
#include <span>
#include <vector>

namespace lexdisc {

/// Smallest power of two >= n (n >= 1).
int nextPowerOfTwo(int n);

/// Radix-2 FFT plan for one transform size. Twiddle factors and the
/// bit-reversal permutation are precomputed once, so transforming many
/// frames of the same size is cheap and the arithmetic order is fixed
/// (results are bit-identical between runs and thread counts).
class FftPlan {
 public:
  explicit FftPlan(int n);  // n must be a power of two

  int size() const { return n_; }

  /// In-place forward DFT; a.size() must equal size().
  void transform(std::vector<std::complex<double>>& a) const;

  /// |X_k|^2 for k = 0..n/2 of the zero-padded frame.
  /// frame.size() must not exceed size().
  std::vector<double> powerSpectrum(std::span<const double> frame) const;

 private:
  int n_;
  std::vector<int> bitrev_;
  std::vector<std::complex<double>> twiddle_;  // exp(-2*pi*i*k/n), k < n/2
};

}  // namespace lexdisc
