#include "lexdisc/fft.h"

#include <cmath>
#include <numbers>

#include "lexdisc/errors.h"

namespace lexdisc {

int nextPowerOfTwo(int n) {
  if (n < 1) throw UsageError("nextPowerOfTwo: n must be positive");
  int p = 1;
  while (p < n) p *= 2;
  return p;
}

FftPlan::FftPlan(int n) : n_(n) {
  if (n < 1 || (n & (n - 1)) != 0) {
    throw UsageError("FftPlan: size must be a power of two, got " +
                     std::to_string(n));
  }
  bitrev_.resize(static_cast<std::size_t>(n));
  int bits = 0;
  while ((1 << bits) < n) ++bits;
  for (int i = 0; i < n; ++i) {
    int rev = 0;
    for (int b = 0; b < bits; ++b) {
      if (i & (1 << b)) rev |= 1 << (bits - 1 - b);
    }
    bitrev_[static_cast<std::size_t>(i)] = rev;
  }
  twiddle_.resize(static_cast<std::size_t>(n / 2));
  for (int k = 0; k < n / 2; ++k) {
    double angle = -2.0 * std::numbers::pi * k / n;
    twiddle_[static_cast<std::size_t>(k)] = {std::cos(angle), std::sin(angle)};
  }
}

void FftPlan::transform(std::vector<std::complex<double>>& a) const {
  if (static_cast<int>(a.size()) != n_) {
    throw UsageError("FftPlan::transform: buffer size mismatch");
  }
  for (int i = 0; i < n_; ++i) {
    int j = bitrev_[static_cast<std::size_t>(i)];
    if (i < j) std::swap(a[static_cast<std::size_t>(i)], a[static_cast<std::size_t>(j)]);
  }
  for (int len = 2; len <= n_; len *= 2) {
    int stride = n_ / len;
    for (int block = 0; block < n_; block += len) {
      for (int k = 0; k < len / 2; ++k) {
        auto& lo = a[static_cast<std::size_t>(block + k)];
        auto& hi = a[static_cast<std::size_t>(block + k + len / 2)];
        std::complex<double> t =
            twiddle_[static_cast<std::size_t>(k * stride)] * hi;
        hi = lo - t;
        lo += t;
      }
    }
  }
}

std::vector<double> FftPlan::powerSpectrum(std::span<const double> frame) const {
  if (static_cast<int>(frame.size()) > n_) {
    throw UsageError("FftPlan::powerSpectrum: frame longer than plan size");
  }
  std::vector<std::complex<double>> buf(static_cast<std::size_t>(n_));
  for (std::size_t i = 0; i < frame.size(); ++i) buf[i] = frame[i];
  transform(buf);
  std::vector<double> power(static_cast<std::size_t>(n_ / 2 + 1));
  for (int k = 0; k <= n_ / 2; ++k) {
    power[static_cast<std::size_t>(k)] = std::norm(buf[static_cast<std::size_t>(k)]);
  }
  return power;
}

}  // namespace lexdisc
