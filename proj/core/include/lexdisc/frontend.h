#pragma once

#include <span>
#include <string>
#include <vector>

#include "lexdisc/wav.h"

// Mel filterbank front-end. Each analysis frame is Hamming-windowed,
// transformed to a power spectrum, pooled through triangular mel-spaced
// filters, and amplitude-compressed with a cube root. Tokens shorter
// than one window are zero-padded so every token yields at least one
// frame.

namespace lexdisc {

struct FrontendConfig {
  int n_filters = 13;
  double f_min_hz = 100.0;
  double f_max_hz = 6855.0;
  double hop_s = 0.010;
  double window_s = 0.025;
};

/// mel = 2595 * log10(1 + hz / 700)
double hzToMel(double hz);
double melToHz(double mel);

struct FeatureSequence {
  std::string token_id;
  int dim = 0;
  std::vector<double> values;  // numFrames() x dim, frame-major

  int numFrames() const {
    return dim == 0 ? 0 : static_cast<int>(values.size()) / dim;
  }
  std::span<const double> frame(int i) const {
    return {values.data() + static_cast<std::size_t>(i) * dim,
            static_cast<std::size_t>(dim)};
  }
};

/// Triangular filters over n_filters + 2 points equally spaced in mel
/// between f_min and f_max; filter i spans points i..i+2 with its peak at
/// point i+1, and weights are computed in the mel domain. Construction
/// fails if f_max exceeds Nyquist or any filter covers no FFT bin.
class MelFilterbank {
 public:
  MelFilterbank(const FrontendConfig& config, int sample_rate, int fft_size);

  int numFilters() const { return static_cast<int>(filters_.size()); }
  int numBins() const { return n_bins_; }

  /// Pooled energies, one per filter; power.size() must equal numBins().
  std::vector<double> apply(std::span<const double> power) const;

  /// Weight of one filter at one FFT bin (zero outside its support).
  double weight(int filter, int bin) const;

  /// The n_filters + 2 edge points, in mels.
  const std::vector<double>& edgesMel() const { return edges_mel_; }

 private:
  struct Filter {
    int first_bin = 0;
    std::vector<double> weights;
  };
  int n_bins_ = 0;
  std::vector<double> edges_mel_;
  std::vector<Filter> filters_;
};

/// Number of analysis frames for n_samples of audio (after padding to at
/// least one window): (n - window) / hop + 1 with integer division.
int frameCount(long long n_samples, int window_samples, int hop_samples);

/// Runs the front-end over a clip. Requires sample_rate >= 2 * f_max
/// (IngestionError otherwise); invalid window/hop/filter settings raise
/// ConfigError.
FeatureSequence featurize(const AudioClip& clip, const FrontendConfig& config,
                          std::string token_id = "");

}  // namespace lexdisc
