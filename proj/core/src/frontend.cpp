#include "lexdisc/frontend.h"

#include <cmath>
#include <numbers>

#include "lexdisc/errors.h"
#include "lexdisc/fft.h"

namespace lexdisc {

double hzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double melToHz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

MelFilterbank::MelFilterbank(const FrontendConfig& config, int sample_rate,
                             int fft_size) {
  if (config.n_filters < 1) {
    throw ConfigError("filterbank: need at least one filter");
  }
  if (!(config.f_min_hz >= 0.0) || !(config.f_max_hz > config.f_min_hz)) {
    throw ConfigError("filterbank: need 0 <= f_min < f_max");
  }
  double nyquist = sample_rate / 2.0;
  if (config.f_max_hz > nyquist) {
    throw ConfigError("filterbank: f_max " + std::to_string(config.f_max_hz) +
                      " Hz exceeds Nyquist " + std::to_string(nyquist) + " Hz");
  }

  n_bins_ = fft_size / 2 + 1;
  double mel_min = hzToMel(config.f_min_hz);
  double mel_max = hzToMel(config.f_max_hz);
  int n_edges = config.n_filters + 2;
  edges_mel_.resize(static_cast<std::size_t>(n_edges));
  for (int j = 0; j < n_edges; ++j) {
    edges_mel_[static_cast<std::size_t>(j)] =
        mel_min + (mel_max - mel_min) * j / (n_edges - 1);
  }

  std::vector<double> bin_mel(static_cast<std::size_t>(n_bins_));
  for (int k = 0; k < n_bins_; ++k) {
    double hz = static_cast<double>(k) * sample_rate / fft_size;
    bin_mel[static_cast<std::size_t>(k)] = hzToMel(hz);
  }

  filters_.resize(static_cast<std::size_t>(config.n_filters));
  for (int f = 0; f < config.n_filters; ++f) {
    double left = edges_mel_[static_cast<std::size_t>(f)];
    double center = edges_mel_[static_cast<std::size_t>(f + 1)];
    double right = edges_mel_[static_cast<std::size_t>(f + 2)];
    Filter& filter = filters_[static_cast<std::size_t>(f)];
    filter.first_bin = -1;
    for (int k = 0; k < n_bins_; ++k) {
      double mel = bin_mel[static_cast<std::size_t>(k)];
      if (!(mel > left && mel < right)) continue;
      double w = mel <= center ? (mel - left) / (center - left)
                               : (right - mel) / (right - center);
      if (filter.first_bin < 0) filter.first_bin = k;
      filter.weights.resize(static_cast<std::size_t>(k - filter.first_bin) + 1,
                            0.0);
      filter.weights.back() = w;
    }
    if (filter.first_bin < 0) {
      throw ConfigError("filterbank: filter " + std::to_string(f) +
                        " covers no FFT bin; raise fft size or widen band");
    }
  }
}

std::vector<double> MelFilterbank::apply(std::span<const double> power) const {
  if (static_cast<int>(power.size()) != n_bins_) {
    throw UsageError("MelFilterbank::apply: power spectrum size mismatch");
  }
  std::vector<double> energies(filters_.size());
  for (std::size_t f = 0; f < filters_.size(); ++f) {
    const Filter& filter = filters_[f];
    double e = 0.0;
    for (std::size_t i = 0; i < filter.weights.size(); ++i) {
      e += filter.weights[i] *
           power[static_cast<std::size_t>(filter.first_bin) + i];
    }
    energies[f] = e;
  }
  return energies;
}

double MelFilterbank::weight(int filter, int bin) const {
  const Filter& f = filters_.at(static_cast<std::size_t>(filter));
  int offset = bin - f.first_bin;
  if (offset < 0 || offset >= static_cast<int>(f.weights.size())) return 0.0;
  return f.weights[static_cast<std::size_t>(offset)];
}

int frameCount(long long n_samples, int window_samples, int hop_samples) {
  if (window_samples < 1 || hop_samples < 1) {
    throw ConfigError("frameCount: window and hop must be at least one sample");
  }
  if (n_samples < window_samples) n_samples = window_samples;
  return static_cast<int>((n_samples - window_samples) / hop_samples) + 1;
}

FeatureSequence featurize(const AudioClip& clip, const FrontendConfig& config,
                          std::string token_id) {
  if (clip.sample_rate < 1) throw IngestionError("featurize: clip has no sample rate");
  if (static_cast<double>(clip.sample_rate) < 2.0 * config.f_max_hz) {
    throw IngestionError("featurize: sample rate " +
                         std::to_string(clip.sample_rate) +
                         " Hz is too low for f_max " +
                         std::to_string(config.f_max_hz) + " Hz");
  }
  int window = static_cast<int>(std::lround(config.window_s * clip.sample_rate));
  int hop = static_cast<int>(std::lround(config.hop_s * clip.sample_rate));
  if (window < 1 || hop < 1) {
    throw ConfigError("featurize: window and hop must round to at least one sample");
  }

  int fft_size = nextPowerOfTwo(window);
  FftPlan plan(fft_size);
  MelFilterbank bank(config, clip.sample_rate, fft_size);

  std::vector<double> hamming(static_cast<std::size_t>(window));
  for (int i = 0; i < window; ++i) {
    hamming[static_cast<std::size_t>(i)] =
        window == 1 ? 1.0
                    : 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * i /
                                             (window - 1));
  }

  // Short tokens are zero-padded to one full window.
  std::vector<double> samples = clip.samples;
  if (static_cast<int>(samples.size()) < window) {
    samples.resize(static_cast<std::size_t>(window), 0.0);
  }
  int n_frames =
      frameCount(static_cast<long long>(samples.size()), window, hop);

  FeatureSequence out;
  out.token_id = std::move(token_id);
  out.dim = bank.numFilters();
  out.values.reserve(static_cast<std::size_t>(n_frames) * out.dim);
  std::vector<double> frame(static_cast<std::size_t>(window));
  for (int t = 0; t < n_frames; ++t) {
    std::size_t offset = static_cast<std::size_t>(t) * hop;
    for (int i = 0; i < window; ++i) {
      frame[static_cast<std::size_t>(i)] =
          samples[offset + static_cast<std::size_t>(i)] *
          hamming[static_cast<std::size_t>(i)];
    }
    std::vector<double> power = plan.powerSpectrum(frame);
    std::vector<double> energies = bank.apply(power);
    for (double e : energies) out.values.push_back(std::cbrt(e));
  }
  return out;
}

}  // namespace lexdisc
