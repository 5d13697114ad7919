#pragma once

#include <string>
#include <vector>

// Audio ingestion. Only mono 16-bit PCM WAV is accepted; anything else
// raises IngestionError rather than being resampled or downmixed.

namespace lexdisc {

struct AudioClip {
  int sample_rate = 0;
  std::vector<double> samples;  // int16 values scaled by 1/32768

  double durationS() const {
    return sample_rate == 0
               ? 0.0
               : static_cast<double>(samples.size()) / sample_rate;
  }
};

AudioClip loadWavMono(const std::string& path);

/// Extracts [start_s, end_s) with sample indices rounded to nearest.
/// The interval must lie within the clip.
AudioClip sliceSeconds(const AudioClip& clip, double start_s, double end_s);

}  // namespace lexdisc
