#include "lexdisc/wav.h"

#include <cmath>
#include <cstdint>
#include <fstream>

#include "lexdisc/errors.h"

namespace lexdisc {

namespace {

uint32_t readU32(const std::string& bytes, std::size_t at) {
  return static_cast<uint32_t>(static_cast<unsigned char>(bytes[at])) |
         static_cast<uint32_t>(static_cast<unsigned char>(bytes[at + 1])) << 8 |
         static_cast<uint32_t>(static_cast<unsigned char>(bytes[at + 2])) << 16 |
         static_cast<uint32_t>(static_cast<unsigned char>(bytes[at + 3])) << 24;
}

uint16_t readU16(const std::string& bytes, std::size_t at) {
  return static_cast<uint16_t>(
      static_cast<unsigned char>(bytes[at]) |
      static_cast<unsigned char>(bytes[at + 1]) << 8);
}

}  // namespace

AudioClip loadWavMono(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestionError("cannot open audio file: " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  if (in.bad()) throw IngestionError("read failure on audio file: " + path);

  if (bytes.size() < 12 || bytes.compare(0, 4, "RIFF") != 0 ||
      bytes.compare(8, 4, "WAVE") != 0) {
    throw IngestionError("not a RIFF/WAVE file: " + path);
  }

  bool have_fmt = false;
  uint16_t format_tag = 0, channels = 0, bits = 0;
  uint32_t sample_rate = 0;
  std::size_t data_at = 0, data_size = 0;

  std::size_t at = 12;
  while (at + 8 <= bytes.size()) {
    std::string id = bytes.substr(at, 4);
    uint32_t size = readU32(bytes, at + 4);
    std::size_t body = at + 8;
    if (body + size > bytes.size()) {
      throw IngestionError("truncated chunk '" + id + "' in " + path);
    }
    if (id == "fmt ") {
      if (size < 16) throw IngestionError("fmt chunk too small in " + path);
      format_tag = readU16(bytes, body);
      channels = readU16(bytes, body + 2);
      sample_rate = readU32(bytes, body + 4);
      bits = readU16(bytes, body + 14);
      have_fmt = true;
    } else if (id == "data") {
      data_at = body;
      data_size = size;
    }
    at = body + size + (size & 1);  // chunks are word-aligned
  }

  if (!have_fmt || data_at == 0) {
    throw IngestionError("missing fmt or data chunk in " + path);
  }
  if (format_tag != 1) {
    throw IngestionError("unsupported encoding (need PCM) in " + path);
  }
  if (channels != 1) {
    throw IngestionError("expected mono audio, got " +
                         std::to_string(channels) + " channels in " + path);
  }
  if (bits != 16) {
    throw IngestionError("expected 16-bit samples, got " +
                         std::to_string(bits) + "-bit in " + path);
  }
  if (sample_rate == 0) throw IngestionError("zero sample rate in " + path);

  AudioClip clip;
  clip.sample_rate = static_cast<int>(sample_rate);
  std::size_t n = data_size / 2;
  clip.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto u = static_cast<uint16_t>(readU16(bytes, data_at + 2 * i));
    clip.samples[i] = static_cast<double>(static_cast<int16_t>(u)) / 32768.0;
  }
  return clip;
}

AudioClip sliceSeconds(const AudioClip& clip, double start_s, double end_s) {
  if (!(start_s >= 0.0) || !(end_s > start_s)) {
    throw UsageError("sliceSeconds: need 0 <= start_s < end_s");
  }
  auto begin = static_cast<std::size_t>(std::lround(start_s * clip.sample_rate));
  auto end = static_cast<std::size_t>(std::lround(end_s * clip.sample_rate));
  if (end > clip.samples.size()) {
    throw IngestionError("interval " + std::to_string(start_s) + ".." +
                         std::to_string(end_s) +
                         "s extends past end of audio (" +
                         std::to_string(clip.durationS()) + "s)");
  }
  AudioClip out;
  out.sample_rate = clip.sample_rate;
  out.samples.assign(clip.samples.begin() + static_cast<std::ptrdiff_t>(begin),
                     clip.samples.begin() + static_cast<std::ptrdiff_t>(end));
  return out;
}

}  // namespace lexdisc
