#include "lexdisc/feature_cache.h"

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "lexdisc/errors.h"

namespace lexdisc {

namespace {

constexpr char kMagic[4] = {'L', 'D', 'F', '1'};
constexpr uint32_t kVersion = 1;

void putU32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out += static_cast<char>((v >> (8 * i)) & 0xffu);
}

void putF64(std::string& out, double v) {
  auto bits = std::bit_cast<uint64_t>(v);
  for (int i = 0; i < 8; ++i) out += static_cast<char>((bits >> (8 * i)) & 0xffu);
}

uint32_t getU32(const std::string& in, std::size_t at) {
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<uint32_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
  }
  return v;
}

double getF64(const std::string& in, std::size_t at) {
  uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) {
    bits |= static_cast<uint64_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
  }
  return std::bit_cast<double>(bits);
}

}  // namespace

void writeFeatureRecord(const std::string& path, const FeatureSequence& features) {
  if (features.dim < 1 || features.numFrames() < 1) {
    throw UsageError("writeFeatureRecord: empty feature sequence");
  }
  std::string out;
  out.reserve(16 + features.values.size() * 8);
  out.append(kMagic, 4);
  putU32(out, kVersion);
  putU32(out, static_cast<uint32_t>(features.dim));
  putU32(out, static_cast<uint32_t>(features.numFrames()));
  for (double v : features.values) putF64(out, v);

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error("cannot open feature record for writing: " + path);
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw Error("write failure on feature record: " + path);
}

std::optional<FeatureSequence> readFeatureRecord(const std::string& path,
                                                 std::string token_id) {
  std::ifstream file(path, std::ios::binary);
  if (!file) return std::nullopt;
  std::string in((std::istreambuf_iterator<char>(file)),
                 std::istreambuf_iterator<char>());
  if (file.bad()) throw Error("read failure on feature record: " + path);

  if (in.size() < 16 || std::memcmp(in.data(), kMagic, 4) != 0) {
    throw Error("not a feature record: " + path);
  }
  if (getU32(in, 4) != kVersion) {
    throw Error("unsupported feature record version in " + path);
  }
  uint32_t dim = getU32(in, 8);
  uint32_t n_frames = getU32(in, 12);
  std::size_t expect = 16 + static_cast<std::size_t>(dim) * n_frames * 8;
  if (dim == 0 || n_frames == 0 || in.size() != expect) {
    throw Error("corrupt feature record: " + path);
  }

  FeatureSequence features;
  features.token_id = std::move(token_id);
  features.dim = static_cast<int>(dim);
  features.values.resize(static_cast<std::size_t>(dim) * n_frames);
  for (std::size_t i = 0; i < features.values.size(); ++i) {
    features.values[i] = getF64(in, 16 + i * 8);
  }
  return features;
}

}  // namespace lexdisc
