#include "lexdisc/hashing.h"

#include <cstdio>
#include <fstream>
#include <vector>

#include "lexdisc/errors.h"

namespace lexdisc {

uint64_t fnv1a64File(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file for hashing: " + path);
  uint64_t h = kFnv64Offset;
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= kFnv64Prime;
    }
  }
  if (in.bad()) throw Error("read failure while hashing: " + path);
  return h;
}

std::string toHex(uint64_t value) {
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx",
                static_cast<unsigned long long>(value));
  return std::string(out);
}

}  // namespace lexdisc
