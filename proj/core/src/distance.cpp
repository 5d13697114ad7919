#include "lexdisc/distance.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numbers>

#include "lexdisc/errors.h"
#include "lexdisc/parallel.h"

namespace lexdisc {

double frameDistance(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw UsageError("frameDistance: dimension mismatch (" +
                     std::to_string(u.size()) + " vs " +
                     std::to_string(v.size()) + ")");
  }
  if (u.empty()) throw UsageError("frameDistance: empty vectors");
  double dot = 0.0, nu = 0.0, nv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  bool u_zero = nu == 0.0, v_zero = nv == 0.0;
  if (u_zero && v_zero) return 0.0;
  if (u_zero || v_zero) return std::numbers::pi / 2.0;
  double cosine = dot / (std::sqrt(nu) * std::sqrt(nv));
  cosine = std::clamp(cosine, -1.0, 1.0);
  return std::acos(cosine);
}

double dtwDistance(const FeatureSequence& a, const FeatureSequence& b) {
  int na = a.numFrames(), nb = b.numFrames();
  if (na < 1 || nb < 1) throw UsageError("dtwDistance: empty sequence");
  if (a.dim != b.dim) {
    throw UsageError("dtwDistance: dimension mismatch (" +
                     std::to_string(a.dim) + " vs " + std::to_string(b.dim) +
                     ")");
  }

  // Cell value: (total, length) of the best alignment ending here, ordered
  // lexicographically so equal totals resolve to the shortest alignment.
  struct Cell {
    double total;
    int length;
  };
  auto better = [](const Cell& x, const Cell& y) {
    return x.total < y.total || (x.total == y.total && x.length < y.length);
  };

  std::vector<Cell> prev(static_cast<std::size_t>(nb));
  std::vector<Cell> curr(static_cast<std::size_t>(nb));
  for (int i = 0; i < na; ++i) {
    for (int j = 0; j < nb; ++j) {
      double d = frameDistance(a.frame(i), b.frame(j));
      Cell best;
      if (i == 0 && j == 0) {
        best = {0.0, 0};
      } else if (i == 0) {
        best = curr[static_cast<std::size_t>(j - 1)];
      } else if (j == 0) {
        best = prev[static_cast<std::size_t>(j)];
      } else {
        best = prev[static_cast<std::size_t>(j - 1)];  // diagonal
        if (better(prev[static_cast<std::size_t>(j)], best)) {
          best = prev[static_cast<std::size_t>(j)];
        }
        if (better(curr[static_cast<std::size_t>(j - 1)], best)) {
          best = curr[static_cast<std::size_t>(j - 1)];
        }
      }
      curr[static_cast<std::size_t>(j)] = {best.total + d, best.length + 1};
    }
    std::swap(prev, curr);
  }
  const Cell& end = prev[static_cast<std::size_t>(nb - 1)];
  return end.total / end.length;
}

DistanceTable::DistanceTable(std::vector<std::string> token_ids,
                             std::vector<double> packed_lower)
    : ids_(std::move(token_ids)), lower_(std::move(packed_lower)) {
  std::size_t n = ids_.size();
  if (lower_.size() != n * (n - 1) / 2) {
    throw UsageError("DistanceTable: packed size " +
                     std::to_string(lower_.size()) + " does not match " +
                     std::to_string(n) + " tokens");
  }
  index_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!index_.emplace(ids_[i], i).second) {
      throw UsageError("DistanceTable: duplicate token id '" + ids_[i] + "'");
    }
  }
  for (double d : lower_) {
    if (!(d >= 0.0)) throw UsageError("DistanceTable: negative or NaN distance");
  }
}

double DistanceTable::at(std::size_t i, std::size_t j) const {
  if (i >= size() || j >= size()) throw UsageError("DistanceTable::at: index out of range");
  if (i == j) return 0.0;
  if (i < j) std::swap(i, j);
  return lower_[i * (i - 1) / 2 + j];
}

std::size_t DistanceTable::indexOf(std::string_view token_id) const {
  auto it = index_.find(std::string(token_id));
  if (it == index_.end()) {
    throw UsageError("DistanceTable: unknown token id '" +
                     std::string(token_id) + "'");
  }
  return it->second;
}

DistanceTable buildDistanceTable(const std::vector<FeatureSequence>& tokens,
                                 unsigned threads) {
  std::size_t n = tokens.size();
  std::vector<std::string> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = tokens[i].token_id;

  std::vector<double> lower(n * (n - 1) / 2);
  parallelFor(lower.size(), threads, [&](std::size_t begin, std::size_t end) {
    // Recover the row for the first pair index, then walk.
    std::size_t i = static_cast<std::size_t>(
        (1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(begin))) / 2.0);
    while (i > 1 && i * (i - 1) / 2 > begin) --i;
    while ((i + 1) * i / 2 <= begin) ++i;
    std::size_t j = begin - i * (i - 1) / 2;
    for (std::size_t k = begin; k < end; ++k) {
      lower[k] = dtwDistance(tokens[i], tokens[j]);
      if (++j == i) {
        ++i;
        j = 0;
      }
    }
  });
  return DistanceTable(std::move(ids), std::move(lower));
}

namespace {

constexpr char kTableMagic[4] = {'L', 'D', 'T', '1'};
constexpr uint32_t kTableVersion = 1;

}  // namespace

void writeDistanceTable(const std::string& path, const DistanceTable& table) {
  std::string out;
  out.reserve(16 + table.packedLower().size() * 8);
  out.append(kTableMagic, 4);
  auto put_u32 = [&out](uint32_t v) {
    for (int i = 0; i < 4; ++i) out += static_cast<char>((v >> (8 * i)) & 0xffu);
  };
  put_u32(kTableVersion);
  put_u32(static_cast<uint32_t>(table.size()));
  put_u32(0);
  for (double d : table.packedLower()) {
    auto bits = std::bit_cast<uint64_t>(d);
    for (int i = 0; i < 8; ++i) out += static_cast<char>((bits >> (8 * i)) & 0xffu);
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error("cannot open distance table for writing: " + path);
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw Error("write failure on distance table: " + path);
}

DistanceTable readDistanceTable(const std::string& path,
                                std::vector<std::string> token_ids) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error("cannot open distance table: " + path);
  std::string in((std::istreambuf_iterator<char>(file)),
                 std::istreambuf_iterator<char>());
  if (file.bad()) throw Error("read failure on distance table: " + path);

  if (in.size() < 16 || std::memcmp(in.data(), kTableMagic, 4) != 0) {
    throw Error("not a distance table: " + path);
  }
  auto get_u32 = [&in](std::size_t at) {
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<uint32_t>(static_cast<unsigned char>(in[at + i]))
           << (8 * i);
    }
    return v;
  };
  if (get_u32(4) != kTableVersion) {
    throw Error("unsupported distance table version in " + path);
  }
  std::size_t n = get_u32(8);
  if (n != token_ids.size()) {
    throw Error("distance table in " + path + " holds " + std::to_string(n) +
                " tokens, expected " + std::to_string(token_ids.size()));
  }
  std::size_t n_values = n * (n - 1) / 2;
  if (in.size() != 16 + n_values * 8) {
    throw Error("corrupt distance table: " + path);
  }
  std::vector<double> lower(n_values);
  for (std::size_t i = 0; i < n_values; ++i) {
    uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) {
      bits |= static_cast<uint64_t>(
                  static_cast<unsigned char>(in[16 + i * 8 + b]))
              << (8 * b);
    }
    lower[i] = std::bit_cast<double>(bits);
  }
  return DistanceTable(std::move(token_ids), std::move(lower));
}

}  // namespace lexdisc
