#include "dirac/snapshot.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace dirac {

namespace {

template <class T>
void put(std::string& out, T v) {
  char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  out.append(b, sizeof(T));
}

template <class T>
T get(const std::string& in, std::size_t& pos) {
  if (pos + sizeof(T) > in.size()) throw SnapshotError("snapshot truncated");
  char b[sizeof(T)];
  std::memcpy(b, in.data() + pos, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  pos += sizeof(T);
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

}  // namespace

std::string encode_snapshot(const SpinorField& field, double t) {
  const auto& g = field.grid();
  std::string out = "DSPN";
  put<std::uint32_t>(out, kSnapshotVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.dim()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(field.ncomp()));
  for (const auto& ax : g.axes()) put<std::uint32_t>(out, static_cast<std::uint32_t>(ax.M));
  put<double>(out, t);
  out.reserve(out.size() + field.data().size() * 16);
  for (const complex& z : field.data()) {
    put<double>(out, z.real());
    put<double>(out, z.imag());
  }
  return out;
}

void write_snapshot(const std::filesystem::path& path, const SpinorField& field, double t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SnapshotError("cannot write snapshot '" + path.string() + "'");
  const std::string bytes = encode_snapshot(field, t);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw SnapshotError("failed writing snapshot '" + path.string() + "'");
}

Snapshot decode_snapshot(const std::string& in, const PeriodicGrid& bounds) {
  if (in.size() < 4 || in.compare(0, 4, "DSPN") != 0) throw SnapshotError("not a snapshot (bad magic)");
  std::size_t pos = 4;
  const auto version = get<std::uint32_t>(in, pos);
  if (version != kSnapshotVersion) throw SnapshotError("unsupported snapshot version " + std::to_string(version));
  const auto d = get<std::uint32_t>(in, pos);
  const auto ncomp = get<std::uint32_t>(in, pos);
  if (d != bounds.dim()) throw SnapshotError("snapshot dimension does not match the grid");
  for (std::uint32_t j = 0; j < d; ++j)
    if (get<std::uint32_t>(in, pos) != bounds.axis(j).M) throw SnapshotError("snapshot point count does not match the grid");
  const double t = get<double>(in, pos);
  if (in.size() - pos != bounds.size() * ncomp * 16) throw SnapshotError("snapshot payload has the wrong length");
  std::vector<complex> data(bounds.size() * ncomp);
  for (auto& z : data) {
    const double re = get<double>(in, pos);
    const double im = get<double>(in, pos);
    z = complex(re, im);
  }
  return {t, SpinorField(bounds, ncomp, std::move(data))};
}

Snapshot read_snapshot(const std::filesystem::path& path, const PeriodicGrid& bounds) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SnapshotError("cannot open snapshot '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return decode_snapshot(ss.str(), bounds);
}

}  // namespace dirac
