#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <stdexcept>

#include "dirac/fields.hpp"

namespace dirac {

class SnapshotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Binary layout, all little-endian: "DSPN", u32 version (1), u32 d,
/// u32 ncomp, u32 M per axis, f64 t, then (re, im) f64 pairs with the
/// component index fastest and the first axis next.
inline constexpr std::uint32_t kSnapshotVersion = 1;

/// Grid bounds are not stored; read_snapshot takes them from `bounds`.
struct Snapshot {
  double t = 0.0;
  SpinorField field;
};

void write_snapshot(const std::filesystem::path& path, const SpinorField& field, double t);
std::string encode_snapshot(const SpinorField& field, double t);

/// `bounds` supplies (a, b) per axis; its point counts must match the file.
Snapshot read_snapshot(const std::filesystem::path& path, const PeriodicGrid& bounds);
Snapshot decode_snapshot(const std::string& bytes, const PeriodicGrid& bounds);

}  // namespace dirac
