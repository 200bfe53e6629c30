#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kp5/dispersion.hpp"
#include "kp5/lattice.hpp"

namespace kp5 {

// Binary snapshot, little-endian:
//   "KPF1" | u32 version=1 | u64 nx | u64 ny | f64 lx ly alpha beta time
//   | nx*ny f64 physical samples, row-major, x fastest.
struct Snapshot {
  std::uint64_t nx = 0, ny = 0;
  double lx = 0.0, ly = 0.0;
  DispersionParams disp;
  double time = 0.0;
  std::vector<double> samples;
};

void write_snapshot(const std::string& path, const Snapshot& s);
Snapshot read_snapshot(const std::string& path);

Snapshot snapshot_from_field(const SpectralField& f, const DispersionParams& p, double time);

// Formats with 17 significant digits, enough to round-trip a double exactly.
std::string format_full(double v);

// Writes via a temporary file in the same directory plus an atomic rename, so
// readers never observe partial content.
void atomic_write_text(const std::string& path, const std::string& content);
void atomic_write_bytes(const std::string& path, const std::vector<unsigned char>& bytes);

}  // namespace kp5
