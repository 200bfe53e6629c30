#include "kp5/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>

namespace kp5 {

static_assert(std::endian::native == std::endian::little,
              "snapshot format is little-endian; byte swapping is not implemented");

namespace {

constexpr char kMagic[4] = {'K', 'P', 'F', '1'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::vector<unsigned char>& buf, const T& v) {
  const auto* p = reinterpret_cast<const unsigned char*>(&v);
  buf.insert(buf.end(), p, p + sizeof(T));
}

template <typename T>
T take(const std::vector<unsigned char>& buf, std::size_t& off) {
  if (off + sizeof(T) > buf.size()) throw RejectedInputError("snapshot: truncated file");
  T v;
  std::memcpy(&v, buf.data() + off, sizeof(T));
  off += sizeof(T);
  return v;
}

std::string temp_sibling(const std::string& path) {
  static std::mt19937_64 gen(std::random_device{}());
  return path + ".tmp" + std::to_string(gen());
}

}  // namespace

void atomic_write_bytes(const std::string& path, const std::vector<unsigned char>& bytes) {
  std::string tmp = temp_sibling(path);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open for writing: " + tmp);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) {
      std::filesystem::remove(tmp);
      throw ConfigError("write failed: " + tmp);
    }
  }
  std::filesystem::rename(tmp, path);
}

void atomic_write_text(const std::string& path, const std::string& content) {
  std::vector<unsigned char> bytes(content.begin(), content.end());
  atomic_write_bytes(path, bytes);
}

void write_snapshot(const std::string& path, const Snapshot& s) {
  if (s.samples.size() != s.nx * s.ny)
    throw RejectedInputError("snapshot: sample count does not match dimensions");
  std::vector<unsigned char> buf;
  buf.reserve(44 + 8 * s.samples.size());
  buf.insert(buf.end(), kMagic, kMagic + 4);
  put(buf, kVersion);
  put(buf, s.nx);
  put(buf, s.ny);
  put(buf, s.lx);
  put(buf, s.ly);
  put(buf, s.disp.alpha);
  put(buf, s.disp.beta);
  put(buf, s.time);
  const auto* p = reinterpret_cast<const unsigned char*>(s.samples.data());
  buf.insert(buf.end(), p, p + 8 * s.samples.size());
  atomic_write_bytes(path, buf);
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RejectedInputError("snapshot: cannot open " + path);
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  if (buf.size() < 4 || std::memcmp(buf.data(), kMagic, 4) != 0)
    throw RejectedInputError("snapshot: bad magic in " + path);
  std::size_t off = 4;
  Snapshot s;
  std::uint32_t version = take<std::uint32_t>(buf, off);
  if (version != kVersion) throw RejectedInputError("snapshot: unsupported version");
  s.nx = take<std::uint64_t>(buf, off);
  s.ny = take<std::uint64_t>(buf, off);
  s.lx = take<double>(buf, off);
  s.ly = take<double>(buf, off);
  s.disp.alpha = take<double>(buf, off);
  s.disp.beta = take<double>(buf, off);
  s.time = take<double>(buf, off);
  std::size_t n = s.nx * s.ny;
  if (buf.size() - off != 8 * n) throw RejectedInputError("snapshot: payload size mismatch");
  s.samples.resize(n);
  std::memcpy(s.samples.data(), buf.data() + off, 8 * n);
  return s;
}

Snapshot snapshot_from_field(const SpectralField& f, const DispersionParams& p, double time) {
  Snapshot s;
  s.nx = f.lattice->nx();
  s.ny = f.lattice->ny();
  s.lx = f.lattice->lx();
  s.ly = f.lattice->ly();
  s.disp = p;
  s.time = time;
  s.samples = to_physical(f);
  return s;
}

std::string format_full(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace kp5
