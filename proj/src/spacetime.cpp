#include "kp5/spacetime.hpp"

#include <cmath>
#include <numbers>

namespace kp5 {

double bump(double t) {
  double a = std::abs(t);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  double s = a - 1.0;
  return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

double bump_scaled(double t, double big_t) {
  return bump(t / big_t);
}

double SpaceTimeField::tau(std::size_t im) const {
  return std::numbers::pi * static_cast<double>(m_signed(im)) / t_ext;
}

SpaceTimeField make_spacetime(LatticePtr lat, std::size_t nt, TimeWindow window, double t_ext) {
  if (nt < 4 || (nt & (nt - 1)) != 0)
    throw ConfigError("space-time field: nt must be a power of two, at least 4");
  if (!(window.big_t > 0.0)) throw ConfigError("space-time field: window big_t must be positive");
  if (t_ext <= 0.0) t_ext = 2.0 * window.big_t;
  if (t_ext < 2.0 * window.big_t)
    throw ConfigError("space-time field: t_ext must be at least 2*big_t");
  SpaceTimeField f;
  f.window = window;
  f.t_ext = t_ext;
  f.nt = nt;
  f.slices.reserve(nt);
  for (std::size_t n = 0; n < nt; ++n) f.slices.push_back(zero_field(lat));
  f.lattice = std::move(lat);
  return f;
}

SpaceTimeField st_sub(const SpaceTimeField& a, const SpaceTimeField& b) {
  if (!(*a.lattice == *b.lattice) || a.nt != b.nt || a.t_ext != b.t_ext)
    throw RejectedInputError("st_sub: field shape mismatch");
  SpaceTimeField out = a;
  for (std::size_t n = 0; n < a.nt; ++n) out.slices[n] = sub(a.slices[n], b.slices[n]);
  return out;
}

// The grid starts at -t_ext, so the plain FFT picks up a phase exp(i*pi*m)
// per tau index relative to the kernel exp(-i*t*tau); that factor is +/-1.
SpaceTimeSpectrum tau_forward(const SpaceTimeField& f) {
  SpaceTimeSpectrum s;
  s.lattice = f.lattice;
  s.window = f.window;
  s.t_ext = f.t_ext;
  s.nt = f.nt;
  const std::size_t nmodes = f.lattice->size();
  s.data.resize(nmodes * f.nt);
  for (std::size_t q = 0; q < nmodes; ++q)
    for (std::size_t n = 0; n < f.nt; ++n) s.data[q * f.nt + n] = f.slices[n].coeffs[q];
  fft1_forward_batch(f.nt, nmodes, s.data.data());
  for (std::size_t q = 0; q < nmodes; ++q)
    for (std::size_t im = 1; im < f.nt; im += 2) s.data[q * f.nt + im] = -s.data[q * f.nt + im];
  return s;
}

SpaceTimeField tau_inverse(const SpaceTimeSpectrum& s) {
  const std::size_t nmodes = s.lattice->size();
  std::vector<std::complex<double>> work = s.data;
  for (std::size_t q = 0; q < nmodes; ++q)
    for (std::size_t im = 1; im < s.nt; im += 2) work[q * s.nt + im] = -work[q * s.nt + im];
  fft1_inverse_batch(s.nt, nmodes, work.data());
  SpaceTimeField f = make_spacetime(s.lattice, s.nt, s.window, s.t_ext);
  for (std::size_t n = 0; n < s.nt; ++n) {
    auto& slice = f.slices[n];
    for (std::size_t q = 0; q < nmodes; ++q) slice.coeffs[q] = work[q * s.nt + n];
    slice.real_symmetric = false;
    slice.zero_x_mean = has_zero_x_mean(slice);
  }
  return f;
}

SpaceTimeField apply_time_window(SpaceTimeField f, TimeWindow w) {
  for (std::size_t n = 0; n < f.nt; ++n) {
    double g = bump_scaled(f.time_node(n), w.big_t);
    for (auto& c : f.slices[n].coeffs) c *= g;
  }
  return f;
}

double st_l2_norm(const SpaceTimeField& f) {
  double acc = 0.0;
  for (const auto& slice : f.slices)
    for (const auto& c : slice.coeffs) acc += std::norm(c);
  return std::sqrt(f.lattice->box_area() * f.dt() * acc);
}

}  // namespace kp5
