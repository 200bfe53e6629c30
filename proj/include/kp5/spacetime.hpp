#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "kp5/lattice.hpp"

namespace kp5 {

// Smooth plateau bump: 1 on [-1,1], exp(1 - 1/(1-(|t|-1)^2)) for 1 < |t| < 2,
// 0 for |t| >= 2.
double bump(double t);

// bump(t / big_t): plateau [-T, T], support [-2T, 2T].
double bump_scaled(double t, double big_t);

struct TimeWindow {
  double big_t = 1.0;
};

// Uniform time grid of nt nodes on [-t_ext, t_ext), nt a power of two.
// Node n sits at t_n = -t_ext + n * (2*t_ext/nt); t = 0 is always a node.
// The dual lattice carries tau_m = pi*m/t_ext for signed m in [-nt/2, nt/2).
struct SpaceTimeField {
  LatticePtr lattice;
  TimeWindow window;
  double t_ext = 0.0;
  std::size_t nt = 0;
  std::vector<SpectralField> slices;

  double dt() const { return 2.0 * t_ext / static_cast<double>(nt); }
  double time_node(std::size_t n) const { return -t_ext + static_cast<double>(n) * dt(); }
  long m_signed(std::size_t im) const {
    return im < nt / 2 ? static_cast<long>(im) : static_cast<long>(im) - static_cast<long>(nt);
  }
  double tau(std::size_t im) const;
};

// t_ext <= 0 selects the default extension 2*window.big_t.  The window must
// satisfy t_ext >= 2*big_t so the scaled bump is fully supported.
SpaceTimeField make_spacetime(LatticePtr lat, std::size_t nt, TimeWindow window,
                              double t_ext = 0.0);

SpaceTimeField st_sub(const SpaceTimeField& a, const SpaceTimeField& b);

// Space-time spectrum: for each spatial mode q the nt tau-coefficients are
// contiguous (data[q*nt + im]).  Conventions match the spatial transform:
// forward divides by nt and uses the kernel exp(-i*t*tau), so a slice set
// exp(i*t_n*tau_m0) becomes the unit delta at m0.
struct SpaceTimeSpectrum {
  LatticePtr lattice;
  TimeWindow window;
  double t_ext = 0.0;
  std::size_t nt = 0;
  std::vector<std::complex<double>> data;

  std::complex<double>& at(std::size_t q, std::size_t im) { return data[q * nt + im]; }
  const std::complex<double>& at(std::size_t q, std::size_t im) const { return data[q * nt + im]; }
};

SpaceTimeSpectrum tau_forward(const SpaceTimeField& f);
SpaceTimeField tau_inverse(const SpaceTimeSpectrum& s);

// Multiplies slice n by bump_scaled(t_n, w.big_t).
SpaceTimeField apply_time_window(SpaceTimeField f, TimeWindow w);

// Space-time L2 norm: sqrt(lx*ly*2*t_ext * sum |spectrum|^2), equivalently the
// physical quadrature with cell weights dx*dy*dt.
double st_l2_norm(const SpaceTimeField& f);

}  // namespace kp5
