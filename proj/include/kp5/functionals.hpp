#pragma once

#include "kp5/dispersion.hpp"
#include "kp5/lattice.hpp"
#include "kp5/spacetime.hpp"

namespace kp5 {

// L2 norm over the box, sqrt(lx*ly * sum |coeffs|^2).
double mass(const SpectralField& f);

// H(u) = (beta/2)Int (u_xx)^2 - (alpha/2)Int (u_x)^2
//        + (1/2)Int (dx^{-1} u_y)^2 + (1/6)Int u^3.
// Quadratic terms are spectral sums with multipliers xi^2, xi, mu/xi; the
// cubic term is a physical quadrature on the dealiased grid.  Requires an
// exactly zero x-mean.
double hamiltonian(const SpectralField& f, const DispersionParams& p);

// Weight (1 + xi^2 + |mu|/|xi|)^s; rejects fields with content at xi = 0.
double es_norm(const SpectralField& f, double s);

// Weight (1 + |xi|)^s1 * (1 + |mu|)^s2.
double aniso_sobolev_norm(const SpectralField& f, double s1, double s2);

struct NormSpec {
  double s = 0.0;
  double b = 0.0;
};

struct DyadicIndex {
  enum class Kind { ModulationJ, XiShellM, MuShellN };
  Kind kind = Kind::XiShellM;
  unsigned level = 0;
};

// Dyadic shell index for v >= 0: level 0 is [0,1), level j is [2^(j-1), 2^j).
unsigned dyadic_level(double v);

// Keeps exactly the modes whose |xi| (or |mu|) lies in the requested shell.
// ModulationJ is rejected here; it needs a space-time field.
SpectralField lp_project(const SpectralField& f, DyadicIndex d);

// Zeroes every (xi, mu, tau) point whose modulation |tau - omega(xi, mu)|
// falls outside shell j.  omega is 0 at xi = 0 by the zero-mass convention.
SpaceTimeField modulation_project(const SpaceTimeField& f, unsigned j, const DispersionParams& p);

// X_{s,b} norm, dyadic l1 form over modulation shells:
//   sum_j 2^(j*b) * || chi_j(tau - omega) (1+xi^2+|mu|/|xi|)^s F^hat ||_{L2}.
// The j-sum terminates at the largest shell intersecting the discrete range.
double xsb_norm(const SpaceTimeField& f, NormSpec n, const DispersionParams& p);
double xsb_norm(const SpaceTimeSpectrum& s, NormSpec n, const DispersionParams& p);

// l2-in-j variant: sqrt(sum_j 4^(j*b) * ||...||^2).  With (s,b) = (0,0) this
// collapses to the space-time L2 norm; the l1 form above is only an upper
// bound there.
double xsb_norm_l2(const SpaceTimeField& f, NormSpec n, const DispersionParams& p);

}  // namespace kp5
