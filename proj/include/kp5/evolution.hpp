#pragma once

#include <cstdint>
#include <vector>

#include "kp5/dispersion.hpp"
#include "kp5/functionals.hpp"
#include "kp5/lattice.hpp"
#include "kp5/spacetime.hpp"

namespace kp5 {

enum class Integrator { ExponentialRk4, SplitStep2 };

struct SimConfig {
  std::size_t nx = 128, ny = 128;
  double lx = 0.0, ly = 0.0;  // 0 selects the default box length 32*pi
  DispersionParams disp;
  double dt = 2e-4;
  double big_t = 1.0;
  std::size_t output_stride = 100;
  std::uint64_t seed = 1;
  Integrator integrator = Integrator::ExponentialRk4;
  bool linear_only = false;
  double diag_s = 1.0;        // order of the energy norm reported in diagnostics
  std::size_t picard_nt = 256;

  void validate() const;
  double box_lx() const;
  double box_ly() const;
};

// Multiplies each coefficient by exp(i*t*omega(xi, mu)); the xi = 0 phase is 1
// by the zero-mass convention.  Exact group law and modulus preservation.
SpectralField linear_propagate(const SpectralField& f, double t, const DispersionParams& p);
// Same with a caller-supplied per-mode omega table (e.g. all zeros as a test
// hook).  The table must be exactly odd for Hermitian inputs to stay Hermitian.
SpectralField linear_propagate(const SpectralField& f, double t, const std::vector<double>& w);

// Slices S(t_n) u0 on the given grid, no window applied.
SpaceTimeField linear_trajectory(const SpectralField& u0, std::size_t nt, TimeWindow window,
                                 double t_ext, const DispersionParams& p);

// One-step integrator with precomputed per-mode tables.  dt may be negative
// (time-reversed stepping).  phi-functions are evaluated by a 32-point
// unit-circle contour mean to avoid small-denominator cancellation.
class Stepper {
 public:
  Stepper(LatticePtr lat, const DispersionParams& p, double dt, Integrator kind,
          bool linear_only = false);
  SpectralField step(const SpectralField& u) const;
  double dt() const { return dt_; }

 private:
  LatticePtr lattice_;
  double dt_;
  Integrator kind_;
  bool linear_only_;
  std::vector<std::complex<double>> e_full_, e_half_;
  std::vector<std::complex<double>> q_, f1_, f2_, f3_;  // exponential RK4 weights
};

// Single step under cfg (builds the tables; use Stepper directly in loops).
SpectralField step(const SpectralField& u, const SimConfig& cfg);

struct DiagnosticsRow {
  double t = 0.0;
  double mass_value = 0.0;
  double hamiltonian_value = 0.0;
  double es_value = 0.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<SpectralField> snapshots;
  std::vector<DiagnosticsRow> diagnostics;
};

// Advances cfg.big_t / cfg.dt steps, recording snapshots and diagnostics every
// output_stride steps (plus the initial and final states).  Throws BlowUpError
// on NaN/Inf coefficients or when the mass exceeds 10x its initial value.
Trajectory simulate(const SpectralField& u0, const SimConfig& cfg);

// t -> integral_0^t S(t - t') h(t') dt' on h's own grid.  Composite Simpson
// in t' with a trapezoid fallback on the panel farthest from zero when the
// node count is odd.
SpaceTimeField duhamel_apply(const SpaceTimeField& h, const DispersionParams& p);
SpaceTimeField duhamel_apply(const SpaceTimeField& h, const std::vector<double>& w);

struct PicardResult {
  std::vector<SpaceTimeField> iterates;  // k_max + 1 entries
  std::vector<double> increments;        // d_k in X_{s,0.51}
  std::vector<double> ratios;            // d_{k+1} / d_k
  NormSpec norm_used;
};

// Cutoff fixed-point map iterated from psi(t) S(t) u0:
//   L(u)(t) = psi(t) [ S(t) u0 + integral_0^t S(t-t') psi_T(t')^2 N(u(t')) dt' ]
// with N(u) the spectral (1/2) d/dx u^2.  The window is psi_T = bump(t/T);
// the grid extends to max(2, 2T) so the unscaled bump is fully supported.
PicardResult picard_iterate(const SpectralField& u0, TimeWindow w, std::size_t k_max,
                            const SimConfig& cfg);

}  // namespace kp5
