#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "kp5/dispersion.hpp"
#include "kp5/evolution.hpp"
#include "kp5/lattice.hpp"
#include "kp5/rng.hpp"
#include "kp5/spacetime.hpp"

namespace kp5 {

// Admissible pair: 2/q = delta(r) = 2(1/2 - 1/r), r in [2, infinity);
// r = 2 pairs with q = infinity.
struct StrichartzExponents {
  double q = 4.0;
  double r = 4.0;
  StrichartzExponents(double q_in, double r_in);
  double delta() const { return 1.0 - 2.0 / r; }
};

// Band limit in integer wavenumbers; modes must also lie in the dealias mask.
// Fixing the band while refining the lattice keeps the ensemble's physical
// content constant, so ratio growth under refinement isolates discretization.
struct Band {
  long kx = 0;
  long ky = 0;
};

Band dealias_band(const FrequencyLattice& lat);

struct ProbeReport {
  std::string inequality_id;
  std::uint64_t seed = 0;
  std::size_t ensemble = 0;
  std::size_t nx = 0, ny = 0, nt = 0;
  double lx = 0.0, ly = 0.0, big_t = 0.0, t_ext = 0.0;
  DispersionParams disp;
  std::vector<std::pair<std::string, double>> rows;  // (label, ratio)
  std::size_t degenerate = 0;
  double max_ratio = 0.0;
  double median_ratio = 0.0;
  std::map<std::string, double> extras;

  void finalize();  // fills max/median from rows
  std::string to_csv() const;
};

// Random real field: Hermitian, zero x-mean, unit-variance complex Gaussian
// coefficients on the band (intersected with the dealias mask).
SpectralField random_field(LatticePtr lat, CounterRng& rng, Band band);

// Random space-time field with per-(mode, tau) Gaussian draws shaped by
// (1 + |tau - omega|)^(-profile_decay); 0 gives a flat tau profile.
SpaceTimeField random_st_field(LatticePtr lat, std::size_t nt, TimeWindow window, double t_ext,
                               CounterRng& rng, Band band, double profile_decay,
                               const DispersionParams& p);

// ratio = || |Dx|^(delta/2) S(t) u0 ||_{L^q_T L^r} / ||u0||_{L2}
ProbeReport strichartz_probe(StrichartzExponents e, LatticePtr lat, const DispersionParams& p,
                             TimeWindow w, std::size_t nt_time, std::size_t ensemble,
                             std::uint64_t seed, Band band);

// Shell-localized variant on modulation shell j:
// ratio = || |Dx|^(delta/2) f_j ||_{L^q_T L^r} / (2^(j/2) ||f_j||_{L2,xyt}).
// f_j takes the modulus of the tau-spectrum before shell projection; the
// variant without the modulus is reported alongside in the extras.
ProbeReport dyadic_strichartz_probe(unsigned j, StrichartzExponents e, LatticePtr lat,
                                    const DispersionParams& p, TimeWindow w, std::size_t nt,
                                    std::size_t ensemble, std::uint64_t seed, Band band);

struct MultiplierSpec {
  std::string name;
  std::function<double(double xi, double mu)> fn;
  static MultiplierSpec unit_cube();  // indicator of |xi| <= 1 and |mu| <= 1
  static MultiplierSpec ones();
  static MultiplierSpec zero();
};

// ratio = ||T_m f||_{L2_t Linf_xy} / ( sqrt(sum m^2 / (lx ly)) ||f||_{L2,xyt} ),
// normalized so discrete Cauchy-Schwarz caps it at 1.
ProbeReport maximal_probe(const MultiplierSpec& m, LatticePtr lat, const DispersionParams& p,
                          TimeWindow w, std::size_t nt_time, std::size_t ensemble,
                          std::uint64_t seed, Band band);

// g(T) = max over the ensemble of X_{0,b-a}/X_{0,b} for fields supported in
// [-T, T]; fits log g against log T and reports slope sigma_hat and the RMS
// fit residual.
ProbeReport time_gain_probe(double a, double b, const std::vector<double>& t_list, LatticePtr lat,
                            const DispersionParams& p, std::size_t nt, std::size_t ensemble,
                            std::uint64_t seed, Band band, double padding = 2.0);

// ratio = ||d/dx (u v)||_{X_{s,-0.49}} / ( ||u||_{X_{s,0.51}} ||v||_{X_{s,0.51}} )
// with the product formed per slice on the dealiased grid.  Rows are labeled
// by the interaction class of the dominant |xi| content of u and v.
ProbeReport bilinear_probe(double s, LatticePtr lat, const DispersionParams& p, TimeWindow w,
                           std::size_t nt, std::size_t ensemble, std::uint64_t seed, Band band);

// max_ratio growth factor under lattice refinement (refined over base).
double refinement_trend(const ProbeReport& base, const ProbeReport& refined);

}  // namespace kp5
