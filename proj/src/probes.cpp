#include "kp5/probes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <sstream>

#include "kp5/functionals.hpp"
#include "kp5/io.hpp"
#include "kp5/parallel.hpp"

namespace kp5 {

StrichartzExponents::StrichartzExponents(double q_in, double r_in) : q(q_in), r(r_in) {
  if (!(r >= 2.0) || std::isinf(r)) throw ConfigError("strichartz exponents: need 2 <= r < inf");
  if (r == 2.0) {
    if (!std::isinf(q)) throw ConfigError("strichartz exponents: r = 2 pairs with q = inf");
    return;
  }
  double want = 1.0 - 2.0 / r;
  if (std::abs(2.0 / q - want) > 1e-9)
    throw ConfigError("strichartz exponents: 2/q must equal 2(1/2 - 1/r)");
}

Band dealias_band(const FrequencyLattice& lat) {
  return Band{static_cast<long>(lat.nx() / 3), static_cast<long>(lat.ny() / 3)};
}

void ProbeReport::finalize() {
  std::vector<double> vals;
  vals.reserve(rows.size());
  for (const auto& r : rows) vals.push_back(r.second);
  if (vals.empty()) {
    max_ratio = 0.0;
    median_ratio = 0.0;
    return;
  }
  std::sort(vals.begin(), vals.end());
  max_ratio = vals.back();
  std::size_t n = vals.size();
  median_ratio = n % 2 == 1 ? vals[n / 2] : 0.5 * (vals[n / 2 - 1] + vals[n / 2]);
}

std::string ProbeReport::to_csv() const {
  std::ostringstream out;
  out << "# inequality = " << inequality_id << "\n";
  out << "# seed = " << seed << "\n";
  out << "# ensemble = " << ensemble << "\n";
  out << "# nx = " << nx << ", ny = " << ny << ", nt = " << nt << "\n";
  out << "# lx = " << format_full(lx) << ", ly = " << format_full(ly) << "\n";
  out << "# big_t = " << format_full(big_t) << ", t_ext = " << format_full(t_ext) << "\n";
  out << "# alpha = " << format_full(disp.alpha) << ", beta = " << format_full(disp.beta) << "\n";
  out << "index,label,ratio\n";
  for (std::size_t i = 0; i < rows.size(); ++i)
    out << i << "," << rows[i].first << "," << format_full(rows[i].second) << "\n";
  out << "# summary,max," << format_full(max_ratio) << "\n";
  out << "# summary,median," << format_full(median_ratio) << "\n";
  out << "# summary,degenerate," << degenerate << "\n";
  for (const auto& [k, v] : extras) out << "# summary," << k << "," << format_full(v) << "\n";
  return out.str();
}

namespace {

// Canonical band modes (k >= 1, -ky <= l <= ky) in a lattice-independent
// order, so a fixed (seed, band) pair assigns the same draw to the same
// physical mode on every lattice that contains the band.  Modes outside the
// lattice's dealias mask are skipped without consuming draws only when they
// cannot exist on the lattice at all; inside a valid band the mask never
// cuts (callers pass bands inside the coarsest mask in play).
template <typename Fn>
void for_each_band_mode(const FrequencyLattice& l, Band band, Fn&& fn) {
  long kx = std::min(band.kx, static_cast<long>(l.nx() / 2) - 1);
  long ky = std::min(band.ky, static_cast<long>(l.ny() / 2) - 1);
  for (long k = 1; k <= kx; ++k) {
    std::size_t ik = static_cast<std::size_t>(k);
    for (long ll = -ky; ll <= ky; ++ll) {
      std::size_t il = ll >= 0 ? static_cast<std::size_t>(ll)
                               : l.ny() - static_cast<std::size_t>(-ll);
      if (!l.in_dealias_mask(ik, il)) continue;
      fn(ik, il);
    }
  }
}

}  // namespace

SpectralField random_field(LatticePtr lat, CounterRng& rng, Band band) {
  SpectralField f = zero_field(lat);
  const auto& l = *f.lattice;
  for_each_band_mode(l, band, [&](std::size_t ik, std::size_t il) {
    std::complex<double> g = rng.next_complex_gaussian();
    f.coeffs[l.at(ik, il)] = g;
    f.coeffs[l.mirror(ik, il)] = std::conj(g);
  });
  f.real_symmetric = true;
  f.zero_x_mean = true;
  return f;
}

SpaceTimeField random_st_field(LatticePtr lat, std::size_t nt, TimeWindow window, double t_ext,
                               CounterRng& rng, Band band, double profile_decay,
                               const DispersionParams& p) {
  SpaceTimeSpectrum sp;
  sp.window = window;
  sp.t_ext = t_ext <= 0.0 ? 2.0 * window.big_t : t_ext;
  sp.nt = nt;
  sp.lattice = lat;
  sp.data.assign(lat->size() * nt, {0.0, 0.0});
  const auto& l = *lat;
  std::vector<double> w = omega_table(l, p);
  const double pi_over_text = std::numbers::pi / sp.t_ext;
  for_each_band_mode(l, band, [&](std::size_t ik, std::size_t il) {
    std::size_t q = l.at(ik, il);
    std::size_t mq = l.mirror(ik, il);
    for (std::size_t im = 0; im < nt; ++im) {
      if (im == nt / 2) continue;  // tau-Nyquist has no mirror partner
      long m = im < nt / 2 ? static_cast<long>(im)
                           : static_cast<long>(im) - static_cast<long>(nt);
      double lam = std::abs(pi_over_text * static_cast<double>(m) - w[q]);
      double prof = profile_decay == 0.0 ? 1.0 : std::pow(1.0 + lam, -profile_decay);
      std::complex<double> g = rng.next_complex_gaussian() * prof;
      std::size_t im_mirror = m == 0 ? 0 : nt - im;
      sp.data[q * nt + im] = g;
      sp.data[mq * nt + im_mirror] = std::conj(g);
    }
  });
  SpaceTimeField f = tau_inverse(sp);
  for (auto& s : f.slices) {
    s.real_symmetric = true;  // Hermitian by construction of the spectrum
    s.zero_x_mean = true;
  }
  return f;
}

namespace {

// (sum |g|^r dx dy)^(1/r) over the physical grid.
double lr_norm_physical(const std::vector<double>& vals, double cell, double r) {
  double acc = 0.0;
  for (double v : vals) acc += std::pow(std::abs(v), r);
  return std::pow(cell * acc, 1.0 / r);
}

SpectralField apply_dx_power(const SpectralField& f, double a) {
  SpectralField out = f;
  const auto& lat = *f.lattice;
  for (std::size_t il = 0; il < lat.ny(); ++il)
    for (std::size_t ik = 0; ik < lat.nx(); ++ik) {
      double xi = lat.xi(ik);
      double m = xi == 0.0 ? (a == 0.0 ? 1.0 : 0.0) : std::pow(std::abs(xi), a);
      out.coeffs[lat.at(ik, il)] *= m;
    }
  return out;
}

// L^q in time of per-node space norms, midpoint rectangle rule; q = inf takes
// the max.
double lq_time(const std::vector<double>& node_norms, double dt, double q) {
  if (std::isinf(q)) {
    double m = 0.0;
    for (double v : node_norms) m = std::max(m, v);
    return m;
  }
  double acc = 0.0;
  for (double v : node_norms) acc += std::pow(v, q);
  return std::pow(dt * acc, 1.0 / q);
}

}  // namespace

ProbeReport strichartz_probe(StrichartzExponents e, LatticePtr lat, const DispersionParams& p,
                             TimeWindow w, std::size_t nt_time, std::size_t ensemble,
                             std::uint64_t seed, Band band) {
  ProbeReport rep;
  rep.inequality_id = "strichartz-q" + format_full(e.q) + "-r" + format_full(e.r);
  rep.seed = seed;
  rep.ensemble = ensemble;
  rep.nx = lat->nx();
  rep.ny = lat->ny();
  rep.nt = nt_time;
  rep.lx = lat->lx();
  rep.ly = lat->ly();
  rep.big_t = w.big_t;
  rep.t_ext = w.big_t;
  rep.disp = p;
  const double big_t = w.big_t;
  const double dt = 2.0 * big_t / static_cast<double>(nt_time);
  std::vector<double> wtab = omega_table(*lat, p);
  const double a = 0.5 * e.delta();
  rep.rows.resize(ensemble);
  std::vector<char> degen(ensemble, 0);
  parallel_for(ensemble, [&](std::size_t i) {
    CounterRng rng(seed, i);
    SpectralField u0 = random_field(lat, rng, band);
    double den = mass(u0);
    if (den == 0.0) {
      degen[i] = 1;
      rep.rows[i] = {"degenerate", 0.0};
      return;
    }
    SpectralField v = apply_dx_power(u0, a);
    std::vector<double> node_norms(nt_time);
    for (std::size_t n = 0; n < nt_time; ++n) {
      double t = -big_t + (static_cast<double>(n) + 0.5) * dt;
      std::vector<double> phys = to_physical(linear_propagate(v, t, wtab));
      node_norms[n] = lr_norm_physical(phys, lat->cell_area(), e.r);
    }
    rep.rows[i] = {"sample", lq_time(node_norms, dt, e.q) / den};
  });
  for (char d : degen) rep.degenerate += d;
  rep.finalize();
  return rep;
}

namespace {

// L^q_T L^r norm of the |Dx|^a image of a space-time field, restricted to
// slices with |t_n| <= big_t.
double lq_lr_windowed(const SpaceTimeField& f, double a, double q, double r, double big_t) {
  std::vector<double> node_norms;
  for (std::size_t n = 0; n < f.nt; ++n) {
    if (std::abs(f.time_node(n)) > big_t) continue;
    std::vector<double> phys = to_physical(apply_dx_power(f.slices[n], a));
    node_norms.push_back(lr_norm_physical(phys, f.lattice->cell_area(), r));
  }
  return lq_time(node_norms, f.dt(), q);
}

SpaceTimeField shell_projected(const SpaceTimeSpectrum& sp, unsigned j, bool take_modulus,
                               const std::vector<double>& w) {
  SpaceTimeSpectrum cut = sp;
  const auto& lat = *sp.lattice;
  const double pi_over_text = std::numbers::pi / sp.t_ext;
  for (std::size_t q = 0; q < lat.size(); ++q)
    for (std::size_t im = 0; im < sp.nt; ++im) {
      long m = im < sp.nt / 2 ? static_cast<long>(im)
                              : static_cast<long>(im) - static_cast<long>(sp.nt);
      double lam = std::abs(pi_over_text * static_cast<double>(m) - w[q]);
      auto& c = cut.data[q * sp.nt + im];
      if (dyadic_level(lam) != j)
        c = {0.0, 0.0};
      else if (take_modulus)
        c = {std::abs(c), 0.0};
    }
  return tau_inverse(cut);
}

}  // namespace

ProbeReport dyadic_strichartz_probe(unsigned j, StrichartzExponents e, LatticePtr lat,
                                    const DispersionParams& p, TimeWindow w, std::size_t nt,
                                    std::size_t ensemble, std::uint64_t seed, Band band) {
  ProbeReport rep;
  rep.inequality_id = "dyadic-strichartz-j" + std::to_string(j);
  rep.seed = seed;
  rep.ensemble = ensemble;
  rep.nx = lat->nx();
  rep.ny = lat->ny();
  rep.nt = nt;
  rep.lx = lat->lx();
  rep.ly = lat->ly();
  rep.big_t = w.big_t;
  rep.t_ext = 2.0 * w.big_t;
  rep.disp = p;
  const double a = 0.5 * e.delta();
  const double gain = std::exp2(0.5 * static_cast<double>(j));
  std::vector<double> wtab = omega_table(*lat, p);
  rep.rows.resize(ensemble);
  std::vector<double> plain(ensemble, 0.0);
  std::vector<char> degen(ensemble, 0);
  parallel_for(ensemble, [&](std::size_t i) {
    CounterRng rng(seed, i);
    SpaceTimeField f =
        random_st_field(lat, nt, w, 0.0, rng, band, 0.0, p);
    SpaceTimeSpectrum sp = tau_forward(f);
    SpaceTimeField fj = shell_projected(sp, j, true, wtab);
    double den = st_l2_norm(fj);
    if (den == 0.0) {
      degen[i] = 1;
      rep.rows[i] = {"degenerate", 0.0};
      return;
    }
    rep.rows[i] = {"with-modulus", lq_lr_windowed(fj, a, e.q, e.r, w.big_t) / (gain * den)};
    SpaceTimeField fj_plain = shell_projected(sp, j, false, wtab);
    double den_plain = st_l2_norm(fj_plain);
    plain[i] =
        den_plain == 0.0 ? 0.0 : lq_lr_windowed(fj_plain, a, e.q, e.r, w.big_t) / (gain * den_plain);
  });
  for (char d : degen) rep.degenerate += d;
  rep.finalize();
  double plain_max = 0.0;
  for (double v : plain) plain_max = std::max(plain_max, v);
  rep.extras["no_modulus_max"] = plain_max;
  if (rep.max_ratio > 0.0 && plain_max > 0.0)
    rep.extras["modulus_variant_gap"] =
        std::abs(rep.max_ratio - plain_max) / std::max(rep.max_ratio, plain_max);
  return rep;
}

MultiplierSpec MultiplierSpec::unit_cube() {
  return {"unit-cube", [](double xi, double mu) {
            return std::abs(xi) <= 1.0 && std::abs(mu) <= 1.0 ? 1.0 : 0.0;
          }};
}

MultiplierSpec MultiplierSpec::ones() {
  return {"ones", [](double, double) { return 1.0; }};
}

MultiplierSpec MultiplierSpec::zero() {
  return {"zero", [](double, double) { return 0.0; }};
}

ProbeReport maximal_probe(const MultiplierSpec& m, LatticePtr lat, const DispersionParams& p,
                          TimeWindow w, std::size_t nt_time, std::size_t ensemble,
                          std::uint64_t seed, Band band) {
  ProbeReport rep;
  rep.inequality_id = "maximal-" + m.name;
  rep.seed = seed;
  rep.ensemble = ensemble;
  rep.nx = lat->nx();
  rep.ny = lat->ny();
  rep.nt = nt_time;
  rep.lx = lat->lx();
  rep.ly = lat->ly();
  rep.big_t = w.big_t;
  rep.t_ext = w.big_t;
  rep.disp = p;

  const auto& l = *lat;
  std::vector<double> mtab(l.size());
  double msum = 0.0;
  for (std::size_t il = 0; il < l.ny(); ++il)
    for (std::size_t ik = 0; ik < l.nx(); ++ik) {
      double v = m.fn(l.xi(ik), l.mu(il));
      mtab[l.at(ik, il)] = v;
      msum += v * v;
    }
  const double m_norm_grid = std::sqrt(msum / l.box_area());
  rep.extras["m_norm_grid"] = m_norm_grid;
  const double dt = 2.0 * w.big_t / static_cast<double>(nt_time);

  rep.rows.resize(ensemble);
  std::vector<char> degen(ensemble, 0);
  parallel_for(ensemble, [&](std::size_t i) {
    CounterRng rng(seed, i);
    double num_sq = 0.0, f_sq = 0.0;
    for (std::size_t n = 0; n < nt_time; ++n) {
      SpectralField slice = random_field(lat, rng, band);
      double slice_l2_sq = 0.0;
      for (const auto& c : slice.coeffs) slice_l2_sq += std::norm(c);
      f_sq += dt * l.box_area() * slice_l2_sq;
      for (std::size_t q = 0; q < l.size(); ++q) slice.coeffs[q] *= mtab[q];
      std::vector<double> phys = to_physical(slice);
      double peak = 0.0;
      for (double v : phys) peak = std::max(peak, std::abs(v));
      num_sq += dt * peak * peak;
    }
    double den = m_norm_grid * std::sqrt(f_sq);
    if (den == 0.0) {
      degen[i] = 1;
      rep.rows[i] = {"degenerate", 0.0};
      return;
    }
    rep.rows[i] = {"sample", std::sqrt(num_sq) / den};
  });
  for (char d : degen) rep.degenerate += d;
  rep.finalize();
  return rep;
}

ProbeReport time_gain_probe(double a, double b, const std::vector<double>& t_list, LatticePtr lat,
                            const DispersionParams& p, std::size_t nt, std::size_t ensemble,
                            std::uint64_t seed, Band band, double padding) {
  if (t_list.size() < 2) throw ConfigError("time_gain_probe: need at least two T values to fit");
  if (!(padding >= 2.0)) throw ConfigError("time_gain_probe: padding must be >= 2");
  if (!(a >= 0.0) || !(a < b)) throw ConfigError("time_gain_probe: need 0 <= a < b");
  ProbeReport rep;
  rep.inequality_id = "time-gain-a" + format_full(a) + "-b" + format_full(b);
  rep.seed = seed;
  rep.ensemble = ensemble;
  rep.nx = lat->nx();
  rep.ny = lat->ny();
  rep.nt = nt;
  rep.lx = lat->lx();
  rep.ly = lat->ly();
  rep.big_t = t_list.front();
  rep.t_ext = padding * t_list.front();
  rep.disp = p;

  std::vector<double> gmax(t_list.size(), 0.0);
  for (std::size_t ti = 0; ti < t_list.size(); ++ti) {
    double big_t = t_list[ti];
    if (!(big_t > 0.0)) throw ConfigError("time_gain_probe: T values must be positive");
    TimeWindow w{big_t};
    std::vector<double> ratios(ensemble, 0.0);
    parallel_for(ensemble, [&](std::size_t i) {
      CounterRng rng(seed, ti * 1000003ull + i);
      SpaceTimeField f =
          random_st_field(lat, nt, w, padding * big_t, rng, band, 2.0, p);
      // Compact support in [-T, T]: scale the bump plateau to T/2.
      f = apply_time_window(std::move(f), TimeWindow{0.5 * big_t});
      double den = xsb_norm(f, NormSpec{0.0, b}, p);
      if (den == 0.0) return;
      ratios[i] = xsb_norm(f, NormSpec{0.0, b - a}, p) / den;
    });
    for (std::size_t i = 0; i < ensemble; ++i) {
      rep.rows.push_back({"T=" + format_full(big_t), ratios[i]});
      gmax[ti] = std::max(gmax[ti], ratios[i]);
    }
  }
  // Least-squares fit of log g against log T.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = t_list.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (gmax[i] <= 0.0) throw ConfigError("time_gain_probe: degenerate ensemble (g = 0)");
    double x = std::log(t_list[i]);
    double y = std::log(gmax[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double dn = static_cast<double>(n);
  double slope = (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
  double intercept = (sy - slope * sx) / dn;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double e = std::log(gmax[i]) - (slope * std::log(t_list[i]) + intercept);
    rss += e * e;
  }
  rep.extras["sigma_hat"] = slope;
  rep.extras["fit_residual_rms"] = std::sqrt(rss / dn);
  for (std::size_t i = 0; i < n; ++i) rep.extras["gmax_" + format_full(t_list[i])] = gmax[i];
  rep.finalize();
  return rep;
}

ProbeReport bilinear_probe(double s, LatticePtr lat, const DispersionParams& p, TimeWindow w,
                           std::size_t nt, std::size_t ensemble, std::uint64_t seed, Band band) {
  ProbeReport rep;
  rep.inequality_id = "bilinear-s" + format_full(s);
  rep.seed = seed;
  rep.ensemble = ensemble;
  rep.nx = lat->nx();
  rep.ny = lat->ny();
  rep.nt = nt;
  rep.lx = lat->lx();
  rep.ly = lat->ly();
  rep.big_t = w.big_t;
  rep.t_ext = 2.0 * w.big_t;
  rep.disp = p;
  const NormSpec num_spec{s, -0.49};
  const NormSpec den_spec{s, 0.51};
  rep.rows.resize(ensemble);
  std::vector<char> degen(ensemble, 0);

  auto dominant_xi = [&](const SpaceTimeField& f) {
    const auto& l = *f.lattice;
    std::vector<double> energy(l.nx(), 0.0);
    for (const auto& slice : f.slices)
      for (std::size_t il = 0; il < l.ny(); ++il)
        for (std::size_t ik = 0; ik < l.nx(); ++ik)
          energy[ik] += std::norm(slice.coeffs[l.at(ik, il)]);
    std::size_t best = 0;
    for (std::size_t ik = 1; ik < l.nx(); ++ik)
      if (energy[ik] > energy[best]) best = ik;
    return l.xi(best);
  };

  parallel_for(ensemble, [&](std::size_t i) {
    CounterRng rng(seed, i);
    SpaceTimeField u = random_st_field(lat, nt, w, 0.0, rng, band, 1.0, p);
    SpaceTimeField v = random_st_field(lat, nt, w, 0.0, rng, band, 1.0, p);
    u = apply_time_window(std::move(u), TimeWindow{0.5 * w.big_t});
    v = apply_time_window(std::move(v), TimeWindow{0.5 * w.big_t});
    double den = xsb_norm(u, den_spec, p) * xsb_norm(v, den_spec, p);
    if (den == 0.0) {
      degen[i] = 1;
      rep.rows[i] = {"degenerate", 0.0};
      return;
    }
    SpaceTimeField prod = make_spacetime(lat, nt, w, u.t_ext);
    const auto& l = *lat;
    for (std::size_t n = 0; n < nt; ++n) {
      std::vector<double> up = to_physical(dealias(u.slices[n]));
      std::vector<double> vp = to_physical(dealias(v.slices[n]));
      for (std::size_t q = 0; q < up.size(); ++q) up[q] *= vp[q];
      SpectralField w2 = to_spectral(up, lat);
      for (std::size_t il = 0; il < l.ny(); ++il)
        for (std::size_t ik = 0; ik < l.nx(); ++ik) {
          auto& c = w2.coeffs[l.at(ik, il)];
          c *= std::complex<double>(0.0, l.xi(ik));
        }
      prod.slices[n] = project_zero_mass(dealias(std::move(w2)));
    }
    double num = xsb_norm(prod, num_spec, p);
    InteractionClass cls = classify_interaction(dominant_xi(u), dominant_xi(v), p);
    rep.rows[i] = {to_string(cls.tag), num / den};
  });
  for (char d : degen) rep.degenerate += d;
  rep.finalize();
  // Per-class maxima.
  std::map<std::string, double> class_max;
  for (const auto& r : rep.rows)
    if (r.first != "degenerate") class_max["max_" + r.first] = 0.0;
  for (const auto& r : rep.rows)
    if (r.first != "degenerate")
      class_max["max_" + r.first] = std::max(class_max["max_" + r.first], r.second);
  for (const auto& [k, v] : class_max) rep.extras[k] = v;
  return rep;
}

double refinement_trend(const ProbeReport& base, const ProbeReport& refined) {
  if (base.max_ratio <= 0.0) throw ConfigError("refinement_trend: base probe is degenerate");
  return refined.max_ratio / base.max_ratio;
}

}  // namespace kp5
