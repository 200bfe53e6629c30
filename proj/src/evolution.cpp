#include "kp5/evolution.hpp"

#include <cmath>
#include <numbers>

#include "kp5/functionals.hpp"

namespace kp5 {

void SimConfig::validate() const {
  (void)FrequencyLattice(nx, ny, box_lx(), box_ly());
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(big_t > 0.0)) throw ConfigError("big_t must be positive");
  if (disp.beta == 0.0) throw ConfigError("beta must be nonzero for the fifth-order flow");
  if (output_stride == 0) throw ConfigError("output_stride must be at least 1");
  if (picard_nt < 4 || (picard_nt & (picard_nt - 1)) != 0)
    throw ConfigError("picard_nt must be a power of two, at least 4");
}

double SimConfig::box_lx() const { return lx > 0.0 ? lx : 32.0 * std::numbers::pi; }
double SimConfig::box_ly() const { return ly > 0.0 ? ly : 32.0 * std::numbers::pi; }

namespace {

// Phase table exp(i*t*w[q]) with the Hermitian mirror enforced exactly.
std::vector<std::complex<double>> phase_table(const FrequencyLattice& lat,
                                              const std::vector<double>& w, double t) {
  std::vector<std::complex<double>> ph(lat.size());
  for (std::size_t il = 0; il < lat.ny(); ++il)
    for (std::size_t ik = 0; ik < lat.nx(); ++ik) {
      std::size_t q = lat.at(ik, il);
      std::size_t m = lat.mirror(ik, il);
      if (m < q) continue;
      ph[q] = std::polar(1.0, t * w[q]);
      if (m != q) ph[m] = std::conj(ph[q]);
    }
  return ph;
}

SpectralField apply_table(const SpectralField& f, const std::vector<std::complex<double>>& tab) {
  SpectralField out = f;
  for (std::size_t q = 0; q < out.coeffs.size(); ++q) out.coeffs[q] *= tab[q];
  return out;
}

bool finite_field(const SpectralField& f) {
  for (const auto& c : f.coeffs)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

}  // namespace

SpectralField linear_propagate(const SpectralField& f, double t, const DispersionParams& p) {
  return linear_propagate(f, t, omega_table(*f.lattice, p));
}

SpectralField linear_propagate(const SpectralField& f, double t, const std::vector<double>& w) {
  if (w.size() != f.lattice->size())
    throw RejectedInputError("linear_propagate: omega table size mismatch");
  return apply_table(f, phase_table(*f.lattice, w, t));
}

SpaceTimeField linear_trajectory(const SpectralField& u0, std::size_t nt, TimeWindow window,
                                 double t_ext, const DispersionParams& p) {
  SpaceTimeField f = make_spacetime(u0.lattice, nt, window, t_ext);
  std::vector<double> w = omega_table(*u0.lattice, p);
  for (std::size_t n = 0; n < nt; ++n)
    f.slices[n] = apply_table(u0, phase_table(*u0.lattice, w, f.time_node(n)));
  return f;
}

Stepper::Stepper(LatticePtr lat, const DispersionParams& p, double dt, Integrator kind,
                 bool linear_only)
    : lattice_(std::move(lat)), dt_(dt), kind_(kind), linear_only_(linear_only) {
  if (dt == 0.0) throw ConfigError("stepper: dt must be nonzero");
  const auto& l = *lattice_;
  std::vector<double> w = omega_table(l, p);
  e_full_.resize(l.size());
  e_half_.resize(l.size());
  q_.assign(l.size(), 0.0);
  f1_.assign(l.size(), 0.0);
  f2_.assign(l.size(), 0.0);
  f3_.assign(l.size(), 0.0);

  constexpr int kContourPoints = 32;
  std::complex<double> roots[kContourPoints];
  for (int k = 0; k < kContourPoints; ++k)
    roots[k] = std::polar(1.0, 2.0 * std::numbers::pi * (k + 0.5) / kContourPoints);

  for (std::size_t il = 0; il < l.ny(); ++il)
    for (std::size_t ik = 0; ik < l.nx(); ++ik) {
      std::size_t q = l.at(ik, il);
      std::size_t m = l.mirror(ik, il);
      if (m < q) continue;
      e_full_[q] = std::polar(1.0, dt * w[q]);
      e_half_[q] = std::polar(1.0, 0.5 * dt * w[q]);
      if (kind_ == Integrator::ExponentialRk4 && !linear_only_) {
        std::complex<double> z(0.0, dt * w[q]);
        std::complex<double> sq = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
        for (int k = 0; k < kContourPoints; ++k) {
          std::complex<double> s = z + roots[k];
          std::complex<double> es = std::exp(s);
          std::complex<double> s3inv = 1.0 / (s * s * s);
          sq += (std::exp(0.5 * s) - 1.0) / s;
          s1 += (-4.0 - s + es * (4.0 - 3.0 * s + s * s)) * s3inv;
          s2 += (2.0 + s + es * (-2.0 + s)) * s3inv;
          s3 += (-4.0 - 3.0 * s - s * s + es * (4.0 - s)) * s3inv;
        }
        double scale = dt / kContourPoints;
        q_[q] = scale * sq;
        f1_[q] = scale * s1;
        f2_[q] = scale * s2;
        f3_[q] = scale * s3;
      }
      if (m != q) {
        e_full_[m] = std::conj(e_full_[q]);
        e_half_[m] = std::conj(e_half_[q]);
        q_[m] = std::conj(q_[q]);
        f1_[m] = std::conj(f1_[q]);
        f2_[m] = std::conj(f2_[q]);
        f3_[m] = std::conj(f3_[q]);
      }
    }
}

SpectralField Stepper::step(const SpectralField& u) const {
  if (!(*u.lattice == *lattice_)) throw RejectedInputError("step: lattice mismatch");
  if (linear_only_) return apply_table(u, e_full_);

  if (kind_ == Integrator::SplitStep2) {
    // Strang: exact linear half step, explicit-midpoint nonlinear step, half step.
    SpectralField v = apply_table(u, e_half_);
    SpectralField mid = add(v, scale(nonlinear_term(v), 0.5 * dt_));
    v = add(v, scale(nonlinear_term(mid), dt_));
    return apply_table(v, e_half_);
  }

  const std::size_t n = u.coeffs.size();
  SpectralField nu = nonlinear_term(u);
  SpectralField a = u;
  for (std::size_t i = 0; i < n; ++i) a.coeffs[i] = e_half_[i] * u.coeffs[i] + q_[i] * nu.coeffs[i];
  SpectralField na = nonlinear_term(a);
  SpectralField b = u;
  for (std::size_t i = 0; i < n; ++i) b.coeffs[i] = e_half_[i] * u.coeffs[i] + q_[i] * na.coeffs[i];
  SpectralField nb = nonlinear_term(b);
  SpectralField c = a;
  for (std::size_t i = 0; i < n; ++i)
    c.coeffs[i] = e_half_[i] * a.coeffs[i] + q_[i] * (2.0 * nb.coeffs[i] - nu.coeffs[i]);
  SpectralField nc = nonlinear_term(c);
  SpectralField out = u;
  for (std::size_t i = 0; i < n; ++i)
    out.coeffs[i] = e_full_[i] * u.coeffs[i] + f1_[i] * nu.coeffs[i] +
                    2.0 * f2_[i] * (na.coeffs[i] + nb.coeffs[i]) + f3_[i] * nc.coeffs[i];
  return out;
}

SpectralField step(const SpectralField& u, const SimConfig& cfg) {
  cfg.validate();
  Stepper s(u.lattice, cfg.disp, cfg.dt, cfg.integrator, cfg.linear_only);
  return s.step(u);
}

Trajectory simulate(const SpectralField& u0, const SimConfig& cfg) {
  cfg.validate();
  const auto& lat = *u0.lattice;
  if (lat.nx() != cfg.nx || lat.ny() != cfg.ny)
    throw RejectedInputError("simulate: initial data lattice does not match config");
  long nsteps = std::lround(cfg.big_t / cfg.dt);
  if (nsteps < 1 || std::abs(static_cast<double>(nsteps) * cfg.dt - cfg.big_t) >
                        1e-9 * std::max(1.0, cfg.big_t))
    throw ConfigError("dt must divide big_t into a whole number of steps");

  SpectralField u = project_zero_mass(dealias(u0));
  double mass0 = mass(u);
  Stepper stepper(u0.lattice, cfg.disp, cfg.dt, cfg.integrator, cfg.linear_only);

  Trajectory out;
  auto record = [&](double t, const SpectralField& f) {
    out.times.push_back(t);
    out.snapshots.push_back(f);
    DiagnosticsRow d;
    d.t = t;
    d.mass_value = mass(f);
    d.hamiltonian_value = hamiltonian(f, cfg.disp);
    d.es_value = es_norm(f, cfg.diag_s);
    out.diagnostics.push_back(d);
  };
  record(0.0, u);
  for (long k = 1; k <= nsteps; ++k) {
    u = stepper.step(u);
    double t = static_cast<double>(k) * cfg.dt;
    if (!finite_field(u))
      throw BlowUpError("simulate: non-finite coefficients at t = " + std::to_string(t), t);
    double m = mass(u);
    if (m > 10.0 * mass0)
      throw BlowUpError("simulate: mass grew beyond 10x initial at t = " + std::to_string(t), t);
    if (k % static_cast<long>(cfg.output_stride) == 0 || k == nsteps) record(t, u);
  }
  return out;
}

namespace {

SpaceTimeField duhamel_core(const SpaceTimeField& h, const std::vector<double>& w) {
  const auto& lat = *h.lattice;
  const std::size_t nmodes = lat.size();
  const std::size_t nt = h.nt;
  const std::size_t n0 = nt / 2;  // node at t = 0
  const double dt = h.dt();

  // g_n = S(-t_n) h_n, so S(t_n - t') h(t') = S(t_n) g; a diagonal constant
  // factors out of the quadrature exactly.
  std::vector<std::vector<std::complex<double>>> g(nt);
  for (std::size_t n = 0; n < nt; ++n) {
    auto ph = phase_table(lat, w, -h.time_node(n));
    g[n].resize(nmodes);
    for (std::size_t q = 0; q < nmodes; ++q) g[n][q] = ph[q] * h.slices[n].coeffs[q];
  }

  bool herm = true;
  for (const auto& s : h.slices) herm = herm && s.real_symmetric;

  SpaceTimeField out = make_spacetime(h.lattice, nt, h.window, h.t_ext);
  std::vector<std::complex<double>> acc(nmodes, 0.0);   // Simpson prefix, even panel count
  std::vector<std::complex<double>> node(nmodes, 0.0);  // value at the current node

  auto emit = [&](std::size_t n, const std::vector<std::complex<double>>& integral) {
    auto ph = phase_table(lat, w, h.time_node(n));
    auto& slice = out.slices[n];
    for (std::size_t q = 0; q < nmodes; ++q) slice.coeffs[q] = ph[q] * integral[q];
    slice.real_symmetric = herm;
    slice.zero_x_mean = has_zero_x_mean(slice);
  };

  // Forward sweep from t = 0.
  std::fill(acc.begin(), acc.end(), std::complex<double>(0.0));
  emit(n0, acc);
  for (std::size_t n = n0 + 1; n < nt; ++n) {
    std::size_t d = n - n0;
    if (d % 2 == 0) {
      for (std::size_t q = 0; q < nmodes; ++q)
        acc[q] += (dt / 3.0) * (g[n - 2][q] + 4.0 * g[n - 1][q] + g[n][q]);
      emit(n, acc);
    } else {
      for (std::size_t q = 0; q < nmodes; ++q)
        node[q] = acc[q] + (dt / 2.0) * (g[n - 1][q] + g[n][q]);
      emit(n, node);
    }
  }
  // Backward sweep towards -t_ext.
  std::fill(acc.begin(), acc.end(), std::complex<double>(0.0));
  for (std::size_t d = 1; d <= n0; ++d) {
    std::size_t n = n0 - d;
    if (d % 2 == 0) {
      for (std::size_t q = 0; q < nmodes; ++q)
        acc[q] -= (dt / 3.0) * (g[n][q] + 4.0 * g[n + 1][q] + g[n + 2][q]);
      emit(n, acc);
    } else {
      for (std::size_t q = 0; q < nmodes; ++q)
        node[q] = acc[q] - (dt / 2.0) * (g[n][q] + g[n + 1][q]);
      emit(n, node);
    }
  }
  return out;
}

}  // namespace

SpaceTimeField duhamel_apply(const SpaceTimeField& h, const DispersionParams& p) {
  return duhamel_core(h, omega_table(*h.lattice, p));
}

SpaceTimeField duhamel_apply(const SpaceTimeField& h, const std::vector<double>& w) {
  if (w.size() != h.lattice->size())
    throw RejectedInputError("duhamel_apply: omega table size mismatch");
  return duhamel_core(h, w);
}

PicardResult picard_iterate(const SpectralField& u0, TimeWindow w, std::size_t k_max,
                            const SimConfig& cfg) {
  cfg.validate();
  const double big_t = w.big_t;
  if (!(big_t > 0.0)) throw ConfigError("picard_iterate: window big_t must be positive");
  double t_ext = std::max(2.0, 2.0 * big_t);
  const std::size_t nt = cfg.picard_nt;

  SpectralField u0d = project_zero_mass(dealias(u0));
  SpaceTimeField base = linear_trajectory(u0d, nt, w, t_ext, cfg.disp);
  std::vector<double> wt = omega_table(*u0.lattice, cfg.disp);

  PicardResult res;
  res.norm_used = NormSpec{cfg.diag_s, 0.51};
  SpaceTimeField cur = base;
  for (std::size_t n = 0; n < nt; ++n) {
    double psi = bump(cur.time_node(n));
    for (auto& c : cur.slices[n].coeffs) c *= psi;
  }
  res.iterates.push_back(cur);

  for (std::size_t k = 0; k < k_max; ++k) {
    SpaceTimeField h = make_spacetime(u0.lattice, nt, w, t_ext);
    for (std::size_t n = 0; n < nt; ++n) {
      double cut = bump_scaled(h.time_node(n), big_t);
      if (cut == 0.0) continue;  // nonlinearity fully windowed out
      h.slices[n] = scale(nonlinear_term(cur.slices[n]), cut * cut);
    }
    SpaceTimeField duh = duhamel_core(h, wt);
    SpaceTimeField next = make_spacetime(u0.lattice, nt, w, t_ext);
    for (std::size_t n = 0; n < nt; ++n) {
      double psi = bump(next.time_node(n));
      SpectralField s = add(base.slices[n], duh.slices[n]);
      next.slices[n] = scale(std::move(s), psi);
    }
    for (std::size_t n = 0; n < nt; ++n)
      if (!finite_field(next.slices[n]))
        throw BlowUpError("picard_iterate: non-finite iterate", next.time_node(n));
    res.increments.push_back(
        xsb_norm(st_sub(next, cur), NormSpec{cfg.diag_s, 0.51}, cfg.disp));
    res.iterates.push_back(next);
    cur = std::move(next);
  }
  for (std::size_t k = 0; k + 1 < res.increments.size(); ++k)
    res.ratios.push_back(res.increments[k + 1] / res.increments[k]);
  return res;
}

}  // namespace kp5
