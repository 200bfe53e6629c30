#include "kp5/functionals.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace kp5 {

double mass(const SpectralField& f) {
  double acc = 0.0;
  for (const auto& c : f.coeffs) acc += std::norm(c);
  return std::sqrt(f.lattice->box_area() * acc);
}

double hamiltonian(const SpectralField& f, const DispersionParams& p) {
  if (!has_zero_x_mean(f))
    throw RejectedInputError("hamiltonian: field must have zero x-mean");
  const auto& lat = *f.lattice;
  double quad_xx = 0.0, quad_x = 0.0, quad_anti = 0.0;
  for (std::size_t il = 0; il < lat.ny(); ++il) {
    double mu = lat.mu(il);
    for (std::size_t ik = 1; ik < lat.nx(); ++ik) {
      double xi = lat.xi(ik);
      double e = std::norm(f.coeffs[lat.at(ik, il)]);
      if (e == 0.0) continue;
      quad_xx += xi * xi * xi * xi * e;
      quad_x += xi * xi * e;
      double r = mu / xi;
      quad_anti += r * r * e;
    }
  }
  double area = lat.box_area();
  double cubic = 0.0;
  std::vector<double> u = to_physical(dealias(f));
  for (double v : u) cubic += v * v * v;
  cubic *= lat.cell_area() / 6.0;
  return 0.5 * p.beta * area * quad_xx - 0.5 * p.alpha * area * quad_x +
         0.5 * area * quad_anti + cubic;
}

namespace {

double es_weight(double xi, double mu) {
  return 1.0 + xi * xi + std::abs(mu) / std::abs(xi);
}

}  // namespace

double es_norm(const SpectralField& f, double s) {
  if (!has_zero_x_mean(f))
    throw RejectedInputError("es_norm: field has content at xi = 0 where the weight is singular");
  const auto& lat = *f.lattice;
  double acc = 0.0;
  for (std::size_t il = 0; il < lat.ny(); ++il) {
    double mu = lat.mu(il);
    for (std::size_t ik = 1; ik < lat.nx(); ++ik) {
      double e = std::norm(f.coeffs[lat.at(ik, il)]);
      if (e == 0.0) continue;
      double w = std::pow(es_weight(lat.xi(ik), mu), s);
      acc += w * w * e;
    }
  }
  return std::sqrt(lat.box_area() * acc);
}

double aniso_sobolev_norm(const SpectralField& f, double s1, double s2) {
  const auto& lat = *f.lattice;
  double acc = 0.0;
  for (std::size_t il = 0; il < lat.ny(); ++il) {
    double wmu = std::pow(1.0 + std::abs(lat.mu(il)), s2);
    for (std::size_t ik = 0; ik < lat.nx(); ++ik) {
      double e = std::norm(f.coeffs[lat.at(ik, il)]);
      if (e == 0.0) continue;
      double w = std::pow(1.0 + std::abs(lat.xi(ik)), s1) * wmu;
      acc += w * w * e;
    }
  }
  return std::sqrt(lat.box_area() * acc);
}

unsigned dyadic_level(double v) {
  if (v < 1.0) return 0;
  int e = 0;
  std::frexp(v, &e);  // v in [2^(e-1), 2^e)
  return static_cast<unsigned>(e);
}

SpectralField lp_project(const SpectralField& f, DyadicIndex d) {
  if (d.kind == DyadicIndex::Kind::ModulationJ)
    throw RejectedInputError("lp_project: modulation shells need a space-time field");
  const auto& lat = *f.lattice;
  SpectralField out = f;
  for (std::size_t il = 0; il < lat.ny(); ++il)
    for (std::size_t ik = 0; ik < lat.nx(); ++ik) {
      double v = d.kind == DyadicIndex::Kind::XiShellM ? std::abs(lat.xi(ik))
                                                       : std::abs(lat.mu(il));
      if (dyadic_level(v) != d.level) out.coeffs[lat.at(ik, il)] = {0.0, 0.0};
    }
  return out;
}

SpaceTimeField modulation_project(const SpaceTimeField& f, unsigned j, const DispersionParams& p) {
  SpaceTimeSpectrum s = tau_forward(f);
  const auto& lat = *f.lattice;
  std::vector<double> w = omega_table(lat, p);
  for (std::size_t q = 0; q < lat.size(); ++q)
    for (std::size_t im = 0; im < f.nt; ++im) {
      double lam = std::abs(f.tau(im) - w[q]);
      if (dyadic_level(lam) != j) s.data[q * f.nt + im] = {0.0, 0.0};
    }
  return tau_inverse(s);
}

namespace {

// Shared core: per-shell weighted L2 masses, indexed by modulation level.
std::vector<double> shell_masses(const SpaceTimeSpectrum& sp, double s,
                                 const DispersionParams& p) {
  const auto& lat = *sp.lattice;
  std::vector<double> w = omega_table(lat, p);
  std::vector<double> shells;
  const double quad = lat.box_area() * 2.0 * sp.t_ext;
  const double pi_over_text = std::numbers::pi / sp.t_ext;
  for (std::size_t q = 0; q < lat.size(); ++q) {
    std::size_t ik = q % lat.nx();
    std::size_t il = q / lat.nx();
    bool xi_zero = lat.k_signed(ik) == 0;
    double weight = 1.0;
    if (!xi_zero) {
      double ws = std::pow(es_weight(lat.xi(ik), lat.mu(il)), s);
      weight = ws * ws;
    }
    for (std::size_t im = 0; im < sp.nt; ++im) {
      double e = std::norm(sp.data[q * sp.nt + im]);
      if (e == 0.0) continue;
      if (xi_zero)
        throw RejectedInputError("xsb_norm: field has content at xi = 0");
      long m = im < sp.nt / 2 ? static_cast<long>(im)
                              : static_cast<long>(im) - static_cast<long>(sp.nt);
      double lam = std::abs(pi_over_text * static_cast<double>(m) - w[q]);
      unsigned j = dyadic_level(lam);
      if (shells.size() <= j) shells.resize(j + 1, 0.0);
      shells[j] += quad * weight * e;
    }
  }
  return shells;
}

}  // namespace

double xsb_norm(const SpaceTimeSpectrum& sp, NormSpec n, const DispersionParams& p) {
  std::vector<double> shells = shell_masses(sp, n.s, p);
  double acc = 0.0;
  for (std::size_t j = 0; j < shells.size(); ++j)
    acc += std::exp2(n.b * static_cast<double>(j)) * std::sqrt(shells[j]);
  return acc;
}

double xsb_norm(const SpaceTimeField& f, NormSpec n, const DispersionParams& p) {
  return xsb_norm(tau_forward(f), n, p);
}

double xsb_norm_l2(const SpaceTimeField& f, NormSpec n, const DispersionParams& p) {
  SpaceTimeSpectrum sp = tau_forward(f);
  std::vector<double> shells = shell_masses(sp, n.s, p);
  double acc = 0.0;
  for (std::size_t j = 0; j < shells.size(); ++j) {
    double g = std::exp2(n.b * static_cast<double>(j));
    acc += g * g * shells[j];
  }
  return std::sqrt(acc);
}

}  // namespace kp5
