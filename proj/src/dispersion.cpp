#include "kp5/dispersion.hpp"

#include <algorithm>
#include <cmath>

namespace kp5 {

double omega(double xi, double mu, const DispersionParams& p) {
  if (xi == 0.0) throw SingularFrequencyError("omega: xi = 0");
  double xi2 = xi * xi;
  return p.beta * xi2 * xi2 * xi - p.alpha * xi2 * xi + mu * mu / xi;
}

std::array<double, 2> grad_omega(double xi, double mu, const DispersionParams& p) {
  if (xi == 0.0) throw SingularFrequencyError("grad_omega: xi = 0");
  double xi2 = xi * xi;
  double r = mu / xi;
  return {5.0 * p.beta * xi2 * xi2 - 3.0 * p.alpha * xi2 - r * r, 2.0 * r};
}

double smoothing_ratio(double xi, double mu, const DispersionParams& p) {
  if (xi == 0.0) throw SingularFrequencyError("smoothing_ratio: xi = 0");
  if (!(xi * xi > std::abs(p.alpha)))
    throw RejectedInputError("smoothing_ratio: requires xi^2 > |alpha|");
  auto g = grad_omega(xi, mu, p);
  return std::hypot(g[0], g[1]) / (xi * xi);
}

double resonance(double xi1, double mu1, double xi2, double mu2, const DispersionParams& p) {
  double s = xi1 + xi2;
  if (xi1 == 0.0 || xi2 == 0.0 || s == 0.0)
    throw SingularFrequencyError("resonance: degenerate xi configuration");
  double d = mu1 / xi1 - mu2 / xi2;
  double quad = xi1 * xi1 + xi1 * xi2 + xi2 * xi2;
  return (xi1 * xi2 / s) * (s * s * (5.0 * p.beta * quad - 3.0 * p.alpha) - d * d);
}

double resonance_third_kp2(double xi1, double mu1, double xi2, double mu2) {
  double s = xi1 + xi2;
  if (xi1 == 0.0 || xi2 == 0.0 || s == 0.0)
    throw SingularFrequencyError("resonance_third_kp2: degenerate xi configuration");
  double d = mu1 / xi1 - mu2 / xi2;
  return -(xi1 * xi2 / s) * (3.0 * s * s + d * d);
}

double resonance_third_kp2_ratio(double xi1, double mu1, double xi2, double mu2) {
  double s = xi1 + xi2;
  if (xi1 == 0.0 || xi2 == 0.0 || s == 0.0)
    throw SingularFrequencyError("resonance_third_kp2_ratio: degenerate xi configuration");
  double d = (mu1 / xi1 - mu2 / xi2) / s;
  return 3.0 + d * d;
}

double jacobian_mu(double xi1, double mu1, double xi2, double mu2, const DispersionParams& p) {
  if (xi1 == 0.0 || xi2 == 0.0) throw SingularFrequencyError("jacobian_mu: xi = 0");
  double r1 = mu1 / xi1, r2 = mu2 / xi2;
  double a2 = xi1 * xi1, b2 = xi2 * xi2;
  return 5.0 * p.beta * (a2 * a2 - b2 * b2) - 3.0 * p.alpha * (a2 - b2) - (r1 * r1 - r2 * r2);
}

double jacobian_xi(double xi1, double mu1, double xi2, double mu2) {
  if (xi1 == 0.0 || xi2 == 0.0) throw SingularFrequencyError("jacobian_xi: xi = 0");
  return 2.0 * (mu1 / xi1 - mu2 / xi2);
}

const char* to_string(InteractionTag tag) {
  switch (tag) {
    case InteractionTag::LowLow: return "LowLow";
    case InteractionTag::HighHigh: return "HighHigh";
    case InteractionTag::HighLow: return "HighLow";
  }
  return "?";
}

InteractionClass classify_interaction(double xi1, double xi2, const DispersionParams& p) {
  double a1 = std::abs(xi1), a2 = std::abs(xi2);
  if (a1 < a2) std::swap(a1, a2);
  double theta = 100.0 * std::max(1.0, std::sqrt(std::abs(p.alpha)));
  InteractionClass c;
  if (a1 <= theta) {
    c.tag = InteractionTag::LowLow;
  } else if (a2 >= a1 / 100.0) {
    c.tag = InteractionTag::HighHigh;
  } else {
    c.tag = InteractionTag::HighLow;
  }
  return c;
}

InteractionClass classify_interaction(double xi1, double mu1, double xi2, double mu2,
                                      const DispersionParams& p) {
  InteractionClass c = classify_interaction(xi1, xi2, p);
  if (xi1 == 0.0 || xi2 == 0.0) return c;
  double s = xi1 + xi2;
  double d = mu1 / xi1 - mu2 / xi2;
  double quad = xi1 * xi1 + xi1 * xi2 + xi2 * xi2;
  c.resonant = d * d >= 0.5 * s * s * std::abs(5.0 * p.beta * quad - 3.0 * p.alpha);
  return c;
}

std::vector<double> omega_table(const FrequencyLattice& lat, const DispersionParams& p) {
  std::vector<double> w(lat.size(), 0.0);
  // The k = 0 column is zero by the zero-mass convention.  The k = -nx/2
  // column is zero because its frequency sign is ambiguous (+nx/2 aliases
  // -nx/2), which would break the exact oddness the Hermitian-preserving
  // propagator relies on.  Both columns lie outside the dealias band.
  for (std::size_t il = 0; il < lat.ny(); ++il) {
    for (std::size_t ik = 1; ik < lat.nx(); ++ik) {
      if (ik == lat.nx() / 2) continue;
      std::size_t q = lat.at(ik, il);
      std::size_t m = lat.mirror(ik, il);
      if (m < q) continue;  // filled by the odd mirror below
      double v = omega(lat.xi(ik), lat.mu(il), p);
      w[q] = v;
      w[m] = -v;
    }
  }
  return w;
}

}  // namespace kp5
