#pragma once

#include <array>
#include <optional>
#include <vector>

#include "kp5/errors.hpp"
#include "kp5/lattice.hpp"

namespace kp5 {

struct DispersionParams {
  double alpha = 0.0;
  double beta = 1.0;
};

// omega(xi, mu) = beta*xi^5 - alpha*xi^3 + mu^2/xi.  Singular at xi = 0.
double omega(double xi, double mu, const DispersionParams& p);

// (d omega/d xi, d omega/d mu) = (5*beta*xi^4 - 3*alpha*xi^2 - mu^2/xi^2, 2*mu/xi).
std::array<double, 2> grad_omega(double xi, double mu, const DispersionParams& p);

// |grad omega| / xi^2 on the elliptic-regime domain xi^2 > |alpha|.
double smoothing_ratio(double xi, double mu, const DispersionParams& p);

// Resonance function omega(xi1+xi2, mu1+mu2) - omega(xi1, mu1) - omega(xi2, mu2)
// in product form:
//   (xi1*xi2/(xi1+xi2)) * [ (xi1+xi2)^2 * (5*beta*(xi1^2+xi1*xi2+xi2^2) - 3*alpha)
//                           - (mu1/xi1 - mu2/xi2)^2 ].
// Requires xi1, xi2, xi1+xi2 all nonzero.
double resonance(double xi1, double mu1, double xi2, double mu2, const DispersionParams& p);

// Third-order limit (beta = 0, alpha = 1):
// |R| / (|xi1| |xi2| |xi1+xi2|) = 3 + ((mu1/xi1 - mu2/xi2)/(xi1+xi2))^2 >= 3.
double resonance_third_kp2_ratio(double xi1, double mu1, double xi2, double mu2);

// Signed third-order resonance value at beta = 0, alpha = 1:
//   R = -(xi1*xi2/(xi1+xi2)) * (3*(xi1+xi2)^2 + (mu1/xi1 - mu2/xi2)^2).
double resonance_third_kp2(double xi1, double mu1, double xi2, double mu2);

// Jacobian of the resonance system in the variables eliminating mu:
//   5*beta*(xi1^4 - xi2^4) - 3*alpha*(xi1^2 - xi2^2) - ((mu1/xi1)^2 - (mu2/xi2)^2).
double jacobian_mu(double xi1, double mu1, double xi2, double mu2, const DispersionParams& p);

// Jacobian eliminating xi: 2*(mu1/xi1 - mu2/xi2).
double jacobian_xi(double xi1, double mu1, double xi2, double mu2);

enum class InteractionTag { LowLow, HighHigh, HighLow };

struct InteractionClass {
  InteractionTag tag;
  // Set by the (xi, mu) overload: true iff the transverse separation is large
  // enough that the product form of the resonance can vanish.
  std::optional<bool> resonant;
};

const char* to_string(InteractionTag tag);

// Convention: |xi1| >= |xi2| is enforced by sorting the arguments.
// With theta = 100*max(1, sqrt(|alpha|)):
//   LowLow    |xi1| <= theta
//   HighHigh  |xi1| >= theta and |xi2|/|xi1| in [1/100, 1]
//   HighLow   |xi1| >= theta and |xi2|/|xi1| <  1/100
InteractionClass classify_interaction(double xi1, double xi2, const DispersionParams& p);
InteractionClass classify_interaction(double xi1, double mu1, double xi2, double mu2,
                                      const DispersionParams& p);

// Per-mode omega table for a lattice; omega is 0 on the xi = 0 column (the
// zero-mass convention) and on the sign-ambiguous k = -nx/2 column, and
// oddness omega(-k,-l) = -omega(k,l) holds exactly at every mode.
std::vector<double> omega_table(const FrequencyLattice& lat, const DispersionParams& p);

}  // namespace kp5
