#include "doctest.h"

#include <cmath>
#include <complex>
#include <cstdlib>
#include <numbers>
#include <vector>

#include "kp5/errors.hpp"
#include "kp5/lattice.hpp"
#include "test_util.hpp"

using namespace kp5;
using namespace kp5::testutil;
using std::numbers::pi;

namespace {

std::vector<double> random_samples(const FrequencyLattice& lat, std::uint64_t seed) {
  CounterRng rng(seed);
  std::vector<double> u(lat.size());
  for (auto& v : u) v = rng.next_gaussian();
  return u;
}

}  // namespace

TEST_CASE("lattice: constructor validates sizes and box lengths") {
  CHECK_THROWS_AS(make_lattice(6, 8, 1.0, 1.0), ConfigError);   // not a power of two
  CHECK_THROWS_AS(make_lattice(8, 12, 1.0, 1.0), ConfigError);  // not a power of two
  CHECK_THROWS_AS(make_lattice(2, 8, 1.0, 1.0), ConfigError);   // too small
  CHECK_THROWS_AS(make_lattice(8, 8, 0.0, 1.0), ConfigError);
  CHECK_THROWS_AS(make_lattice(8, 8, 1.0, -2.0), ConfigError);
  CHECK_NOTHROW(make_lattice(4, 4, 1.0, 1.0));
}

TEST_CASE("lattice: signed wavenumbers, frequencies, and the mirror involution") {
  auto lat = make_lattice(8, 4, 2.0 * pi, pi);
  CHECK(lat->k_signed(0) == 0);
  CHECK(lat->k_signed(3) == 3);
  CHECK(lat->k_signed(4) == -4);
  CHECK(lat->k_signed(7) == -1);
  CHECK(lat->l_signed(2) == -2);
  for (std::size_t ik = 0; ik < lat->nx(); ++ik) {
    CHECK(lat->xi(ik) == doctest::Approx(2.0 * pi * static_cast<double>(lat->k_signed(ik)) /
                                         lat->lx()).epsilon(1e-15));
  }
  CHECK(lat->mu(1) == doctest::Approx(2.0).epsilon(1e-15));
  for (std::size_t il = 0; il < lat->ny(); ++il) {
    for (std::size_t ik = 0; ik < lat->nx(); ++ik) {
      std::size_t q = lat->at(ik, il);
      std::size_t m = lat->mirror(ik, il);
      std::size_t jk = m % lat->nx(), jl = m / lat->nx();
      CHECK(lat->mirror(jk, jl) == q);  // involution
    }
  }
}

TEST_CASE("lattice: two-thirds mask keeps exactly 3|k| <= nx and 3|l| <= ny") {
  auto lat = make_lattice(16, 8, 1.0, 1.0);
  for (std::size_t ik = 0; ik < lat->nx(); ++ik) {
    for (std::size_t il = 0; il < lat->ny(); ++il) {
      bool want = 3 * std::labs(lat->k_signed(ik)) <= static_cast<long>(lat->nx()) &&
                  3 * std::labs(lat->l_signed(il)) <= static_cast<long>(lat->ny());
      CHECK(lat->in_dealias_mask(ik, il) == want);
    }
  }
}

TEST_CASE("transforms: forward then inverse reproduces the samples") {
  auto lat = make_lattice(32, 16, 11.0, 5.0);
  auto u = random_samples(*lat, 42);
  SpectralField f = to_spectral(u, lat);
  CHECK(f.real_symmetric);
  auto v = to_physical(f);
  double err = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) err = std::max(err, std::abs(u[i] - v[i]));
  CHECK(err <= 1e-12);
}

TEST_CASE("transforms: a cosine lands on exactly one conjugate coefficient pair") {
  const double lx = 13.0, ly = 7.0;
  auto lat = make_lattice(16, 8, lx, ly);
  std::vector<double> u(lat->size());
  for (std::size_t il = 0; il < lat->ny(); ++il) {
    double y = ly * static_cast<double>(il) / static_cast<double>(lat->ny());
    for (std::size_t ik = 0; ik < lat->nx(); ++ik) {
      double x = lx * static_cast<double>(ik) / static_cast<double>(lat->nx());
      u[lat->at(ik, il)] = std::cos(2.0 * pi * (3.0 * x / lx + 1.0 * y / ly));
    }
  }
  SpectralField f = to_spectral(u, lat);
  for (std::size_t il = 0; il < lat->ny(); ++il) {
    for (std::size_t ik = 0; ik < lat->nx(); ++ik) {
      std::complex<double> c = f.at(ik, il);
      if ((lat->k_signed(ik) == 3 && lat->l_signed(il) == 1) ||
          (lat->k_signed(ik) == -3 && lat->l_signed(il) == -1)) {
        CHECK(std::abs(c - std::complex<double>(0.5, 0.0)) <= 1e-14);
      } else {
        CHECK(std::abs(c) <= 1e-14);
      }
    }
  }
}

TEST_CASE("transforms: Parseval ties the physical quadrature to the coefficient sum") {
  auto lat = make_lattice(32, 32, 3.0, 17.0);
  auto u = random_samples(*lat, 7);
  SpectralField f = to_spectral(u, lat);
  double phys = 0.0;
  for (double v : u) phys += v * v;
  phys *= lat->cell_area();
  double spec = 0.0;
  for (const auto& c : f.coeffs) spec += std::norm(c);
  spec *= lat->box_area();
  CHECK(rel_diff(phys, spec) <= 1e-13);
}

TEST_CASE("hermitian structure: exact by construction and detectable") {
  auto lat = make_lattice(16, 16, 2.0, 2.0);
  auto u = random_samples(*lat, 3);
  SpectralField f = to_spectral(u, lat);
  CHECK(check_hermitian(f, 0.0));  // exact, not approximate
  // self-mirror modes carry no imaginary part at all
  for (std::size_t ik : {std::size_t{0}, lat->nx() / 2}) {
    for (std::size_t il : {std::size_t{0}, lat->ny() / 2}) {
      CHECK(f.at(ik, il).imag() == 0.0);
    }
  }
  f.at(2, 1) += std::complex<double>(0.0, 1e-3);
  CHECK(!check_hermitian(f, 1e-9));
  enforce_hermitian(f);
  CHECK(check_hermitian(f, 0.0));
}

TEST_CASE("dealias: idempotent projection that kills exactly the masked modes") {
  auto lat = make_lattice(16, 8, 1.0, 1.0);
  SpectralField f = zero_field(lat);
  for (auto& c : f.coeffs) c = std::complex<double>(1.0, -2.0);
  SpectralField g = dealias(f);
  for (std::size_t il = 0; il < lat->ny(); ++il) {
    for (std::size_t ik = 0; ik < lat->nx(); ++ik) {
      if (lat->in_dealias_mask(ik, il)) {
        CHECK(g.at(ik, il) == std::complex<double>(1.0, -2.0));
      } else {
        CHECK(g.at(ik, il) == std::complex<double>(0.0, 0.0));
      }
    }
  }
  SpectralField h = dealias(g);
  CHECK(fields_bit_identical(g, h));
}

TEST_CASE("zero-mass projection: clears the k = 0 column and flags the field") {
  auto lat = make_lattice(8, 8, 1.0, 1.0);
  SpectralField f = zero_field(lat);
  for (auto& c : f.coeffs) c = std::complex<double>(0.25, 0.0);
  CHECK(!has_zero_x_mean(f));
  SpectralField g = project_zero_mass(f);
  CHECK(g.zero_x_mean);
  CHECK(has_zero_x_mean(g));
  for (std::size_t il = 0; il < lat->ny(); ++il) CHECK(g.at(0, il) == std::complex<double>(0.0));
  CHECK(g.at(1, 0) == std::complex<double>(0.25, 0.0));
}

TEST_CASE("nonlinear term: closed form for a single cosine") {
  // u = cos(2 pi x / lx): (1/2) d/dx u^2 = -(xi1/2) sin(2 xi1 x) with
  // xi1 = 2 pi / lx, whose spectral coefficients are +/- i xi1 / 4 at k = +/-2.
  const double lx = 5.0, ly = 3.0;
  const double xi1 = 2.0 * pi / lx;
  auto lat = make_lattice(32, 8, lx, ly);
  std::vector<double> u(lat->size());
  for (std::size_t il = 0; il < lat->ny(); ++il) {
    for (std::size_t ik = 0; ik < lat->nx(); ++ik) {
      double x = lx * static_cast<double>(ik) / static_cast<double>(lat->nx());
      u[lat->at(ik, il)] = std::cos(xi1 * x);
    }
  }
  SpectralField f = to_spectral(u, lat);
  SpectralField n = nonlinear_term(f);
  CHECK(n.real_symmetric);
  CHECK(n.zero_x_mean);
  for (std::size_t il = 0; il < lat->ny(); ++il) {
    for (std::size_t ik = 0; ik < lat->nx(); ++ik) {
      std::complex<double> c = n.at(ik, il);
      long k = lat->k_signed(ik);
      if (il == 0 && k == 2) {
        CHECK(std::abs(c - std::complex<double>(0.0, xi1 / 4.0)) <= 1e-14);
      } else if (il == 0 && k == -2) {
        CHECK(std::abs(c - std::complex<double>(0.0, -xi1 / 4.0)) <= 1e-14);
      } else {
        CHECK(std::abs(c) <= 1e-14);
      }
    }
  }
}

TEST_CASE("nonlinear term: matches a direct dense quadratic evaluation") {
  // Oracle: expand u on a 2x finer grid where the quadratic is alias-free by
  // construction, square, differentiate spectrally, and compare coefficients.
  const double lx = 9.0, ly = 4.0;
  auto lat = make_lattice(16, 16, lx, ly);
  auto fine = make_lattice(32, 32, lx, ly);
  SpectralField f = random_real_field(lat, 11);

  SpectralField f_fine = zero_field(fine);
  for (std::size_t il = 0; il < lat->ny(); ++il) {
    for (std::size_t ik = 0; ik < lat->nx(); ++ik) {
      long k = lat->k_signed(ik), l = lat->l_signed(il);
      if (!lat->in_dealias_mask(ik, il)) continue;
      std::size_t fk = k >= 0 ? static_cast<std::size_t>(k)
                              : fine->nx() - static_cast<std::size_t>(-k);
      std::size_t fl = l >= 0 ? static_cast<std::size_t>(l)
                              : fine->ny() - static_cast<std::size_t>(-l);
      f_fine.at(fk, fl) = f.at(ik, il);
    }
  }
  auto u_fine = to_physical(f_fine);
  for (auto& v : u_fine) v = v * v;
  SpectralField sq = to_spectral(u_fine, fine);

  SpectralField n = nonlinear_term(f);
  double err = 0.0, scale = 0.0;
  for (std::size_t il = 0; il < lat->ny(); ++il) {
    for (std::size_t ik = 0; ik < lat->nx(); ++ik) {
      long k = lat->k_signed(ik), l = lat->l_signed(il);
      std::complex<double> got = n.at(ik, il);
      std::complex<double> want(0.0, 0.0);
      if (lat->in_dealias_mask(ik, il) && k != 0) {
        std::size_t fk = k >= 0 ? static_cast<std::size_t>(k)
                                : fine->nx() - static_cast<std::size_t>(-k);
        std::size_t fl = l >= 0 ? static_cast<std::size_t>(l)
                                : fine->ny() - static_cast<std::size_t>(-l);
        want = std::complex<double>(0.0, 0.5 * lat->xi(ik)) * sq.at(fk, fl);
      }
      err = std::max(err, std::abs(got - want));
      scale = std::max(scale, std::abs(want));
    }
  }
  CHECK(err <= 1e-12 * std::max(1.0, scale));
}

TEST_CASE("field arithmetic: add, sub, scale act coefficient-wise") {
  auto lat = make_lattice(8, 8, 1.0, 1.0);
  SpectralField a = random_real_field(lat, 1);
  SpectralField b = random_real_field(lat, 2);
  SpectralField s = add(a, b);
  SpectralField d = sub(s, b);
  CHECK(field_rel_diff(d, a) <= 1e-15);
  SpectralField t = scale(a, -2.5);
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
    CHECK(t.coeffs[i] == a.coeffs[i] * (-2.5));
  }
  CHECK(t.real_symmetric == a.real_symmetric);
  CHECK(t.zero_x_mean == a.zero_x_mean);
}

TEST_CASE("field arithmetic: mismatched lattices are rejected") {
  auto lat1 = make_lattice(8, 8, 1.0, 1.0);
  auto lat2 = make_lattice(8, 8, 2.0, 1.0);
  SpectralField a = zero_field(lat1);
  SpectralField b = zero_field(lat2);
  CHECK_THROWS_AS((void)add(a, b), RejectedInputError);
}
