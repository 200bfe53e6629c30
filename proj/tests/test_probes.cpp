#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "doctest.h"
#include "kp5/errors.hpp"
#include "kp5/functionals.hpp"
#include "kp5/io.hpp"
#include "kp5/probes.hpp"
#include "kp5/rng.hpp"
#include "kp5/spacetime.hpp"
#include "test_util.hpp"

using namespace kp5;
using namespace kp5::testutil;
using std::numbers::pi;

namespace {

std::size_t signed_row(const FrequencyLattice& lat, long l) {
  return l >= 0 ? static_cast<std::size_t>(l) : lat.ny() - static_cast<std::size_t>(-l);
}

}  // namespace

TEST_CASE("random field ensembles: reproducible across runs and lattices") {
  auto lat16 = make_lattice(16, 16, 32.0 * pi, 32.0 * pi);
  auto lat32 = make_lattice(32, 32, 32.0 * pi, 32.0 * pi);

  SpectralField a = random_real_field(lat16, 77);
  SpectralField b = random_real_field(lat16, 77);
  CHECK(fields_bit_identical(a, b));
  CHECK_FALSE(fields_bit_identical(a, random_real_field(lat16, 78)));
  CHECK_FALSE(fields_bit_identical(a, random_real_field(lat16, 77, 1)));

  CHECK(check_hermitian(a, 0.0));
  // Zero x-mean and band support: nothing at k = 0 or outside the mask.
  Band band = dealias_band(*lat16);
  for (std::size_t il = 0; il < lat16->ny(); ++il) {
    CHECK(a.coeffs[lat16->at(0, il)] == std::complex<double>(0.0, 0.0));
    for (std::size_t ik = 0; ik < lat16->nx(); ++ik) {
      long k = lat16->k_signed(ik), l = lat16->l_signed(il);
      if (std::labs(k) > band.kx || std::labs(l) > band.ky)
        CHECK(a.coeffs[lat16->at(ik, il)] == std::complex<double>(0.0, 0.0));
    }
  }

  // A fixed (seed, band) pair pins the same draw to the same physical mode on
  // every lattice containing the band, so refinements see the same field.
  CounterRng r16(77, 0), r32(77, 0);
  SpectralField f16 = random_field(lat16, r16, band);
  SpectralField f32 = random_field(lat32, r32, band);
  for (long k = 1; k <= band.kx; ++k)
    for (long l = -band.ky; l <= band.ky; ++l) {
      std::complex<double> c16 =
          f16.coeffs[lat16->at(static_cast<std::size_t>(k), signed_row(*lat16, l))];
      std::complex<double> c32 =
          f32.coeffs[lat32->at(static_cast<std::size_t>(k), signed_row(*lat32, l))];
      CHECK(c16 == c32);
      CHECK(std::abs(c16) > 0.0);
    }
  CHECK(rel_diff(mass(f16), mass(f32)) <= 1e-14);
}

TEST_CASE("random space-time ensembles: Hermitian slices and tau structure") {
  auto lat = make_lattice(16, 16, 32.0 * pi, 32.0 * pi);
  DispersionParams p{1.0, 1.0};
  Band band{3, 3};
  std::size_t nt = 16;

  CounterRng rng(9, 0);
  SpaceTimeField f = random_st_field(lat, nt, TimeWindow{1.0}, 0.0, rng, band, 1.0, p);
  CHECK(f.t_ext == 2.0);  // defaulted to twice the window half-width
  REQUIRE(f.slices.size() == nt);
  for (const auto& s : f.slices) CHECK(check_hermitian(s, 0.0));

  SpaceTimeSpectrum sp = tau_forward(f);
  for (std::size_t q = 0; q < lat->size(); ++q) {
    // The tau-Nyquist row has no Hermitian partner and is left empty.
    CHECK(std::abs(sp.data[q * nt + nt / 2]) <= 1e-12);
  }
  for (std::size_t il = 0; il < lat->ny(); ++il)
    for (std::size_t im = 0; im < nt; ++im) {
      // No content at k = 0 or outside the requested band.
      CHECK(std::abs(sp.data[lat->at(0, il) * nt + im]) <= 1e-13);
      CHECK(std::abs(sp.data[lat->at(5, il) * nt + im]) <= 1e-13);
    }

  // Same (seed, band, nt) on a refined lattice: identical per-mode content.
  auto lat32 = make_lattice(32, 32, 32.0 * pi, 32.0 * pi);
  CounterRng rng2(9, 0);
  SpaceTimeField g = random_st_field(lat32, nt, TimeWindow{1.0}, 0.0, rng2, band, 1.0, p);
  for (std::size_t n = 0; n < nt; ++n)
    for (long k = 1; k <= band.kx; ++k)
      for (long l = -band.ky; l <= band.ky; ++l) {
        std::complex<double> cf =
            f.slices[n].coeffs[lat->at(static_cast<std::size_t>(k), signed_row(*lat, l))];
        std::complex<double> cg =
            g.slices[n].coeffs[lat32->at(static_cast<std::size_t>(k), signed_row(*lat32, l))];
        CHECK(std::abs(cf - cg) <= 1e-15 * std::max(1.0, std::abs(cf)));
      }
}

TEST_CASE("strichartz exponents: admissibility is validated") {
  CHECK_NOTHROW(StrichartzExponents(4.0, 4.0));
  CHECK_NOTHROW(StrichartzExponents(std::numeric_limits<double>::infinity(), 2.0));
  CHECK(StrichartzExponents(4.0, 4.0).delta() == 0.5);
  CHECK_THROWS_AS(StrichartzExponents(6.0, 4.0), ConfigError);   // off the admissible line
  CHECK_THROWS_AS(StrichartzExponents(4.0, 1.5), ConfigError);   // r below 2
  CHECK_THROWS_AS(StrichartzExponents(4.0, 2.0), ConfigError);   // r = 2 demands q = inf
  CHECK_THROWS_AS(
      StrichartzExponents(4.0, std::numeric_limits<double>::infinity()), ConfigError);
}

TEST_CASE("strichartz probe: deterministic reports with full metadata") {
  auto lat = make_lattice(16, 16, 32.0 * pi, 32.0 * pi);
  DispersionParams p{1.0, 1.0};
  Band band = dealias_band(*lat);

  ProbeReport r1 = strichartz_probe({4.0, 4.0}, lat, p, TimeWindow{1.0}, 16, 6, 42, band);
  ProbeReport r2 = strichartz_probe({4.0, 4.0}, lat, p, TimeWindow{1.0}, 16, 6, 42, band);
  CHECK(r1.to_csv() == r2.to_csv());  // byte-identical rerun

  CHECK(r1.inequality_id == "strichartz-q4-r4");
  CHECK(r1.seed == 42);
  CHECK(r1.ensemble == 6);
  CHECK(r1.rows.size() == 6);
  CHECK(r1.nx == 16);
  CHECK(r1.lx == 32.0 * pi);
  CHECK(r1.degenerate == 0);
  CHECK(r1.max_ratio > 0.0);
  double mx = 0.0;
  for (const auto& row : r1.rows) mx = std::max(mx, row.second);
  CHECK(r1.max_ratio == mx);
  CHECK(r1.median_ratio <= r1.max_ratio);
  CHECK(r1.median_ratio > 0.0);

  std::string csv = r1.to_csv();
  CHECK(csv.find("# inequality = strichartz-q4-r4") != std::string::npos);
  CHECK(csv.find("index,label,ratio") != std::string::npos);
  CHECK(csv.find("# summary,max,") != std::string::npos);
  CHECK(csv.find("# summary,degenerate,0") != std::string::npos);
}

TEST_CASE("probe report: summary statistics from rows") {
  ProbeReport rep;
  rep.rows = {{"sample", 1.0}, {"sample", 3.0}, {"sample", 2.0}};
  rep.finalize();
  CHECK(rep.max_ratio == 3.0);
  CHECK(rep.median_ratio == 2.0);
  rep.rows.push_back({"sample", 4.0});
  rep.finalize();
  CHECK(rep.max_ratio == 4.0);
  CHECK(rep.median_ratio == 2.5);
  rep.rows.clear();
  rep.finalize();
  CHECK(rep.max_ratio == 0.0);
  CHECK(rep.median_ratio == 0.0);
}

TEST_CASE("strichartz probe: the (4,4) pair rides the scaling exactly") {
  // Pure fifth-order symbol: shrinking the box by (2, 8) and time by 32 maps
  // the discrete flow onto itself, and the derivative weight delta/2 = 1/4
  // makes the ratio invariant.  All scale factors are powers of two, so the
  // two probes agree to the last bit up to rounding.
  DispersionParams p{0.0, 1.0};
  auto base = make_lattice(32, 32, 32.0 * pi, 32.0 * pi);
  auto fine = make_lattice(32, 32, 16.0 * pi, 4.0 * pi);
  ProbeReport rb =
      strichartz_probe({4.0, 4.0}, base, p, TimeWindow{1.0}, 32, 10, 5, dealias_band(*base));
  ProbeReport rf = strichartz_probe({4.0, 4.0}, fine, p, TimeWindow{1.0 / 32.0}, 32, 10, 5,
                                    dealias_band(*fine));
  CHECK(rb.max_ratio > 0.0);
  CHECK(rel_diff(rb.max_ratio, rf.max_ratio) <= 1e-12);
  CHECK(rel_diff(rb.median_ratio, rf.median_ratio) <= 1e-12);
}

TEST_CASE("strichartz probe: refining the lattice under a fixed band is stable") {
  DispersionParams p{1.0, 1.0};
  auto lat16 = make_lattice(16, 16, 32.0 * pi, 32.0 * pi);
  auto lat32 = make_lattice(32, 32, 32.0 * pi, 32.0 * pi);

  // With the band at a quarter of the coarse resolution, |u|^4 stays within
  // the range the coarse grid sums exactly, so both lattices see the same
  // physical ensemble AND evaluate the same quadrature: the trend collapses
  // to 1 up to rounding.
  Band quarter{2, 2};
  ProbeReport a = strichartz_probe({4.0, 4.0}, lat16, p, TimeWindow{1.0}, 32, 10, 5, quarter);
  ProbeReport b = strichartz_probe({4.0, 4.0}, lat32, p, TimeWindow{1.0}, 32, 10, 5, quarter);
  CHECK(a.max_ratio > 0.0);
  CHECK(refinement_trend(a, b) == doctest::Approx(1.0).epsilon(1e-12));

  // At the full coarse dealias band the quartic quadrature picks up a small
  // aliasing correction on the coarse grid only; refinement stays bounded.
  Band full = dealias_band(*lat16);
  ProbeReport af = strichartz_probe({4.0, 4.0}, lat16, p, TimeWindow{1.0}, 32, 10, 5, full);
  ProbeReport bf = strichartz_probe({4.0, 4.0}, lat32, p, TimeWindow{1.0}, 32, 10, 5, full);
  double trend = refinement_trend(af, bf);
  CHECK(trend >= 0.9);
  CHECK(trend <= 1.1);
}

TEST_CASE("dyadic probe: shell-localized ratios and the modulus variant") {
  auto lat = make_lattice(32, 32, 32.0 * pi, 32.0 * pi);
  DispersionParams p{0.0, 1.0};
  Band band = dealias_band(*lat);

  double jmin = std::numeric_limits<double>::infinity(), jmax = 0.0;
  for (unsigned j = 0; j <= 5; ++j) {
    ProbeReport r = dyadic_strichartz_probe(j, {4.0, 4.0}, lat, p, TimeWindow{1.0}, 32, 10, 9, band);
    CHECK(r.inequality_id == "dyadic-strichartz-j" + std::to_string(j));
    CHECK(r.degenerate == 0);
    CHECK(r.max_ratio > 0.0);
    CHECK(r.max_ratio <= 1.0);
    REQUIRE(r.extras.count("no_modulus_max") == 1);
    REQUIRE(r.extras.count("modulus_variant_gap") == 1);
    CHECK(r.extras.at("no_modulus_max") > 0.0);
    CHECK(r.extras.at("no_modulus_max") <= r.max_ratio);  // modulus can only help
    jmin = std::min(jmin, r.max_ratio);
    jmax = std::max(jmax, r.max_ratio);
  }
  // Uniformity across shells: the constants live within a small factor.
  CHECK(jmax / jmin <= 5.0);

  // On this grid the largest reachable modulation is below 2^5, so shell 6 is
  // empty: every sample is degenerate and the variant gap is not reported.
  ProbeReport r6 = dyadic_strichartz_probe(6, {4.0, 4.0}, lat, p, TimeWindow{1.0}, 32, 10, 9, band);
  CHECK(r6.degenerate == r6.ensemble);
  CHECK(r6.max_ratio == 0.0);
  CHECK(r6.extras.at("no_modulus_max") == 0.0);
  CHECK(r6.extras.count("modulus_variant_gap") == 0);
  CHECK_THROWS_AS((void)refinement_trend(r6, r6), ConfigError);
}

TEST_CASE("maximal probe: Cauchy-Schwarz cap and multiplier handling") {
  DispersionParams p{1.0, 1.0};
  auto lat = make_lattice(32, 32, 32.0 * pi, 32.0 * pi);
  Band band = dealias_band(*lat);

  ProbeReport cube = maximal_probe(MultiplierSpec::unit_cube(), lat, p, TimeWindow{1.0}, 16, 8, 3, band);
  CHECK(cube.inequality_id == "maximal-unit-cube");
  CHECK(cube.degenerate == 0);
  CHECK(cube.max_ratio > 0.0);
  CHECK(cube.max_ratio <= 1.0 + 1e-12);  // normalization makes 1 the hard cap
  CHECK(cube.extras.at("m_norm_grid") > 0.0);

  // On the long box every lattice frequency satisfies |xi|,|mu| <= 1, so the
  // cube indicator and the all-ones multiplier are the same grid function.
  ProbeReport ones = maximal_probe(MultiplierSpec::ones(), lat, p, TimeWindow{1.0}, 16, 8, 3, band);
  CHECK(ones.max_ratio == cube.max_ratio);
  CHECK(ones.median_ratio == cube.median_ratio);
  CHECK(ones.extras.at("m_norm_grid") == cube.extras.at("m_norm_grid"));

  // On a unit-scale box they genuinely differ (frequencies reach |xi| ~ 10).
  auto small = make_lattice(32, 32, 2.0 * pi, 2.0 * pi);
  Band sband = dealias_band(*small);
  ProbeReport c2 = maximal_probe(MultiplierSpec::unit_cube(), small, p, TimeWindow{1.0}, 16, 8, 3, sband);
  ProbeReport o2 = maximal_probe(MultiplierSpec::ones(), small, p, TimeWindow{1.0}, 16, 8, 3, sband);
  CHECK(c2.max_ratio != o2.max_ratio);
  CHECK(c2.max_ratio <= 1.0 + 1e-12);
  CHECK(o2.max_ratio <= 1.0 + 1e-12);

  // The zero multiplier kills the normalizer: every sample is degenerate.
  ProbeReport z = maximal_probe(MultiplierSpec::zero(), lat, p, TimeWindow{1.0}, 16, 8, 3, band);
  CHECK(z.degenerate == z.ensemble);
  CHECK(z.max_ratio == 0.0);
  CHECK(z.extras.at("m_norm_grid") == 0.0);
}

TEST_CASE("time-gain probe: positive slope with a tight power-law fit") {
  auto lat = make_lattice(16, 16, 32.0 * pi, 32.0 * pi);
  DispersionParams p{1.0, 1.0};
  Band band = dealias_band(*lat);
  std::vector<double> t_list{0.4, 0.2, 0.1, 0.05};

  ProbeReport r = time_gain_probe(0.25, 0.51, t_list, lat, p, 64, 10, 3, band);
  CHECK(r.inequality_id.rfind("time-gain-a0.25-b0.51", 0) == 0);
  CHECK(r.rows.size() == 4 * 10);
  CHECK(r.rows.front().first.rfind("T=0.4", 0) == 0);
  CHECK(r.max_ratio <= 1.0 + 1e-12);  // dropping modulation weight cannot grow the norm
  double sigma = r.extras.at("sigma_hat");
  CHECK(sigma > 0.1);
  CHECK(sigma < 0.5);
  CHECK(r.extras.at("fit_residual_rms") <= 0.05);
  for (double t : t_list) {
    REQUIRE(r.extras.count("gmax_" + format_full(t)) == 1);
    CHECK(r.extras.at("gmax_" + format_full(t)) > 0.0);
  }

  // The estimate is a property of the window, not of the padding choice.
  ProbeReport r4 = time_gain_probe(0.25, 0.51, t_list, lat, p, 64, 10, 3, band, 4.0);
  CHECK(std::abs(r4.extras.at("sigma_hat") - sigma) <= 0.02);

  // a = 0 compares a norm with itself: every ratio is exactly 1, slope 0.
  ProbeReport r0 = time_gain_probe(0.0, 0.51, t_list, lat, p, 64, 4, 3, band);
  CHECK(r0.max_ratio == 1.0);
  CHECK(std::abs(r0.extras.at("sigma_hat")) <= 1e-12);
  CHECK(r0.extras.at("fit_residual_rms") <= 1e-12);

  CHECK_THROWS_AS((void)time_gain_probe(0.25, 0.51, {0.4}, lat, p, 64, 4, 3, band), ConfigError);
  CHECK_THROWS_AS((void)time_gain_probe(0.6, 0.51, t_list, lat, p, 64, 4, 3, band), ConfigError);
  CHECK_THROWS_AS((void)time_gain_probe(-0.1, 0.51, t_list, lat, p, 64, 4, 3, band), ConfigError);
  CHECK_THROWS_AS((void)time_gain_probe(0.25, 0.51, t_list, lat, p, 64, 4, 3, band, 1.0),
                  ConfigError);
  CHECK_THROWS_AS((void)time_gain_probe(0.25, 0.51, {0.4, -0.2}, lat, p, 64, 4, 3, band),
                  ConfigError);
}

TEST_CASE("bilinear probe: classified rows and refinement stability") {
  DispersionParams p{1.0, 1.0};
  auto lat16 = make_lattice(16, 16, 32.0 * pi, 32.0 * pi);
  auto lat32 = make_lattice(32, 32, 32.0 * pi, 32.0 * pi);

  // Keep the band small enough that the product of two band fields is fully
  // representable inside the base dealias mask; the refinement then sees the
  // identical computation and the trend collapses to 1.
  Band half{2, 2};
  ProbeReport a = bilinear_probe(0.5, lat16, p, TimeWindow{1.0}, 32, 8, 5, half);
  ProbeReport b = bilinear_probe(0.5, lat32, p, TimeWindow{1.0}, 32, 8, 5, half);
  CHECK(a.degenerate == 0);
  CHECK(a.max_ratio > 0.0);
  CHECK(refinement_trend(a, b) == doctest::Approx(1.0).epsilon(1e-12));

  bool found_class_key = false;
  for (const auto& row : a.rows) {
    bool known = row.first == "LowLow" || row.first == "HighHigh" || row.first == "HighLow";
    CHECK(known);
    CHECK(std::isfinite(row.second));
    CHECK(row.second > 0.0);
  }
  for (const auto& [k, v] : a.extras)
    if (k.rfind("max_", 0) == 0) {
      found_class_key = true;
      CHECK(v > 0.0);
      CHECK(v <= a.max_ratio);
    }
  CHECK(found_class_key);

  // Reruns of the full pipeline serialize identically.
  ProbeReport a2 = bilinear_probe(0.5, lat16, p, TimeWindow{1.0}, 32, 8, 5, half);
  CHECK(a.to_csv() == a2.to_csv());
}
