#include "kp5/lattice.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <numbers>

namespace kp5 {
namespace {

bool is_pow2(std::size_t n) { return n >= 4 && (n & (n - 1)) == 0; }

// FFTW plan creation is not thread-safe; new-array execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct Plan2d {
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
};

Plan2d& plans2d(std::size_t nx, std::size_t ny) {
  static std::map<std::pair<std::size_t, std::size_t>, Plan2d> cache;
  std::lock_guard<std::mutex> lock(planner_mutex());
  auto key = std::make_pair(nx, ny);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<std::complex<double>> scratch(nx * ny);
  auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
  Plan2d plan;
  // Row-major with x fastest means FFTW dims are (ny, nx).
  plan.fwd = fftw_plan_dft_2d(static_cast<int>(ny), static_cast<int>(nx), p, p, FFTW_FORWARD,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
  plan.inv = fftw_plan_dft_2d(static_cast<int>(ny), static_cast<int>(nx), p, p, FFTW_BACKWARD,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
  return cache.emplace(key, plan).first->second;
}

struct Plan1d {
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
};

Plan1d& plans1d(std::size_t n, std::size_t howmany) {
  static std::map<std::pair<std::size_t, std::size_t>, Plan1d> cache;
  std::lock_guard<std::mutex> lock(planner_mutex());
  auto key = std::make_pair(n, howmany);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<std::complex<double>> scratch(n * howmany);
  auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
  int ni = static_cast<int>(n);
  Plan1d plan;
  plan.fwd = fftw_plan_many_dft(1, &ni, static_cast<int>(howmany), p, nullptr, 1, ni, p, nullptr, 1,
                                ni, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  plan.inv = fftw_plan_many_dft(1, &ni, static_cast<int>(howmany), p, nullptr, 1, ni, p, nullptr, 1,
                                ni, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  return cache.emplace(key, plan).first->second;
}

}  // namespace

FrequencyLattice::FrequencyLattice(std::size_t nx, std::size_t ny, double lx, double ly)
    : nx_(nx), ny_(ny), lx_(lx), ly_(ly) {
  if (!is_pow2(nx) || !is_pow2(ny))
    throw ConfigError("lattice dimensions must be powers of two, at least 4");
  if (!(lx > 0.0) || !(ly > 0.0)) throw ConfigError("lattice box lengths must be positive");
  xi_.resize(nx);
  mu_.resize(ny);
  mask_x_.resize(nx);
  mask_y_.resize(ny);
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t ik = 0; ik < nx; ++ik) {
    long k = k_signed(ik);
    xi_[ik] = two_pi * static_cast<double>(k) / lx;
    mask_x_[ik] = 3 * std::labs(k) <= static_cast<long>(nx) ? 1 : 0;
  }
  for (std::size_t il = 0; il < ny; ++il) {
    long l = l_signed(il);
    mu_[il] = two_pi * static_cast<double>(l) / ly;
    mask_y_[il] = 3 * std::labs(l) <= static_cast<long>(ny) ? 1 : 0;
  }
}

LatticePtr make_lattice(std::size_t nx, std::size_t ny, double lx, double ly) {
  return std::make_shared<const FrequencyLattice>(nx, ny, lx, ly);
}

SpectralField zero_field(LatticePtr lat) {
  SpectralField f;
  f.coeffs.assign(lat->size(), {0.0, 0.0});
  f.lattice = std::move(lat);
  f.real_symmetric = true;
  f.zero_x_mean = true;
  return f;
}

void fft2_forward(const FrequencyLattice& lat, std::vector<std::complex<double>>& data) {
  auto& plan = plans2d(lat.nx(), lat.ny());
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan.fwd, p, p);
  double inv_n = 1.0 / static_cast<double>(lat.size());
  for (auto& c : data) c *= inv_n;
}

void fft2_inverse(const FrequencyLattice& lat, std::vector<std::complex<double>>& data) {
  auto& plan = plans2d(lat.nx(), lat.ny());
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan.inv, p, p);
}

void fft1_forward_batch(std::size_t n, std::size_t howmany, std::complex<double>* data) {
  auto& plan = plans1d(n, howmany);
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plan.fwd, p, p);
  double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n * howmany; ++i) data[i] *= inv_n;
}

void fft1_inverse_batch(std::size_t n, std::size_t howmany, std::complex<double>* data) {
  auto& plan = plans1d(n, howmany);
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plan.inv, p, p);
}

void enforce_hermitian(SpectralField& f) {
  const auto& lat = *f.lattice;
  for (std::size_t il = 0; il < lat.ny(); ++il) {
    for (std::size_t ik = 0; ik < lat.nx(); ++ik) {
      std::size_t q = lat.at(ik, il);
      std::size_t m = lat.mirror(ik, il);
      if (m < q) continue;
      if (m == q) {
        // Self-conjugate mode: force real.
        f.coeffs[q] = {f.coeffs[q].real(), 0.0};
        continue;
      }
      std::complex<double> avg = 0.5 * (f.coeffs[q] + std::conj(f.coeffs[m]));
      f.coeffs[q] = avg;
      f.coeffs[m] = std::conj(avg);
    }
  }
  f.real_symmetric = true;
}

bool check_hermitian(const SpectralField& f, double tol) {
  const auto& lat = *f.lattice;
  for (std::size_t il = 0; il < lat.ny(); ++il)
    for (std::size_t ik = 0; ik < lat.nx(); ++ik) {
      std::size_t q = lat.at(ik, il);
      std::size_t m = lat.mirror(ik, il);
      if (std::abs(f.coeffs[q] - std::conj(f.coeffs[m])) > tol) return false;
    }
  return true;
}

bool has_zero_x_mean(const SpectralField& f) {
  const auto& lat = *f.lattice;
  for (std::size_t il = 0; il < lat.ny(); ++il) {
    const auto& c = f.at(0, il);
    if (c.real() != 0.0 || c.imag() != 0.0) return false;
  }
  return true;
}

SpectralField to_spectral(std::span<const double> samples, LatticePtr lat) {
  if (samples.size() != lat->size())
    throw RejectedInputError("to_spectral: sample count does not match lattice");
  SpectralField f;
  f.lattice = std::move(lat);
  f.coeffs.assign(samples.begin(), samples.end());
  fft2_forward(*f.lattice, f.coeffs);
  enforce_hermitian(f);
  f.zero_x_mean = has_zero_x_mean(f);
  return f;
}

std::vector<double> to_physical(const SpectralField& f) {
  std::vector<std::complex<double>> work = f.coeffs;
  fft2_inverse(*f.lattice, work);
  std::vector<double> out(work.size());
  for (std::size_t i = 0; i < work.size(); ++i) out[i] = work[i].real();
  return out;
}

SpectralField project_zero_mass(SpectralField f) {
  const auto& lat = *f.lattice;
  for (std::size_t il = 0; il < lat.ny(); ++il) f.at(0, il) = {0.0, 0.0};
  f.zero_x_mean = true;
  return f;
}

SpectralField dealias(SpectralField f) {
  const auto& lat = *f.lattice;
  for (std::size_t il = 0; il < lat.ny(); ++il)
    for (std::size_t ik = 0; ik < lat.nx(); ++ik)
      if (!lat.in_dealias_mask(ik, il)) f.coeffs[lat.at(ik, il)] = {0.0, 0.0};
  return f;
}

SpectralField nonlinear_term(const SpectralField& f) {
  const auto& lat = *f.lattice;
  std::vector<std::complex<double>> work = f.coeffs;
  fft2_inverse(lat, work);
  for (auto& c : work) {
    double u = c.real();
    c = {u * u, 0.0};
  }
  fft2_forward(lat, work);
  SpectralField out;
  out.lattice = f.lattice;
  out.coeffs = std::move(work);
  enforce_hermitian(out);
  for (std::size_t il = 0; il < lat.ny(); ++il)
    for (std::size_t ik = 0; ik < lat.nx(); ++ik) {
      std::complex<double> c = out.coeffs[lat.at(ik, il)];
      out.coeffs[lat.at(ik, il)] = std::complex<double>(0.0, 0.5 * lat.xi(ik)) * c;
    }
  out = dealias(std::move(out));
  out = project_zero_mass(std::move(out));
  out.real_symmetric = true;
  return out;
}

SpectralField add(const SpectralField& a, const SpectralField& b) {
  if (!(*a.lattice == *b.lattice)) throw RejectedInputError("add: lattice mismatch");
  SpectralField out = a;
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] += b.coeffs[i];
  out.real_symmetric = a.real_symmetric && b.real_symmetric;
  out.zero_x_mean = a.zero_x_mean && b.zero_x_mean;
  return out;
}

SpectralField sub(const SpectralField& a, const SpectralField& b) {
  if (!(*a.lattice == *b.lattice)) throw RejectedInputError("sub: lattice mismatch");
  SpectralField out = a;
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] -= b.coeffs[i];
  out.real_symmetric = a.real_symmetric && b.real_symmetric;
  out.zero_x_mean = a.zero_x_mean && b.zero_x_mean;
  return out;
}

SpectralField scale(SpectralField f, double c) {
  for (auto& v : f.coeffs) v *= c;
  return f;
}

}  // namespace kp5
