#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "kp5/errors.hpp"

namespace kp5 {

// Doubly periodic rectangle [0,lx) x [0,ly) sampled on nx x ny points.
// Mode index ik in [0,nx) carries the signed integer wavenumber
// k = ik (ik < nx/2) or ik - nx, and the physical frequency xi = 2*pi*k/lx;
// same for the y direction with mu = 2*pi*l/ly.
class FrequencyLattice {
 public:
  FrequencyLattice(std::size_t nx, std::size_t ny, double lx, double ly);

  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  double lx() const { return lx_; }
  double ly() const { return ly_; }
  std::size_t size() const { return nx_ * ny_; }

  long k_signed(std::size_t ik) const {
    return ik < nx_ / 2 ? static_cast<long>(ik) : static_cast<long>(ik) - static_cast<long>(nx_);
  }
  long l_signed(std::size_t il) const {
    return il < ny_ / 2 ? static_cast<long>(il) : static_cast<long>(il) - static_cast<long>(ny_);
  }
  double xi(std::size_t ik) const { return xi_[ik]; }
  double mu(std::size_t il) const { return mu_[il]; }

  // Two-thirds rule: a mode survives iff 3|k| <= nx and 3|l| <= ny.
  bool in_dealias_mask(std::size_t ik, std::size_t il) const {
    return mask_x_[ik] && mask_y_[il];
  }

  std::size_t at(std::size_t ik, std::size_t il) const { return ik + nx_ * il; }
  // Mode index of (-k, -l).
  std::size_t mirror(std::size_t ik, std::size_t il) const {
    std::size_t jk = ik == 0 ? 0 : nx_ - ik;
    std::size_t jl = il == 0 ? 0 : ny_ - il;
    return at(jk, jl);
  }

  double cell_area() const { return (lx_ / static_cast<double>(nx_)) * (ly_ / static_cast<double>(ny_)); }
  double box_area() const { return lx_ * ly_; }

  bool operator==(const FrequencyLattice& o) const {
    return nx_ == o.nx_ && ny_ == o.ny_ && lx_ == o.lx_ && ly_ == o.ly_;
  }

 private:
  std::size_t nx_, ny_;
  double lx_, ly_;
  std::vector<double> xi_, mu_;
  std::vector<char> mask_x_, mask_y_;
};

using LatticePtr = std::shared_ptr<const FrequencyLattice>;

LatticePtr make_lattice(std::size_t nx, std::size_t ny, double lx, double ly);

// Spectral coefficients under the convention that the forward transform
// divides by nx*ny, so a unit-amplitude plane wave has unit coefficient.
// Physical L2 norm squared of the field equals lx*ly * sum |coeffs|^2.
struct SpectralField {
  LatticePtr lattice;
  std::vector<std::complex<double>> coeffs;  // ik + nx*il, x index fastest
  bool real_symmetric = false;  // coeff(-k,-l) == conj(coeff(k,l)), exact
  bool zero_x_mean = false;     // coeff(0,l) == 0 for all l, exact

  std::complex<double>& at(std::size_t ik, std::size_t il) { return coeffs[ik + lattice->nx() * il]; }
  const std::complex<double>& at(std::size_t ik, std::size_t il) const {
    return coeffs[ik + lattice->nx() * il];
  }
};

SpectralField zero_field(LatticePtr lat);

// Forward transform of real samples (row-major, x fastest).  The result is
// made exactly Hermitian by construction; zero_x_mean is detected.
SpectralField to_spectral(std::span<const double> samples, LatticePtr lat);

// Inverse transform; imaginary residue of a Hermitian field is discarded.
std::vector<double> to_physical(const SpectralField& f);

// Zeroes every coefficient with k = 0 (x-average removal per horizontal line).
SpectralField project_zero_mass(SpectralField f);

// Zeroes every coefficient outside the two-thirds mask.
SpectralField dealias(SpectralField f);

// Spectral coefficients of (1/2) d/dx (u^2): inverse transform, pointwise
// square, forward transform, multiply by i*xi, halve, dealias, project.
// Input must already be band-limited to the dealias mask for the product
// to be alias-free.
SpectralField nonlinear_term(const SpectralField& f);

// Exact Hermitian symmetrization (averages mirrored pairs).
void enforce_hermitian(SpectralField& f);
bool check_hermitian(const SpectralField& f, double tol);
bool has_zero_x_mean(const SpectralField& f);

SpectralField add(const SpectralField& a, const SpectralField& b);
SpectralField sub(const SpectralField& a, const SpectralField& b);
SpectralField scale(SpectralField f, double c);

// Low-level transform access (shared FFTW plans, new-array execution).
// Forward divides by nx*ny; inverse leaves values unscaled.
void fft2_forward(const FrequencyLattice& lat, std::vector<std::complex<double>>& data);
void fft2_inverse(const FrequencyLattice& lat, std::vector<std::complex<double>>& data);

// 1-D transforms along the last axis of a (howmany x n) contiguous buffer,
// used for the time direction of space-time fields.  Forward divides by n.
void fft1_forward_batch(std::size_t n, std::size_t howmany, std::complex<double>* data);
void fft1_inverse_batch(std::size_t n, std::size_t howmany, std::complex<double>* data);

}  // namespace kp5
