#pragma once

// Shift orthogonal plane waves on a 1D periodic domain [0, L) with unit
// shift length and even L.
//
// theta^k_j has Fourier coefficients on the frequency shell
// (k-1)L/2 <= |n| <= kL/2:
//
//   interior modes: (sgn(n) i)^(k-1) omega_j^(-n) / sqrt(L)
//   edge modes:     (sgn(n) i)^(k-1) omega_j^(-n) / sqrt(2L)
//
// with omega_j = exp(i 2pi j / L). The edge |n| = kL/2 is shared between
// depths k and k+1; depth 1 has no lower edge. The family {theta^k_j} is a
// real, complete, orthonormal basis whose depth-k members are the integer
// translates theta^k_0(x - j).

#include <cstddef>
#include <span>
#include <vector>

#include "shiftorth/lattice.hpp"

namespace shiftorth {

class SopwBasis1D {
 public:
  /// Throws PreconditionError for odd L, L < 2 or N < 1.
  SopwBasis1D(int shifts, int depths);

  int shifts() const { return shifts_; }
  int depths() const { return depths_; }
  /// Highest Fourier frequency touched by depths 1..N: N L / 2.
  int max_frequency() const { return depths_ * shifts_ / 2; }
  LatticeDomain domain() const { return LatticeDomain::line(shifts_, depths_); }
  /// Smallest grid that resolves every retained mode without aliasing.
  std::size_t min_grid_size() const { return static_cast<std::size_t>(2 * max_frequency() + 1); }
  /// Oversampled default grid, 2 N L points.
  std::size_t default_grid_size() const { return static_cast<std::size_t>(2 * depths_ * shifts_); }

 private:
  int shifts_;
  int depths_;
};

/// Complex Fourier coefficients a(n), |n| <= N L / 2, of
/// f(x) = sum_n a(n) exp(i 2pi n x / L) / sqrt(L).
class FourierRep {
 public:
  FourierRep(int shifts, int depths);
  FourierRep(int shifts, int depths, ComplexVector coeffs);

  int shifts() const { return shifts_; }
  int depths() const { return depths_; }
  int max_frequency() const { return depths_ * shifts_ / 2; }

  Complex& operator()(int n) { return coeffs_[index(n)]; }
  const Complex& operator()(int n) const { return coeffs_[index(n)]; }

  /// Ordered from n = -N L / 2 to n = N L / 2.
  std::span<const Complex> coeffs() const { return coeffs_; }
  std::span<Complex> coeffs() { return coeffs_; }

  double norm() const;

 private:
  std::size_t index(int n) const;

  int shifts_;
  int depths_;
  ComplexVector coeffs_;
};

struct FourierMode {
  int n;
  Complex coeff;
};

/// Nonzero Fourier coefficients of theta^k_j, ordered by increasing n.
/// Supports 1 <= k <= N + 1.
std::vector<FourierMode> sopw_fourier_coeffs(int k, int j, const SopwBasis1D& basis);

struct SopwAnalysis {
  CoeffTensor coeffs;
  /// L2 norm of the part of the input outside span{theta^k_j : k <= N}.
  double residual = 0.0;
  /// residual / ||input||, zero for a zero input.
  double relative_residual = 0.0;
};

SopwAnalysis fourier_to_sopw(const FourierRep& f, const SopwBasis1D& basis);
FourierRep sopw_to_fourier(const CoeffTensor& t, const SopwBasis1D& basis);

/// theta^k_j(x) from its closed trigonometric form.
double eval_closed_form(int k, int j, double x, const SopwBasis1D& basis);

/// Samples of sum a(k, j) theta^k_j at x_m = m L / G, m = 0..G-1.
/// Throws PreconditionError when G < N L + 1.
ComplexVector synthesize_grid(const CoeffTensor& t, std::size_t grid_size,
                              const SopwBasis1D& basis);
RealVector synthesize_grid_real(const CoeffTensor& t, std::size_t grid_size,
                                const SopwBasis1D& basis);

/// Left inverse of synthesize_grid; the residual counts out-of-band energy
/// and the depth-(N+1) half of the cap edge modes.
SopwAnalysis analyze_grid(std::span<const Complex> samples, const SopwBasis1D& basis);
SopwAnalysis analyze_grid(std::span<const double> samples, const SopwBasis1D& basis);

/// Fourier coefficients of a grid function, |n| <= N L / 2, plus the L2
/// norm of everything the grid holds outside that band.
struct GridSpectrum {
  FourierRep fourier;
  double out_of_band = 0.0;
};
GridSpectrum grid_to_fourier(std::span<const Complex> samples, const SopwBasis1D& basis);
ComplexVector fourier_to_grid(const FourierRep& f, std::size_t grid_size);

/// Expansion of a derivative of theta^k_l over depths k-1, k, k+1:
/// d theta^k_l = sum_j prev[j] theta^(k-1)_j + same[j] theta^k_j
///             + next[j] theta^(k+1)_j.
struct DerivativeStencil {
  int depth = 1;
  int shift = 0;
  RealVector coeffs_prev;
  RealVector coeffs_same;
  RealVector coeffs_next;
};

DerivativeStencil first_derivative_stencil(int k, int l, const SopwBasis1D& basis);
DerivativeStencil second_derivative_stencil(int k, int l, const SopwBasis1D& basis);

/// Closed forms of sum n omega_j^n and sum n^2 omega_j^n over the open
/// shell (k-1)L/2 < |n| < kL/2.
struct ShellSums {
  Complex first;
  Complex second;
};
ShellSums lemma_sums(int k, int j, const SopwBasis1D& basis);

}  // namespace shiftorth
