#pragma once

// Split Bregman solver for 1D compressed plane waves.
//
// Mode n+1 minimizes (1/mu) int |psi| + int psi H0 psi with H0 = -1/2 d^2/dx^2
// on the periodic domain [0, L), subject to shift orthogonality and shift
// perpendicularity to modes 1..n. Each iteration does a spectral Helmholtz
// solve for psi, an exact projection for the constrained copy v in SOPW
// coefficient space, a soft threshold for the sparse copy u and the two
// Bregman updates. The returned mode is the final v, which is feasible by
// construction.

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "shiftorth/projection.hpp"
#include "shiftorth/sopw.hpp"

namespace shiftorth {

enum class CpwInit { GaussianBump, RandomSeeded };

struct CpwConfig {
  /// L1 weight; infinity drops the L1 term.
  double mu = 0.03;
  /// Penalties on the u and v splits; unset means (pi N)^2, twice the
  /// largest H0 eigenvalue in the SOPW band. Much smaller penalties let the
  /// iteration drift into high-frequency limit cycles.
  std::optional<double> lambda;
  std::optional<double> r;
  double tol = 1e-6;
  int max_iter = 20000;
  /// Unset means the basis default of 2 N L points.
  std::optional<std::size_t> grid_size;
  CpwInit init = CpwInit::GaussianBump;
  std::uint64_t seed = 0;

  double effective_lambda(const SopwBasis1D& basis) const;
  double effective_r(const SopwBasis1D& basis) const;
  std::size_t effective_grid(const SopwBasis1D& basis) const;
  /// Throws PreconditionError on an invalid combination.
  void validate(const SopwBasis1D& basis) const;
};

struct CpwDiagnostics {
  int iterations = 0;
  bool converged = false;
  /// Shift-orthogonality violation of the returned mode.
  double constraint_violation = 0.0;
  /// Largest shift inner product with any earlier mode.
  double perpendicular_violation = 0.0;
  /// |{x : |v(x)| > 1e-3 max |v|}| / G for the returned mode.
  double support_fraction = 0.0;
  double energy = 0.0;
  /// Largest relative out-of-band residual seen in the v-update.
  double max_band_residual = 0.0;
  /// Largest imaginary part seen in the SOPW coefficients of real fields.
  double max_imag = 0.0;
  /// Per-iteration objective of v, shift-orthogonality violation of v and
  /// relative change of psi.
  std::vector<double> energy_history;
  std::vector<double> constraint_history;
  std::vector<double> change_history;
};

/// Grid fields of the Bregman loop; d and b are the multipliers of the u
/// and v splits.
struct CpwState {
  RealVector psi;
  RealVector u;
  RealVector v;
  RealVector d;
  RealVector b;
  /// SOPW coefficients of v.
  CoeffTensor v_coeffs{LatticeDomain::line(2, 1)};
  CpwDiagnostics diagnostics;

  /// Throws PreconditionError unless all fields share one grid size.
  void require_consistent() const;
};

struct CpwMode {
  CoeffTensor coeffs;
  RealVector samples;
  CpwDiagnostics diagnostics;
};

/// Previously solved modes with their SOPW coefficients and grid samples.
class CpwModeSet {
 public:
  explicit CpwModeSet(const SopwBasis1D& basis);

  /// Validates shift orthogonality and perpendicularity to 1e-8.
  void add(const CpwMode& mode);

  std::size_t size() const { return modes_.size(); }
  const ShiftOrthogonalModes& modes() const { return modes_; }
  const RealVector& samples(std::size_t m) const { return samples_[m]; }

 private:
  ShiftOrthogonalModes modes_;
  std::vector<RealVector> samples_;
};

/// Solves (H0 + lambda + r) psi = rhs spectrally on a uniform periodic grid
/// over [0, period). Throws PreconditionError when lambda + r <= 0.
RealVector helmholtz_solve(std::span<const double> rhs, double lambda, double r,
                           double period);

/// Applies H0 = -1/2 d^2/dx^2 spectrally.
RealVector apply_kinetic(std::span<const double> field, double period);

/// Pointwise sgn(w) max(0, |w| - threshold).
RealVector shrink(std::span<const double> w, double threshold);

/// (1/mu) int |psi| + int psi H0 psi with trapezoidal and spectral
/// quadrature; mu = infinity keeps only the kinetic term.
double cpw_energy(std::span<const double> psi, double mu, double period);

/// int theta^k H0 theta^k = sum_n |a(n)|^2 2 (pi n / L)^2 over the Fourier
/// coefficients of theta^k_0; for k = 1 this is the mu = infinity optimum.
double sopw_kinetic_energy(int k, const SopwBasis1D& basis);

/// Fraction of grid points where |psi| exceeds 1e-3 max |psi|.
double support_fraction(std::span<const double> psi);

/// (pi N)^2 / 2, the H0 eigenvalue at the band edge |n| = N L / 2.
double band_edge_eigenvalue(const SopwBasis1D& basis);

/// Initial guess before projection.
RealVector cpw_initial_field(const CpwConfig& cfg, const SopwBasis1D& basis,
                             std::size_t mode_index);

/// Projected initial field with u = v = psi and zero multipliers.
CpwState init_cpw_state(const CpwModeSet& prev, const CpwConfig& cfg,
                        const SopwBasis1D& basis);

/// One Bregman sweep; returns ||psi_new - psi_old|| / ||psi_new|| and
/// appends to the histories.
double cpw_iterate(CpwState& state, const CpwModeSet& prev, const CpwConfig& cfg,
                   const SopwBasis1D& basis);

/// Runs the Bregman loop for the next mode. Throws InfeasibleError when
/// prev already holds N modes.
CpwMode solve_cpw_mode(const CpwModeSet& prev, const CpwConfig& cfg,
                       const SopwBasis1D& basis);

}  // namespace shiftorth
