#include "shiftorth/cpw.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "fft_plan.hpp"

namespace shiftorth {

namespace {

using std::numbers::pi;

/// Eigenvalue of H0 on grid bin b of a G-point grid over [0, period).
double kinetic_eigenvalue(std::size_t b, std::size_t grid, double period) {
  const double n = b <= grid / 2 ? double(b) : double(b) - double(grid);
  const double k = 2.0 * pi * n / period;
  return 0.5 * k * k;
}

ComplexVector forward_spectrum(std::span<const double> field) {
  ComplexVector spectrum(field.begin(), field.end());
  detail::dft(spectrum, detail::DftSign::Negative);
  return spectrum;
}

RealVector inverse_real(ComplexVector spectrum) {
  detail::dft(spectrum, detail::DftSign::Positive);
  const double inv = 1.0 / static_cast<double>(spectrum.size());
  RealVector out(spectrum.size());
  for (std::size_t m = 0; m < spectrum.size(); ++m) out[m] = spectrum[m].real() * inv;
  return out;
}

double l2_norm(std::span<const double> f) {
  double sum = 0.0;
  for (double x : f) sum += x * x;
  return std::sqrt(sum);
}

/// Real SOPW coefficients of a real grid field, tracking the imaginary
/// round-off and the out-of-band residual.
CoeffTensor analyze_real(std::span<const double> field, const SopwBasis1D& basis,
                         CpwDiagnostics& diag) {
  SopwAnalysis analysis = analyze_grid(field, basis);
  diag.max_band_residual = std::max(diag.max_band_residual, analysis.relative_residual);
  CoeffTensor coeffs = std::move(analysis.coeffs);
  diag.max_imag = std::max(diag.max_imag, coeffs.max_abs_imag());
  for (Complex& z : coeffs.data()) z = z.real();
  return coeffs;
}

CoeffTensor project(const CoeffTensor& b, const CpwModeSet& prev) {
  if (prev.size() == 0) return project_sso(b);
  return project_sso_orth(b, prev.modes());
}

}  // namespace

double band_edge_eigenvalue(const SopwBasis1D& basis) {
  const double k = pi * basis.depths();
  return 0.5 * k * k;
}

double CpwConfig::effective_lambda(const SopwBasis1D& basis) const {
  return lambda.value_or(2.0 * band_edge_eigenvalue(basis));
}

double CpwConfig::effective_r(const SopwBasis1D& basis) const {
  return r.value_or(2.0 * band_edge_eigenvalue(basis));
}

std::size_t CpwConfig::effective_grid(const SopwBasis1D& basis) const {
  return grid_size.value_or(basis.default_grid_size());
}

void CpwConfig::validate(const SopwBasis1D& basis) const {
  if (!(mu > 0.0)) throw PreconditionError("mu must be positive");
  if (!(effective_lambda(basis) > 0.0)) throw PreconditionError("lambda must be positive");
  if (!(effective_r(basis) > 0.0)) throw PreconditionError("r must be positive");
  if (!(tol > 0.0)) throw PreconditionError("tol must be positive");
  if (max_iter < 1) throw PreconditionError("max_iter must be >= 1");
  if (effective_grid(basis) < basis.min_grid_size()) {
    throw PreconditionError("grid_size must be at least N L + 1 = " +
                            std::to_string(basis.min_grid_size()));
  }
}

CpwModeSet::CpwModeSet(const SopwBasis1D& basis) : modes_(basis.domain()) {}

void CpwModeSet::add(const CpwMode& mode) {
  modes_.add(mode.coeffs, true);
  samples_.push_back(mode.samples);
}

RealVector helmholtz_solve(std::span<const double> rhs, double lambda, double r,
                           double period) {
  if (!(lambda + r > 0.0)) {
    throw PreconditionError("Helmholtz operator is singular for lambda + r <= 0");
  }
  ComplexVector spectrum = forward_spectrum(rhs);
  for (std::size_t b = 0; b < spectrum.size(); ++b) {
    spectrum[b] /= kinetic_eigenvalue(b, spectrum.size(), period) + lambda + r;
  }
  return inverse_real(std::move(spectrum));
}

RealVector apply_kinetic(std::span<const double> field, double period) {
  ComplexVector spectrum = forward_spectrum(field);
  for (std::size_t b = 0; b < spectrum.size(); ++b) {
    spectrum[b] *= kinetic_eigenvalue(b, spectrum.size(), period);
  }
  return inverse_real(std::move(spectrum));
}

RealVector shrink(std::span<const double> w, double threshold) {
  if (threshold < 0.0) throw PreconditionError("shrink threshold must be nonnegative");
  RealVector out(w.size());
  for (std::size_t m = 0; m < w.size(); ++m) {
    const double mag = std::max(0.0, std::abs(w[m]) - threshold);
    out[m] = w[m] < 0.0 ? -mag : mag;
  }
  return out;
}

double cpw_energy(std::span<const double> psi, double mu, double period) {
  if (psi.empty()) return 0.0;
  const auto G = static_cast<double>(psi.size());
  double kinetic = 0.0;
  const ComplexVector spectrum = forward_spectrum(psi);
  for (std::size_t b = 0; b < spectrum.size(); ++b) {
    kinetic += kinetic_eigenvalue(b, spectrum.size(), period) * std::norm(spectrum[b]);
  }
  kinetic *= period / (G * G);
  if (std::isinf(mu)) return kinetic;
  double l1 = 0.0;
  for (double x : psi) l1 += std::abs(x);
  return l1 * period / G / mu + kinetic;
}

double sopw_kinetic_energy(int k, const SopwBasis1D& basis) {
  double energy = 0.0;
  for (const FourierMode& mode : sopw_fourier_coeffs(k, 0, basis)) {
    const double q = pi * mode.n / basis.shifts();
    energy += std::norm(mode.coeff) * 2.0 * q * q;
  }
  return energy;
}

double support_fraction(std::span<const double> psi) {
  if (psi.empty()) return 0.0;
  double peak = 0.0;
  for (double x : psi) peak = std::max(peak, std::abs(x));
  if (peak == 0.0) return 0.0;
  const auto count = std::count_if(psi.begin(), psi.end(),
                                   [peak](double x) { return std::abs(x) > 1e-3 * peak; });
  return static_cast<double>(count) / static_cast<double>(psi.size());
}

RealVector cpw_initial_field(const CpwConfig& cfg, const SopwBasis1D& basis,
                             std::size_t mode_index) {
  const std::size_t grid = cfg.effective_grid(basis);
  const double period = basis.shifts();
  RealVector field(grid);
  switch (cfg.init) {
    case CpwInit::GaussianBump: {
      const double width = period / (4.0 * basis.shifts());
      const double center = 0.5 * period;
      for (std::size_t m = 0; m < grid; ++m) {
        const double x = period * static_cast<double>(m) / static_cast<double>(grid);
        const double z = (x - center) / width;
        field[m] = std::exp(-0.5 * z * z);
      }
      break;
    }
    case CpwInit::RandomSeeded: {
      std::mt19937_64 rng(cfg.seed + 0x9e3779b97f4a7c15ULL * mode_index);
      std::normal_distribution<double> normal;
      CoeffTensor coeffs(basis.domain());
      for (Complex& z : coeffs.data()) z = normal(rng);
      field = synthesize_grid_real(coeffs, grid, basis);
      break;
    }
  }
  const double scale = std::sqrt(period / static_cast<double>(grid)) * l2_norm(field);
  if (scale > 0.0) {
    for (double& x : field) x /= scale;
  }
  return field;
}

void CpwState::require_consistent() const {
  const std::size_t g = psi.size();
  if (u.size() != g || v.size() != g || d.size() != g || b.size() != g) {
    throw PreconditionError("CPW state fields have different grid sizes");
  }
}

CpwState init_cpw_state(const CpwModeSet& prev, const CpwConfig& cfg,
                        const SopwBasis1D& basis) {
  cfg.validate(basis);
  if (prev.size() >= static_cast<std::size_t>(basis.depths())) {
    throw InfeasibleError("a new mode needs fewer than N = " +
                          std::to_string(basis.depths()) + " previous modes");
  }
  const std::size_t grid = cfg.effective_grid(basis);
  CpwState state;
  CpwDiagnostics scratch;
  state.v_coeffs = project(analyze_real(cpw_initial_field(cfg, basis, prev.size()), basis, scratch),
                           prev);
  state.v = synthesize_grid_real(state.v_coeffs, grid, basis);
  state.u = state.v;
  state.psi = state.v;
  state.d.assign(grid, 0.0);
  state.b.assign(grid, 0.0);
  return state;
}

double cpw_iterate(CpwState& state, const CpwModeSet& prev, const CpwConfig& cfg,
                   const SopwBasis1D& basis) {
  state.require_consistent();
  const std::size_t grid = state.psi.size();
  const double period = basis.shifts();
  const double lambda = cfg.effective_lambda(basis);
  const double r = cfg.effective_r(basis);
  const double threshold = std::isinf(cfg.mu) ? 0.0 : 1.0 / (lambda * cfg.mu);

  // The psi subproblem has normal equations (2 H0 + lambda + r) psi = rhs;
  // halving both sides reuses the (H0 + lambda + r) solver.
  RealVector work(grid);
  for (std::size_t m = 0; m < grid; ++m) {
    work[m] = 0.5 * (lambda * (state.u[m] - state.d[m]) + r * (state.v[m] - state.b[m]));
  }
  RealVector next = helmholtz_solve(work, 0.5 * lambda, 0.5 * r, period);

  for (std::size_t m = 0; m < grid; ++m) work[m] = next[m] + state.b[m];
  state.v_coeffs = project(analyze_real(work, basis, state.diagnostics), prev);
  state.v = synthesize_grid_real(state.v_coeffs, grid, basis);

  for (std::size_t m = 0; m < grid; ++m) work[m] = next[m] + state.d[m];
  state.u = shrink(work, threshold);

  double change = 0.0;
  for (std::size_t m = 0; m < grid; ++m) {
    state.d[m] += next[m] - state.u[m];
    state.b[m] += next[m] - state.v[m];
    change += (next[m] - state.psi[m]) * (next[m] - state.psi[m]);
  }
  const double norm = l2_norm(next);
  const double relative = norm > 0.0 ? std::sqrt(change) / norm : std::sqrt(change);
  state.psi = std::move(next);

  CpwDiagnostics& diag = state.diagnostics;
  diag.iterations += 1;
  diag.change_history.push_back(relative);
  diag.energy_history.push_back(cpw_energy(state.v, cfg.mu, period));
  diag.constraint_history.push_back(
      is_shift_orthogonal(state.v_coeffs, 1e-8).max_constraint_violation);
  return relative;
}

CpwMode solve_cpw_mode(const CpwModeSet& prev, const CpwConfig& cfg,
                       const SopwBasis1D& basis) {
  CpwState state = init_cpw_state(prev, cfg, basis);
  CpwDiagnostics& diag = state.diagnostics;
  while (diag.iterations < cfg.max_iter) {
    if (cpw_iterate(state, prev, cfg, basis) <= cfg.tol) {
      diag.converged = true;
      break;
    }
  }

  diag.constraint_violation = is_shift_orthogonal(state.v_coeffs, 1e-8).max_constraint_violation;
  for (std::size_t m = 0; m < prev.size(); ++m) {
    const PerpendicularReport perp =
        check_shift_perpendicular(prev.modes().mode(m), state.v_coeffs, 1e-8);
    diag.perpendicular_violation = std::max(diag.perpendicular_violation, perp.max_shift_inner);
  }
  diag.support_fraction = support_fraction(state.v);
  diag.energy = cpw_energy(state.v, cfg.mu, basis.shifts());
  return {std::move(state.v_coeffs), std::move(state.v), std::move(diag)};
}

}  // namespace shiftorth
