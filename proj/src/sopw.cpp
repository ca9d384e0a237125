#include "shiftorth/sopw.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fft_plan.hpp"
#include "shiftorth/btransform.hpp"

namespace shiftorth {

namespace {

using std::numbers::pi;

constexpr double kSingularSine = 1e-8;

int floor_mod(long long a, int m) {
  const long long r = a % m;
  return static_cast<int>(r < 0 ? r + m : r);
}

/// (sgn(n) i)^(k-1); n = 0 only occurs at depth 1.
Complex shell_phase(int k, int n) {
  static constexpr Complex kPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const int p = (k - 1) % 4;
  return n >= 0 ? kPowers[p] : kPowers[(4 - p) % 4];
}

/// Coefficient of theta^k_0 on exp(i 2pi n x / L) / sqrt(L); zero off-shell.
Complex shell_coeff(int k, int n, int L) {
  const int m = std::abs(n);
  const int hi = k * L / 2;
  const int lo = (k - 1) * L / 2;
  if (m > hi || m < lo) return 0.0;
  const bool edge = m == hi || (k >= 2 && m == lo);
  const double weight = edge ? 1.0 / std::sqrt(2.0 * L) : 1.0 / std::sqrt(double(L));
  return weight * shell_phase(k, n);
}

/// Depths whose shell contains frequency n: one or two consecutive values.
std::pair<int, int> depths_touching(int n, int L) {
  const int m = std::abs(n);
  const int half = L / 2;
  if (m == 0) return {1, 1};
  if (m % half == 0) return {m / half, m / half + 1};
  return {m / half + 1, m / half + 1};
}

/// omega_j^(-n) = exp(-i 2pi j n / L), with the phase reduced exactly.
Complex root_power(int j, int n, int L) {
  const int r = floor_mod(static_cast<long long>(j) * n, L);
  return std::polar(1.0, -2.0 * pi * r / L);
}

void require_basis_match(const LatticeDomain& domain, const SopwBasis1D& basis) {
  if (domain.dim() != 1 || domain.shifts()[0] != basis.shifts() ||
      domain.depths()[0] != basis.depths()) {
    throw DomainMismatch("coefficient tensor does not match the SOPW basis");
  }
}

void require_grid(std::size_t grid_size, const SopwBasis1D& basis) {
  if (grid_size < basis.min_grid_size()) {
    throw PreconditionError("grid of " + std::to_string(grid_size) +
                            " points aliases frequencies up to " +
                            std::to_string(basis.max_frequency()) + "; need at least " +
                            std::to_string(basis.min_grid_size()));
  }
}

}  // namespace

SopwBasis1D::SopwBasis1D(int shifts, int depths) : shifts_(shifts), depths_(depths) {
  if (shifts < 2 || shifts % 2 != 0) {
    throw PreconditionError("SOPW bases require an even number of shifts L >= 2, got " +
                            std::to_string(shifts));
  }
  if (depths < 1) throw PreconditionError("SOPW depth cap must be >= 1");
}

FourierRep::FourierRep(int shifts, int depths)
    : shifts_(shifts),
      depths_(depths),
      coeffs_(static_cast<std::size_t>(shifts) * depths + 1) {}

FourierRep::FourierRep(int shifts, int depths, ComplexVector coeffs)
    : shifts_(shifts), depths_(depths), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != static_cast<std::size_t>(shifts) * depths + 1) {
    throw DomainMismatch("Fourier coefficient array has the wrong length");
  }
}

std::size_t FourierRep::index(int n) const {
  const int nmax = max_frequency();
  if (n < -nmax || n > nmax) {
    throw IndexError("frequency " + std::to_string(n) + " outside |n| <= " +
                     std::to_string(nmax));
  }
  return static_cast<std::size_t>(n + nmax);
}

double FourierRep::norm() const {
  double sum = 0.0;
  for (const Complex& z : coeffs_) sum += std::norm(z);
  return std::sqrt(sum);
}

std::vector<FourierMode> sopw_fourier_coeffs(int k, int j, const SopwBasis1D& basis) {
  const int L = basis.shifts();
  if (k < 1 || k > basis.depths() + 1) throw IndexError("depth index out of range");
  if (j < 0 || j >= L) throw IndexError("shift index out of range");
  std::vector<FourierMode> modes;
  const int hi = k * L / 2;
  for (int n = -hi; n <= hi; ++n) {
    const Complex c = shell_coeff(k, n, L);
    if (c != 0.0) modes.push_back({n, c * root_power(j, n, L)});
  }
  return modes;
}

FourierRep sopw_to_fourier(const CoeffTensor& t, const SopwBasis1D& basis) {
  require_basis_match(t.domain(), basis);
  const int L = basis.shifts();
  const int N = basis.depths();

  // spectrum(k, r) = sum_j exp(-i 2pi j r / L) t(k, j)
  CoeffTensor spectrum = b_inverse(t);
  spectrum *= static_cast<double>(L);

  FourierRep f(L, N);
  const int nmax = basis.max_frequency();
  for (int n = -nmax; n <= nmax; ++n) {
    const auto [k0, k1] = depths_touching(n, L);
    const int r = floor_mod(n, L);
    Complex sum = 0.0;
    for (int k = k0; k <= std::min(k1, N); ++k) {
      sum += shell_coeff(k, n, L) * spectrum[static_cast<std::size_t>(k - 1) * L + r];
    }
    f(n) = sum;
  }
  return f;
}

SopwAnalysis fourier_to_sopw(const FourierRep& f, const SopwBasis1D& basis) {
  if (f.shifts() != basis.shifts() || f.depths() != basis.depths()) {
    throw DomainMismatch("Fourier representation does not match the SOPW basis");
  }
  const int L = basis.shifts();
  const int N = basis.depths();

  // Fold conj(c_k(n)) a(n) into residues n mod L, then one positive DFT per
  // depth gives <theta^k_j, f>.
  CoeffTensor folded(basis.domain());
  const int nmax = basis.max_frequency();
  for (int n = -nmax; n <= nmax; ++n) {
    const auto [k0, k1] = depths_touching(n, L);
    const int r = floor_mod(n, L);
    for (int k = k0; k <= std::min(k1, N); ++k) {
      folded[static_cast<std::size_t>(k - 1) * L + r] +=
          std::conj(shell_coeff(k, n, L)) * f(n);
    }
  }
  b_transform_inplace(folded);

  const FourierRep back = sopw_to_fourier(folded, basis);
  double residual = 0.0;
  for (int n = -nmax; n <= nmax; ++n) residual += std::norm(f(n) - back(n));
  residual = std::sqrt(residual);
  const double total = f.norm();
  return {std::move(folded), residual, total > 0.0 ? residual / total : 0.0};
}

double eval_closed_form(int k, int j, double x, const SopwBasis1D& basis) {
  const int L = basis.shifts();
  if (k < 1) throw IndexError("depth index must be >= 1");
  if (j < 0 || j >= L) throw IndexError("shift index out of range");

  // Reduce x - j into [-L/2, L/2); sin(pi u / L) vanishes only at u = 0.
  double u = std::fmod(x - j, double(L));
  if (u < -0.5 * L) u += L;
  if (u >= 0.5 * L) u -= L;
  const double s = std::sin(pi * u / L);

  if (k == 1) {
    const double ratio =
        std::abs(s) < kSingularSine ? double(L - 1) : std::sin((L - 1) * pi * u / L) / s;
    return ratio / L + std::sqrt(2.0) / L * std::cos(pi * u);
  }

  const double ratio = std::abs(s) < kSingularSine ? double(L / 2 - 1)
                                                   : std::sin((L / 2 - 1) * pi * u / L) / s;
  const double envelope = ratio + std::sqrt(2.0) * std::cos(pi * u / 2.0);
  const double carrier_phase = 2.0 * pi * (k * L / 2.0 - L / 4.0) * u / L;
  if (k % 2 == 0) {
    const double sign = (k / 2) % 2 == 0 ? 1.0 : -1.0;
    return 2.0 / L * sign * std::sin(carrier_phase) * envelope;
  }
  const double sign = ((k - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
  return 2.0 / L * sign * std::cos(carrier_phase) * envelope;
}

ComplexVector fourier_to_grid(const FourierRep& f, std::size_t grid_size) {
  const int nmax = f.max_frequency();
  if (grid_size < static_cast<std::size_t>(2 * nmax + 1)) {
    throw PreconditionError("grid too small for the Fourier band");
  }
  const double scale = 1.0 / std::sqrt(double(f.shifts()));
  ComplexVector samples(grid_size);
  const auto G = static_cast<long long>(grid_size);
  for (int n = -nmax; n <= nmax; ++n) {
    samples[static_cast<std::size_t>(((n % G) + G) % G)] = f(n) * scale;
  }
  detail::dft(samples, detail::DftSign::Positive);
  return samples;
}

GridSpectrum grid_to_fourier(std::span<const Complex> samples, const SopwBasis1D& basis) {
  require_grid(samples.size(), basis);
  ComplexVector spectrum(samples.begin(), samples.end());
  detail::dft(spectrum, detail::DftSign::Negative);

  const auto G = static_cast<long long>(samples.size());
  const double scale = std::sqrt(double(basis.shifts())) / static_cast<double>(G);
  GridSpectrum out{FourierRep(basis.shifts(), basis.depths()), 0.0};
  const int nmax = basis.max_frequency();
  std::vector<bool> in_band(static_cast<std::size_t>(G), false);
  for (int n = -nmax; n <= nmax; ++n) {
    const auto b = static_cast<std::size_t>(((n % G) + G) % G);
    out.fourier(n) = spectrum[b] * scale;
    in_band[b] = true;
  }
  double outside = 0.0;
  for (long long b = 0; b < G; ++b) {
    if (!in_band[static_cast<std::size_t>(b)]) {
      outside += std::norm(spectrum[static_cast<std::size_t>(b)] * scale);
    }
  }
  out.out_of_band = std::sqrt(outside);
  return out;
}

ComplexVector synthesize_grid(const CoeffTensor& t, std::size_t grid_size,
                              const SopwBasis1D& basis) {
  require_grid(grid_size, basis);
  return fourier_to_grid(sopw_to_fourier(t, basis), grid_size);
}

RealVector synthesize_grid_real(const CoeffTensor& t, std::size_t grid_size,
                                const SopwBasis1D& basis) {
  const ComplexVector samples = synthesize_grid(t, grid_size, basis);
  RealVector out(samples.size());
  for (std::size_t m = 0; m < samples.size(); ++m) out[m] = samples[m].real();
  return out;
}

SopwAnalysis analyze_grid(std::span<const Complex> samples, const SopwBasis1D& basis) {
  GridSpectrum spectrum = grid_to_fourier(samples, basis);
  SopwAnalysis analysis = fourier_to_sopw(spectrum.fourier, basis);
  const double in_band = spectrum.fourier.norm();
  const double total = std::hypot(in_band, spectrum.out_of_band);
  analysis.residual = std::hypot(analysis.residual, spectrum.out_of_band);
  analysis.relative_residual = total > 0.0 ? analysis.residual / total : 0.0;
  return analysis;
}

SopwAnalysis analyze_grid(std::span<const double> samples, const SopwBasis1D& basis) {
  const ComplexVector complex_samples(samples.begin(), samples.end());
  return analyze_grid(std::span<const Complex>(complex_samples), basis);
}

DerivativeStencil first_derivative_stencil(int k, int l, const SopwBasis1D& basis) {
  const int L = basis.shifts();
  if (k < 1) throw IndexError("depth index must be >= 1");
  if (l < 0 || l >= L) throw IndexError("shift index out of range");
  DerivativeStencil st{k, l, RealVector(L), RealVector(L), RealVector(L)};
  const double pre = pi / L;
  for (int j = 0; j < L; ++j) {
    const int d = floor_mod(j - l, L);
    const bool odd = d % 2 == 1;
    const double prev_sign = ((k - 1) % 2 == 1 && odd) ? -1.0 : 1.0;
    const double next_sign = (k % 2 == 1 && odd) ? -1.0 : 1.0;
    double a = 0.0;
    if (d != 0) {
      const double cot = 1.0 / std::tan(pi * d / L);
      a = odd ? (k % 2 == 0 ? 1.0 : -1.0) * (2 * k - 1) * cot : cot;
    }
    st.coeffs_prev[j] = -pre * (k - 1) * prev_sign;
    st.coeffs_same[j] = pre * a;
    st.coeffs_next[j] = pre * k * next_sign;
  }
  return st;
}

DerivativeStencil second_derivative_stencil(int k, int l, const SopwBasis1D& basis) {
  const int L = basis.shifts();
  if (k < 1) throw IndexError("depth index must be >= 1");
  if (l < 0 || l >= L) throw IndexError("shift index out of range");
  DerivativeStencil st{k, l, RealVector(L, 0.0), RealVector(L), RealVector(L, 0.0)};
  const double pre = -(pi * pi) / (double(L) * L);
  for (int j = 0; j < L; ++j) {
    const int d = floor_mod(j - l, L);
    double b;
    if (d == 0) {
      b = (double(k) * k - k + 1.0 / 3.0) * L * L + 2.0 / 3.0;
    } else {
      const double s = std::sin(pi * d / L);
      const double csc2 = 1.0 / (s * s);
      b = d % 2 == 1 ? (k % 2 == 0 ? 1.0 : -1.0) * (4.0 * k - 2.0) * csc2 : 2.0 * csc2;
    }
    st.coeffs_same[j] = pre * b;
  }
  return st;
}

ShellSums lemma_sums(int k, int j, const SopwBasis1D& basis) {
  const int L = basis.shifts();
  if (k < 1) throw IndexError("depth index must be >= 1");
  if (j < 0 || j >= L) throw IndexError("shift index out of range");
  const double Ld = L;
  if (j == 0) {
    const double kd = k;
    return {0.0, (Ld - 2.0) * Ld * ((3.0 * kd * kd - 3.0 * kd + 1.0) * Ld - 1.0) / 12.0};
  }
  const double cot = 1.0 / std::tan(pi * j / L);
  const double s = std::sin(pi * j / L);
  const double csc2 = 1.0 / (s * s);
  const Complex minus_half_i(0.0, -0.5);
  if (j % 2 == 1) {
    const double w = (k % 2 == 0 ? 1.0 : -1.0) * (2.0 * k - 1.0);
    return {minus_half_i * Ld * w * cot, Ld / 2.0 * w * csc2 - w * Ld * Ld / 4.0};
  }
  const double kd = k;
  return {minus_half_i * Ld * cot,
          Ld / 2.0 * csc2 - (kd * kd + (kd - 1.0) * (kd - 1.0)) * Ld * Ld / 4.0};
}

}  // namespace shiftorth
