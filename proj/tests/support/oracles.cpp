#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace shiftorth::testing {

namespace {

constexpr double pi = std::numbers::pi;

/// exp(sign * i 2pi sum_k j_k l_k / L_k), reducing each product modulo L_k
/// before the division so large indices keep full precision.
Complex lattice_phase(const std::vector<int>& j, const std::vector<int>& l,
                      const std::vector<int>& L, double sign) {
  double turns = 0.0;
  for (std::size_t k = 0; k < L.size(); ++k) {
    turns += static_cast<double>((static_cast<long long>(j[k]) * l[k]) % L[k]) / L[k];
  }
  return std::polar(1.0, sign * 2.0 * pi * turns);
}

CoeffTensor direct_dft(const CoeffTensor& v, double sign, double scale) {
  const LatticeDomain& domain = v.domain();
  const std::size_t shifts = domain.shift_count();
  CoeffTensor out(domain);
  for (std::size_t i = 0; i < domain.depth_count(); ++i) {
    for (std::size_t jf = 0; jf < shifts; ++jf) {
      const auto j = domain.unflatten_shift(jf);
      Complex sum = 0.0;
      for (std::size_t lf = 0; lf < shifts; ++lf) {
        sum += lattice_phase(j, domain.unflatten_shift(lf), domain.shifts(), sign) *
               v[i * shifts + lf];
      }
      out[i * shifts + jf] = scale * sum;
    }
  }
  return out;
}

}  // namespace

CoeffTensor direct_b_transform(const CoeffTensor& v) { return direct_dft(v, +1.0, 1.0); }

CoeffTensor direct_b_inverse(const CoeffTensor& p) {
  return direct_dft(p, -1.0, 1.0 / static_cast<double>(p.domain().shift_count()));
}

ComplexVector column(const CoeffTensor& t, std::size_t shift_flat) {
  const std::size_t shifts = t.domain().shift_count();
  ComplexVector col(t.domain().depth_count());
  for (std::size_t i = 0; i < col.size(); ++i) col[i] = t[i * shifts + shift_flat];
  return col;
}

std::vector<ComplexVector> direct_gram(const CoeffTensor& g, const CoeffTensor& f) {
  const LatticeDomain& domain = g.domain();
  const std::size_t shifts = domain.shift_count();
  const std::vector<int>& L = domain.shifts();
  auto back = [&](const std::vector<int>& j, const std::vector<int>& s) {
    std::vector<int> out(j.size());
    for (std::size_t k = 0; k < j.size(); ++k) out[k] = ((j[k] - s[k]) % L[k] + L[k]) % L[k];
    return domain.flatten_shift(out);
  };
  std::vector<ComplexVector> gram(shifts, ComplexVector(shifts));
  for (std::size_t sp = 0; sp < shifts; ++sp) {
    const auto s1 = domain.unflatten_shift(sp);
    for (std::size_t s = 0; s < shifts; ++s) {
      const auto s2 = domain.unflatten_shift(s);
      Complex sum = 0.0;
      for (std::size_t i = 0; i < domain.depth_count(); ++i) {
        for (std::size_t jf = 0; jf < shifts; ++jf) {
          const auto j = domain.unflatten_shift(jf);
          sum += std::conj(g[i * shifts + back(j, s1)]) * f[i * shifts + back(j, s2)];
        }
      }
      gram[sp][s] = sum;
    }
  }
  return gram;
}

ComplexVector sphere_projection_oracle(const ComplexVector& p, const ComplexVector& fallback) {
  double sq = 0.0;
  for (const Complex& z : p) sq += std::norm(z);
  if (sq == 0.0) return fallback;

  // Newton on t^2 = |p|^2 with t = 1 + m, from both sides.
  auto newton = [sq](double t) {
    for (int it = 0; it < 200; ++it) {
      const double next = t - (t * t - sq) / (2.0 * t);
      if (next == t) break;
      t = next;
    }
    return t;
  };
  const double start = std::max(1.0, sq);
  ComplexVector best;
  double best_objective = std::numeric_limits<double>::infinity();
  for (double t : {newton(start), newton(-start)}) {
    ComplexVector q(p.size());
    double objective = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      q[i] = p[i] / t;
      objective += std::norm(p[i] - q[i]);
    }
    if (objective < best_objective) {
      best_objective = objective;
      best = std::move(q);
    }
  }
  return best;
}

std::map<int, Complex> sopw_coeff_oracle(int k, int j, int L) {
  std::map<int, Complex> out;
  const int lo = (k - 1) * L / 2;
  const int hi = k * L / 2;
  for (int n = -hi; n <= hi; ++n) {
    const int a = std::abs(n);
    if (a < lo) continue;
    const bool edge = a == hi || (k > 1 && a == lo);
    const double weight = edge ? 1.0 / std::sqrt(2.0 * L) : 1.0 / std::sqrt(double(L));
    const Complex unit = n > 0 ? Complex(0, 1) : (n < 0 ? Complex(0, -1) : Complex(1, 0));
    Complex phase = 1.0;
    for (int e = 0; e < k - 1; ++e) phase *= unit;
    const long long turns = ((-static_cast<long long>(j) * n) % L + L) % L;
    out[n] = weight * phase * std::polar(1.0, 2.0 * pi * double(turns) / L);
  }
  return out;
}

double sopw_value_oracle(int k, int j, int L, double x) {
  Complex sum = 0.0;
  for (const auto& [n, c] : sopw_coeff_oracle(k, j, L)) {
    sum += c * std::polar(1.0, 2.0 * pi * n * x / L);
  }
  return sum.real() / std::sqrt(double(L));
}

Complex shell_power_sum(int k, int j, int L, int power) {
  Complex sum = 0.0;
  const int lo = (k - 1) * L / 2;
  const int hi = k * L / 2;
  for (int n = -hi + 1; n < hi; ++n) {
    if (std::abs(n) <= lo) continue;
    const long long turns = ((static_cast<long long>(j) * n) % L + L) % L;
    sum += std::pow(double(n), power) * std::polar(1.0, 2.0 * pi * double(turns) / L);
  }
  return sum;
}

RealVector spectral_derivative(const RealVector& samples, double period, int order) {
  const auto G = static_cast<long long>(samples.size());
  ComplexVector spectrum(samples.size());
  for (long long n = 0; n < G; ++n) {
    Complex sum = 0.0;
    for (long long m = 0; m < G; ++m) {
      sum += samples[m] * std::polar(1.0, -2.0 * pi * double((n * m) % G) / double(G));
    }
    spectrum[n] = sum / double(G);
  }
  RealVector out(samples.size());
  for (long long m = 0; m < G; ++m) {
    Complex sum = 0.0;
    for (long long n = 0; n < G; ++n) {
      const long long freq = n <= G / 2 ? n : n - G;
      if (2 * freq == G && order % 2 == 1) continue;
      const Complex factor = std::pow(Complex(0.0, 2.0 * pi * double(freq) / period), order);
      sum += factor * spectrum[n] * std::polar(1.0, 2.0 * pi * double((n * m) % G) / double(G));
    }
    out[m] = sum.real();
  }
  return out;
}

double scalar_prox_oracle(double w, double t) {
  auto h = [&](double z) { return 0.5 * (z - w) * (z - w) + t * std::abs(z); };
  double lo = -std::abs(w) - 1.0;
  double hi = std::abs(w) + 1.0;
  double best = 0.0;
  for (int round = 0; round < 8; ++round) {
    const int steps = 400;
    const double dz = (hi - lo) / steps;
    double best_value = std::numeric_limits<double>::infinity();
    for (int s = 0; s <= steps; ++s) {
      const double z = lo + s * dz;
      if (h(z) < best_value) {
        best_value = h(z);
        best = z;
      }
    }
    // The exact minimizer may sit on the kink at zero.
    if (lo < 0.0 && hi > 0.0 && h(0.0) <= best_value) best = 0.0;
    lo = best - 2.0 * dz;
    hi = best + 2.0 * dz;
  }
  return best;
}

double kinetic_energy_oracle(int k, int L) {
  double sum = 0.0;
  for (const auto& [n, c] : sopw_coeff_oracle(k, 0, L)) {
    sum += std::norm(c) * 2.0 * (pi * n / L) * (pi * n / L);
  }
  return sum;
}

}  // namespace shiftorth::testing
