#include "shiftorth/projection.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fft_plan.hpp"
#include "shiftorth/btransform.hpp"

namespace shiftorth {

namespace {

constexpr double kModeTolerance = 1e-8;
constexpr double kGramSchmidtAccept = 1e-8;
// Direct shift correlation costs prod(L) * M; above this, use the
// frequency-domain route.
constexpr std::size_t kDirectCorrelationBudget = std::size_t{1} << 22;
constexpr std::size_t kBlockBytes = std::size_t{256} << 10;
constexpr std::size_t kOutOfPlaceRowBytes = std::size_t{1} << 20;

double fallback_entry(FallbackVector policy, std::size_t depth_flat,
                      std::size_t depth_count) {
  switch (policy) {
    case FallbackVector::UniformReal:
      return 1.0 / std::sqrt(static_cast<double>(depth_count));
    case FallbackVector::FirstCanonical:
      return depth_flat == 0 ? 1.0 : 0.0;
  }
  return 0.0;
}

RealVector column_norms_squared(const CoeffTensor& p) {
  const LatticeDomain& domain = p.domain();
  RealVector norms(domain.shift_count(), 0.0);
  for (std::size_t i = 0; i < domain.depth_count(); ++i) {
    auto slice = p.depth_slice(i);
    for (std::size_t j = 0; j < slice.size(); ++j) norms[j] += std::norm(slice[j]);
  }
  return norms;
}

/// Column inner products <a(: ; j), p(: ; j)> for every frequency j.
ComplexVector column_inner(const CoeffTensor& a, const CoeffTensor& p) {
  const LatticeDomain& domain = p.domain();
  ComplexVector out(domain.shift_count(), Complex{});
  for (std::size_t i = 0; i < domain.depth_count(); ++i) {
    auto sa = a.depth_slice(i);
    auto sp = p.depth_slice(i);
    for (std::size_t j = 0; j < sp.size(); ++j) out[j] += std::conj(sa[j]) * sp[j];
  }
  return out;
}

/// Scales every column of `p` by `extra` / its norm. Columns with norm
/// <= eps are reported through `degenerate` and only scaled by `extra`.
void normalize_columns(CoeffTensor& p, double eps, std::vector<bool>& degenerate,
                       double extra = 1.0) {
  const LatticeDomain& domain = p.domain();
  RealVector scale = column_norms_squared(p);
  degenerate.assign(scale.size(), false);
  for (std::size_t j = 0; j < scale.size(); ++j) {
    const double norm = std::sqrt(scale[j]);
    if (norm > eps) {
      scale[j] = extra / norm;
    } else {
      degenerate[j] = true;
      scale[j] = extra;
    }
  }
  for (std::size_t i = 0; i < domain.depth_count(); ++i) {
    auto slice = p.depth_slice(i);
    for (std::size_t j = 0; j < slice.size(); ++j) slice[j] *= scale[j];
  }
}

/// Θ in place, with every output column multiplied by `extra`.
void theta_normalize_inplace(CoeffTensor& q, const ProjectionConfig& cfg, double extra) {
  const LatticeDomain& domain = q.domain();
  std::vector<bool> degenerate;
  normalize_columns(q, cfg.effective_eps(domain), degenerate, extra);
  if (std::find(degenerate.begin(), degenerate.end(), true) == degenerate.end()) return;
  for (std::size_t i = 0; i < domain.depth_count(); ++i) {
    const double e = extra * fallback_entry(cfg.fallback, i, domain.depth_count());
    auto slice = q.depth_slice(i);
    for (std::size_t j = 0; j < slice.size(); ++j) {
      if (degenerate[j]) slice[j] = e;
    }
  }
}

/// c(t) = <g, S(t) f> through the cross spectrum of the B-transforms.
ComplexVector correlation_from_transforms(const CoeffTensor& bg, const CoeffTensor& bf) {
  const LatticeDomain& domain = bg.domain();
  ComplexVector c = column_inner(bg, bf);
  detail::batched_dft(c, domain.shifts(), 1, detail::DftSign::Positive);
  const double inv = 1.0 / static_cast<double>(domain.shift_count());
  for (Complex& z : c) z *= inv;
  return c;
}

ComplexVector correlation(const CoeffTensor& g, const CoeffTensor& f,
                          const CoeffTensor& bg, const CoeffTensor& bf) {
  const LatticeDomain& domain = g.domain();
  if (domain.shift_count() <= kDirectCorrelationBudget / domain.size()) {
    return shift_correlation(g, f);
  }
  return correlation_from_transforms(bg, bf);
}

void require_same_domain(const LatticeDomain& a, const LatticeDomain& b) {
  if (!(a == b)) throw DomainMismatch("tensors live on different lattice domains");
}

}  // namespace

double ProjectionConfig::effective_eps(const LatticeDomain& domain) const {
  if (zero_norm_eps) {
    if (!(*zero_norm_eps >= 0.0)) {
      throw PreconditionError("zero_norm_eps must be nonnegative");
    }
    return *zero_norm_eps;
  }
  return 1e-14 * std::sqrt(static_cast<double>(domain.depth_count()));
}

CoeffTensor theta_normalize(const CoeffTensor& p, const ProjectionConfig& cfg) {
  CoeffTensor q = p;
  theta_normalize_inplace(q, cfg, 1.0);
  return q;
}

CoeffTensor project_sso(const CoeffTensor& b, const ProjectionConfig& cfg) {
  const LatticeDomain& domain = b.domain();
  const std::size_t row = domain.shift_count();
  const std::size_t depths = domain.depth_count();
  const double eps = cfg.effective_eps(domain);
  // Depth rows are processed in blocks that stay cache resident between the
  // FFT and the pass that follows it.
  const std::size_t block = std::max<std::size_t>(1, kBlockBytes / (row * sizeof(Complex)));
  // Rows transform straight from the input unless a single row is too long
  // to stay cache resident, where FFTW's in-place plans are faster.
  const bool out_of_place = row * sizeof(Complex) <= kOutOfPlaceRowBytes;
  CoeffTensor p = out_of_place ? CoeffTensor(domain) : b;
  std::span<Complex> data = p.data();

  RealVector scale(row, 0.0);
  for (std::size_t i0 = 0; i0 < depths; i0 += block) {
    const std::size_t rows = std::min(block, depths - i0);
    std::span<Complex> chunk = data.subspan(i0 * row, rows * row);
    if (out_of_place) {
      detail::batched_dft(b.data().subspan(i0 * row, rows * row), chunk, domain.shifts(), rows,
                          detail::DftSign::Positive);
    } else {
      detail::batched_dft(chunk, domain.shifts(), rows, detail::DftSign::Positive);
    }
    for (std::size_t r = 0; r < rows; ++r) {
      const Complex* slice = chunk.data() + r * row;
      for (std::size_t j = 0; j < row; ++j) scale[j] += std::norm(slice[j]);
    }
  }

  // The 1 / prod(L) of the inverse transform rides along with the column
  // scaling.
  const double extra = 1.0 / static_cast<double>(row);
  std::vector<bool> degenerate(row, false);
  bool any_degenerate = false;
  for (std::size_t j = 0; j < row; ++j) {
    const double norm = std::sqrt(scale[j]);
    if (norm > eps) {
      scale[j] = extra / norm;
    } else {
      degenerate[j] = any_degenerate = true;
      scale[j] = extra;
    }
  }

  for (std::size_t i0 = 0; i0 < depths; i0 += block) {
    const std::size_t rows = std::min(block, depths - i0);
    std::span<Complex> chunk = data.subspan(i0 * row, rows * row);
    for (std::size_t r = 0; r < rows; ++r) {
      Complex* slice = chunk.data() + r * row;
      for (std::size_t j = 0; j < row; ++j) slice[j] *= scale[j];
      if (any_degenerate) {
        const double e = extra * fallback_entry(cfg.fallback, i0 + r, depths);
        for (std::size_t j = 0; j < row; ++j) {
          if (degenerate[j]) slice[j] = e;
        }
      }
    }
    detail::batched_dft(chunk, domain.shifts(), rows, detail::DftSign::Negative);
  }
  return p;
}

ShiftOrthogonalModes::ShiftOrthogonalModes(LatticeDomain domain)
    : domain_(std::move(domain)) {}

void ShiftOrthogonalModes::add(CoeffTensor mode, bool validate) {
  require_same_domain(domain_, mode.domain());
  CoeffTensor transform = b_transform(mode);
  if (validate) {
    const RealVector norms = column_norms_squared(transform);
    for (double n2 : norms) {
      if (std::abs(std::sqrt(n2) - 1.0) > kModeTolerance) {
        throw PreconditionError("mode is not shift-orthogonal");
      }
    }
    for (const CoeffTensor& other : transforms_) {
      for (const Complex& z : column_inner(other, transform)) {
        if (std::abs(z) > kModeTolerance) {
          throw PreconditionError("mode is not shift-perpendicular to an existing mode");
        }
      }
    }
  }
  modes_.push_back(std::move(mode));
  transforms_.push_back(std::move(transform));
}

double ShiftOrthogonalModes::orthonormality_defect() const {
  double defect = 0.0;
  for (std::size_t m = 0; m < transforms_.size(); ++m) {
    for (std::size_t k = m; k < transforms_.size(); ++k) {
      const double target = m == k ? 1.0 : 0.0;
      for (const Complex& z : column_inner(transforms_[m], transforms_[k])) {
        defect = std::max(defect, std::abs(z - target));
      }
    }
  }
  return defect;
}

CoeffTensor project_sso_orth(const CoeffTensor& b, const ShiftOrthogonalModes& modes,
                             const ProjectionConfig& cfg, bool validate) {
  const LatticeDomain& domain = b.domain();
  require_same_domain(domain, modes.domain());
  if (modes.size() >= domain.depth_count()) {
    throw InfeasibleError("cannot be shift-perpendicular to " +
                          std::to_string(modes.size()) + " modes with only " +
                          std::to_string(domain.depth_count()) + " depth indices");
  }
  if (validate && modes.orthonormality_defect() > kModeTolerance) {
    throw PreconditionError("modes are not orthonormal per frequency");
  }

  CoeffTensor p = b;
  b_transform_inplace(p);

  // z_j = p_j - sum_m <A_m(:;j), p_j> A_m(:;j)
  for (std::size_t m = 0; m < modes.size(); ++m) {
    const CoeffTensor& a = modes.transform(m);
    const ComplexVector coeff = column_inner(a, p);
    for (std::size_t i = 0; i < domain.depth_count(); ++i) {
      auto sa = a.depth_slice(i);
      auto sp = p.depth_slice(i);
      for (std::size_t j = 0; j < sp.size(); ++j) sp[j] -= coeff[j] * sa[j];
    }
  }

  std::vector<bool> degenerate;
  normalize_columns(p, cfg.effective_eps(domain), degenerate);

  const std::size_t depth_count = domain.depth_count();
  const std::size_t shift_count = domain.shift_count();
  ComplexVector column(depth_count);
  ComplexVector mode_column(depth_count);
  for (std::size_t j = 0; j < shift_count; ++j) {
    if (!degenerate[j]) continue;
    // Orthogonalize the configured fallback vector, then the canonical
    // vectors in index order, against the mode columns; keep the first
    // residual with a usable norm.
    bool found = false;
    for (std::size_t candidate = 0; candidate <= depth_count && !found; ++candidate) {
      for (std::size_t i = 0; i < depth_count; ++i) {
        column[i] = candidate == 0
                        ? Complex(fallback_entry(cfg.fallback, i, depth_count))
                        : Complex(i + 1 == candidate ? 1.0 : 0.0);
      }
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t m = 0; m < modes.size(); ++m) {
          const CoeffTensor& a = modes.transform(m);
          Complex c{};
          for (std::size_t i = 0; i < depth_count; ++i) {
            mode_column[i] = a[i * shift_count + j];
            c += std::conj(mode_column[i]) * column[i];
          }
          for (std::size_t i = 0; i < depth_count; ++i) column[i] -= c * mode_column[i];
        }
      }
      double norm = 0.0;
      for (const Complex& z : column) norm += std::norm(z);
      norm = std::sqrt(norm);
      if (norm > kGramSchmidtAccept) {
        for (std::size_t i = 0; i < depth_count; ++i) {
          p[i * shift_count + j] = column[i] / norm;
        }
        found = true;
      }
    }
    if (!found) {
      throw InfeasibleError("no unit vector is orthogonal to the mode columns");
    }
  }

  b_inverse_inplace(p);
  return p;
}

SsoReport is_shift_orthogonal(const CoeffTensor& v, double tol) {
  const LatticeDomain& domain = v.domain();
  const CoeffTensor bv = b_transform(v);
  const RealVector norms2 = column_norms_squared(bv);

  SsoReport report;
  report.per_frequency_norms.resize(norms2.size());
  double max_sq_deviation = 0.0;
  for (std::size_t j = 0; j < norms2.size(); ++j) {
    const double norm = std::sqrt(norms2[j]);
    report.per_frequency_norms[j] = norm;
    report.max_norm_deviation = std::max(report.max_norm_deviation, std::abs(norm - 1.0));
    max_sq_deviation = std::max(max_sq_deviation, std::abs(norms2[j] - 1.0));
  }

  const ComplexVector c = correlation(v, v, bv, bv);
  for (std::size_t t = 0; t < c.size(); ++t) {
    const double target = t == 0 ? 1.0 : 0.0;
    report.max_constraint_violation =
        std::max(report.max_constraint_violation, std::abs(c[t] - target));
  }
  report.is_member = report.max_constraint_violation <= tol;

  // The shift Gram violation and the squared frequency-norm deviation bound
  // each other: viol <= dev and dev <= prod(L) * viol.
  const double count = static_cast<double>(domain.shift_count());
  const double slack = 1e-9 * count * std::max(1.0, v.norm() * v.norm());
  if (report.max_constraint_violation > max_sq_deviation + slack ||
      max_sq_deviation > count * report.max_constraint_violation + slack) {
    throw std::logic_error("shift Gram and frequency-norm criteria disagree");
  }
  return report;
}

PerpendicularReport check_shift_perpendicular(const CoeffTensor& g, const CoeffTensor& f,
                                              double tol) {
  require_same_domain(g.domain(), f.domain());
  const CoeffTensor bg = b_transform(g);
  const CoeffTensor bf = b_transform(f);

  PerpendicularReport report;
  for (const Complex& z : column_inner(bg, bf)) {
    report.max_frequency_inner = std::max(report.max_frequency_inner, std::abs(z));
  }
  for (const Complex& z : correlation(g, f, bg, bf)) {
    report.max_shift_inner = std::max(report.max_shift_inner, std::abs(z));
  }
  report.is_perpendicular = report.max_shift_inner <= tol;

  const double count = static_cast<double>(g.domain().shift_count());
  const double slack = 1e-9 * count * std::max(1.0, g.norm() * f.norm());
  if (report.max_shift_inner > report.max_frequency_inner + slack ||
      report.max_frequency_inner > count * report.max_shift_inner + slack) {
    throw std::logic_error("shift and frequency perpendicularity criteria disagree");
  }
  return report;
}

}  // namespace shiftorth
