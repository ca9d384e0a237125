#pragma once

// Fast L2 projection of coefficient tensors onto the set SSO of
// shift-orthogonal vectors, optionally intersected with the orthogonal
// complement of the shift span of previously found modes.
//
// Under the B-transform, membership in SSO means every frequency column
// B(v)(: ; j) has unit norm, and shift-perpendicularity of two vectors means
// their frequency columns are pairwise orthogonal. The projection therefore
// reduces to prod(L) independent unit-sphere projections of the columns of
// B(b), costing O(M log prod(L)) overall.

#include <cstddef>
#include <optional>
#include <vector>

#include "shiftorth/lattice.hpp"

namespace shiftorth {

/// Unit vector used for a frequency column whose norm is (numerically) zero.
enum class FallbackVector {
  UniformReal,     // every depth entry 1/sqrt(prod N)
  FirstCanonical,  // (1, 0, ..., 0)
};

struct ProjectionConfig {
  /// Columns with norm <= eps take the fallback branch. Unset means
  /// 1e-14 * sqrt(prod N).
  std::optional<double> zero_norm_eps;
  FallbackVector fallback = FallbackVector::UniformReal;

  double effective_eps(const LatticeDomain& domain) const;
};

struct SsoReport {
  /// max over s of |<v, S(s) v> - delta_{s0}|
  double max_constraint_violation = 0.0;
  /// max over j of | ||B(v)(: ; j)|| - 1 |
  double max_norm_deviation = 0.0;
  bool is_member = false;
  RealVector per_frequency_norms;
};

struct PerpendicularReport {
  /// max over j of |<B(g)(: ; j), B(f)(: ; j)>|
  double max_frequency_inner = 0.0;
  /// max over s of |<g, S(s) f>|
  double max_shift_inner = 0.0;
  bool is_perpendicular = false;
};

/// Per-frequency column normalization with a fixed real fallback.
CoeffTensor theta_normalize(const CoeffTensor& p, const ProjectionConfig& cfg = {});

/// b_inverse(theta_normalize(b_transform(b))): a nearest member of SSO.
CoeffTensor project_sso(const CoeffTensor& b, const ProjectionConfig& cfg = {});

/// Mutually shift-perpendicular SSO members together with their cached
/// B-transforms.
class ShiftOrthogonalModes {
 public:
  explicit ShiftOrthogonalModes(LatticeDomain domain);

  /// Appends a mode. With `validate`, checks that the mode is in SSO and
  /// shift-perpendicular to the existing modes to 1e-8 and throws
  /// PreconditionError otherwise.
  void add(CoeffTensor mode, bool validate = true);

  const LatticeDomain& domain() const { return domain_; }
  std::size_t size() const { return modes_.size(); }
  bool empty() const { return modes_.empty(); }
  const CoeffTensor& mode(std::size_t m) const { return modes_[m]; }
  const CoeffTensor& transform(std::size_t m) const { return transforms_[m]; }

  /// Largest deviation of the per-frequency mode columns from an
  /// orthonormal set.
  double orthonormality_defect() const;

 private:
  LatticeDomain domain_;
  std::vector<CoeffTensor> modes_;
  std::vector<CoeffTensor> transforms_;
};

/// Nearest member of SSO that is shift-perpendicular to every mode.
/// Throws InfeasibleError when modes.size() >= prod(N) and, with
/// `validate`, PreconditionError when the modes are not orthonormal per
/// frequency to 1e-8.
CoeffTensor project_sso_orth(const CoeffTensor& b, const ShiftOrthogonalModes& modes,
                             const ProjectionConfig& cfg = {}, bool validate = false);

SsoReport is_shift_orthogonal(const CoeffTensor& v, double tol);

PerpendicularReport check_shift_perpendicular(const CoeffTensor& g, const CoeffTensor& f,
                                              double tol);

}  // namespace shiftorth
