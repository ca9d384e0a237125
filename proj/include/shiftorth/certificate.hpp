#pragma once

// Primal-dual optimality certificate for the depth-1 SOPW as the minimizer
// of the kinetic energy under shift orthogonality (no L1 term).
//
// With c(0) = |a(0)|^2 and c(n) = 2|a(n)|^2, the problem is the linear
// program  min lambda^T c  s.t.  A c = e_0, c >= 0,  where
// lambda_n = 2 (pi n / L)^2 and column n of A is cos(2pi j n / L), j < L.
// The SOPW guess c = [1/L, 2/L x (L/2 - 1), 1/L, 0, ...] is certified by a
// dual vector y with slack s = lambda - A^T y >= 0 and s^T c = 0.

#include "shiftorth/sopw.hpp"

namespace shiftorth {

struct CertificateReport {
  int shifts = 0;
  int tail_periods = 0;
  /// Entries n = 0 .. K L of the primal guess, eigenvalues and dual slack.
  RealVector primal;
  RealVector eigenvalues;
  RealVector slack;
  /// Dual vector y over the L shift constraints.
  RealVector dual;

  double primal_residual = 0.0;     // max_j |(A c - e_0)_j|
  double condition_number = 0.0;    // of the (L/2+1)-square dual system
  double min_slack = 0.0;           // min_n s_n
  double complementarity = 0.0;     // |s^T c|
  double leading_slack = 0.0;       // max_{n <= L/2} |s_n|
  double primal_objective = 0.0;    // lambda^T c
  double dual_objective = 0.0;      // y^T e_0

  bool solve_ok = false;
  bool primal_feasible = false;
  bool dual_feasible = false;
  bool complementary = false;
  bool leading_zero = false;

  bool passed() const {
    return solve_ok && primal_feasible && dual_feasible && complementary && leading_zero;
  }
};

/// Builds and checks the certificate on the first K L + 1 entries. Throws
/// PreconditionError for K < 2.
CertificateReport verify_variational_certificate(const SopwBasis1D& basis,
                                                 int tail_periods = 10);

}  // namespace shiftorth
