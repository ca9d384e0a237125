#include "shiftorth/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

namespace shiftorth {

namespace {

constexpr double kPrimalTol = 1e-12;
constexpr double kDualTol = 1e-10;

}  // namespace

CertificateReport verify_variational_certificate(const SopwBasis1D& basis,
                                                 int tail_periods) {
  using std::numbers::pi;
  if (tail_periods < 2) throw PreconditionError("certificate tail needs K >= 2 periods");

  const int L = basis.shifts();
  const int half = L / 2;
  const int count = tail_periods * L + 1;

  CertificateReport report;
  report.shifts = L;
  report.tail_periods = tail_periods;
  report.primal.assign(count, 0.0);
  report.eigenvalues.resize(count);
  for (int n = 0; n < count; ++n) {
    report.eigenvalues[n] = 2.0 * (pi * n / L) * (pi * n / L);
  }
  report.primal[0] = 1.0 / L;
  for (int n = 1; n < half; ++n) report.primal[n] = 2.0 / L;
  report.primal[half] = 1.0 / L;

  auto cosine = [L](int j, int n) {
    // cos(2pi j n / L) with the phase reduced modulo L
    const long long r = (static_cast<long long>(j) * n) % L;
    return std::cos(2.0 * pi * static_cast<double>(r) / L);
  };

  for (int j = 0; j < L; ++j) {
    double row = 0.0;
    for (int n = 0; n < count; ++n) row += report.primal[n] * cosine(j, n);
    report.primal_residual =
        std::max(report.primal_residual, std::abs(row - (j == 0 ? 1.0 : 0.0)));
  }
  report.primal_feasible = report.primal_residual <= kPrimalTol;

  // A^T y = lambda on columns 0..L/2 has L unknowns but only L/2+1
  // equations. Columns n and L-n coincide, so restrict y to the symmetric
  // family y_j = y_{L-j}, which leaves a square system in y_0..y_{L/2}.
  Eigen::MatrixXd system(half + 1, half + 1);
  Eigen::VectorXd rhs(half + 1);
  for (int n = 0; n <= half; ++n) {
    rhs(n) = report.eigenvalues[n];
    for (int m = 0; m <= half; ++m) {
      const double mult = (m == 0 || m == half) ? 1.0 : 2.0;
      system(n, m) = mult * cosine(m, n);
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(system);
  const auto& sv = svd.singularValues();
  report.condition_number = sv(sv.size() - 1) > 0.0
                                ? sv(0) / sv(sv.size() - 1)
                                : std::numeric_limits<double>::infinity();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
  report.solve_ok = lu.isInvertible();
  if (!report.solve_ok) return report;
  const Eigen::VectorXd folded = lu.solve(rhs);

  report.dual.resize(L);
  for (int j = 0; j < L; ++j) report.dual[j] = folded(std::min(j, L - j));
  report.dual_objective = report.dual[0];

  report.slack.resize(count);
  report.min_slack = std::numeric_limits<double>::infinity();
  double complementarity = 0.0;
  for (int n = 0; n < count; ++n) {
    double aty = 0.0;
    for (int j = 0; j < L; ++j) aty += report.dual[j] * cosine(j, n);
    const double s = report.eigenvalues[n] - aty;
    report.slack[n] = s;
    report.min_slack = std::min(report.min_slack, s);
    complementarity += s * report.primal[n];
    report.primal_objective += report.eigenvalues[n] * report.primal[n];
    if (n <= half) report.leading_slack = std::max(report.leading_slack, std::abs(s));
  }
  report.complementarity = std::abs(complementarity);
  report.dual_feasible = report.min_slack >= -kDualTol;
  report.complementary = report.complementarity <= kDualTol;
  report.leading_zero = report.leading_slack <= kDualTol;
  return report;
}

}  // namespace shiftorth
