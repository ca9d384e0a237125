#pragma once

// Scaling study of project_sso over doublings of M = prod(N) prod(L).
//
// Two sections are timed: L-scaling (N fixed, L doubles) and N-scaling
// (L fixed, N doubles). Each size gets one discarded warm-up run, then
// `repeats` timed samples on a monotonic clock, taken in rounds over all
// sizes; a sample loops the projection enough times to last at least
// `min_sample_seconds` and reports the per-call time. The section fits t = c M log(prod L) by
// least squares through the origin and checks t(2M) / t(M) against
// `ratio_bound` on the medians.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace shiftorth::cli {

struct BenchConfig {
  int min_exp = 14;
  int max_exp = 20;
  int repeats = 5;
  /// N used while L doubles.
  int fixed_depths = 4;
  /// L used while N doubles.
  int fixed_shifts = 64;
  double min_sample_seconds = 0.02;
  double ratio_bound = 2.6;
  std::uint64_t seed = 1;

  /// Throws PreconditionError on an unusable range.
  void validate() const;
};

struct BenchRow {
  std::size_t size = 0;  // M
  int shifts = 0;
  int depths = 0;
  int inner_loops = 1;
  double median_seconds = 0.0;
  /// c M log(prod L) from the section fit.
  double model_seconds = 0.0;
  /// (median - model) / model
  double residual = 0.0;
  /// median(2M) / median(M); zero on the first row.
  double ratio = 0.0;
};

struct BenchSection {
  std::string name;
  std::vector<BenchRow> rows;
  double fitted_c = 0.0;
  double rms_residual = 0.0;
  double max_ratio = 0.0;
  bool ratio_ok = false;
};

struct BenchReport {
  BenchConfig config;
  std::vector<BenchSection> sections;
  /// Threads used by the projection (the FFT backend runs single-threaded).
  int threads = 1;
  unsigned hardware_threads = 0;
  std::vector<std::string> warnings;

  bool ratio_ok() const;
};

double median(std::vector<double> values);

struct ScalingFit {
  double c = 0.0;
  std::vector<double> residuals;
  double rms = 0.0;
};

/// Least-squares c for t = c x with relative residuals (t - c x) / (c x).
ScalingFit fit_scaling(const std::vector<double>& x, const std::vector<double>& t);

/// `progress`, if given, receives one line per timed size.
BenchReport run_bench(const BenchConfig& cfg, std::ostream* progress = nullptr);

std::string bench_report_json(const BenchReport& report);

}  // namespace shiftorth::cli
