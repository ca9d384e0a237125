#pragma once

// Command implementations behind the shiftorth executable. Each command
// writes its artifacts, prints JSON status lines to `out` and diagnostics
// to `err`, and returns a process exit code.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "shiftorth/cli/bench.hpp"
#include "shiftorth/projection.hpp"

namespace shiftorth::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitPrecondition = 2,
  kExitNotConverged = 3,
};

struct ProjectOptions {
  std::filesystem::path input;
  std::filesystem::path output;
  std::optional<double> eps;
  FallbackVector fallback = FallbackVector::UniformReal;
  std::vector<std::filesystem::path> modes;
};

struct SopwOptions {
  int shifts = 8;
  int depths = 6;
  std::optional<std::filesystem::path> table;
  std::optional<std::filesystem::path> plot;
  /// Empty means 1..N.
  std::vector<int> plot_depths;
  /// Unset means L / 2.
  std::optional<int> shift;
  /// Unset means the basis default 2 N L.
  std::optional<std::size_t> grid;
};

struct CpwOptions {
  int shifts = 8;
  int depths = 8;
  double mu = 0.03;
  std::optional<double> lambda;
  std::optional<double> r;
  int modes = 4;
  std::optional<std::size_t> grid;
  double tol = 1e-6;
  int max_iter = 20000;
  /// Set means a seeded random initial field instead of the Gaussian bump.
  std::optional<std::uint64_t> seed;
  std::filesystem::path outdir = "cpw_out";
};

struct CertifyOptions {
  std::vector<int> shifts = {4, 8, 16};
  int tail_periods = 10;
};

struct BenchOptions {
  BenchConfig config;
  std::optional<std::filesystem::path> out;
};

int cmd_project(const ProjectOptions& opts, std::ostream& out, std::ostream& err);
int cmd_sopw(const SopwOptions& opts, std::ostream& out, std::ostream& err);
int cmd_cpw(const CpwOptions& opts, std::ostream& out, std::ostream& err);
int cmd_certify(const CertifyOptions& opts, std::ostream& out, std::ostream& err);
int cmd_bench(const BenchOptions& opts, std::ostream& out, std::ostream& err);

/// Parses argv (argv[0] is the program name) and dispatches. Library
/// errors map to exit codes: parse and I/O problems 1, precondition,
/// domain and feasibility problems 2.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace shiftorth::cli
