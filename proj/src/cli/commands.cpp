#include "shiftorth/cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "shiftorth/certificate.hpp"
#include "shiftorth/cli/coeff_file.hpp"
#include "shiftorth/cli/svg_plot.hpp"
#include "shiftorth/cpw.hpp"

namespace shiftorth::cli {

namespace {

using nlohmann::json;

constexpr double kRealTolerance = 1e-12;
constexpr double kBandWarning = 1e-6;

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InfeasibleError& e) {
    err << "error: infeasible: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const DomainMismatch& e) {
    err << "error: domain mismatch: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const IndexError& e) {
    err << "error: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

/// JSON has no infinity; infinite values become the string "inf".
json number_or_inf(double x) {
  if (std::isinf(x)) return x > 0 ? json("inf") : json("-inf");
  return json(x);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

RealVector grid_points(std::size_t grid, double period) {
  RealVector x(grid);
  for (std::size_t m = 0; m < grid; ++m) {
    x[m] = period * static_cast<double>(m) / static_cast<double>(grid);
  }
  return x;
}

double parse_mu(const std::string& text) {
  std::string lower = text;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "inf" || lower == "infinity") return INFINITY;
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ParseError("--mu expects a positive number or 'inf', got '" + text + "'", 0, 0);
  }
  if (used != text.size()) {
    throw ParseError("--mu expects a positive number or 'inf', got '" + text + "'", 0, 0);
  }
  return value;
}

/// Accepts "3", "1..6" and comma-separated mixtures of both.
std::vector<int> parse_depth_list(const std::vector<std::string>& tokens) {
  std::vector<int> out;
  for (const std::string& token : tokens) {
    const std::size_t dots = token.find("..");
    try {
      if (dots == std::string::npos) {
        out.push_back(std::stoi(token));
      } else {
        const int lo = std::stoi(token.substr(0, dots));
        const int hi = std::stoi(token.substr(dots + 2));
        if (hi < lo) throw ParseError("empty depth range '" + token + "'", 0, 0);
        for (int k = lo; k <= hi; ++k) out.push_back(k);
      }
    } catch (const std::logic_error&) {
      throw ParseError("bad depth list entry '" + token + "'", 0, 0);
    }
  }
  return out;
}

}  // namespace

int cmd_project(const ProjectOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const CoeffFile input = read_coeff_file(opts.input);
    const LatticeDomain& domain = input.tensor.domain();
    if (opts.modes.size() >= domain.depth_count()) {
      throw InfeasibleError(std::to_string(opts.modes.size()) +
                            " modes leave no room: at most prod(N) - 1 = " +
                            std::to_string(domain.depth_count() - 1) + " are allowed");
    }

    bool real = input.kind == ValueKind::Real;
    ShiftOrthogonalModes modes(domain);
    for (const std::filesystem::path& path : opts.modes) {
      CoeffFile mode = read_coeff_file(path);
      if (!(mode.tensor.domain() == domain)) {
        throw DomainMismatch("mode file " + path.string() + " does not share the input domain");
      }
      real = real && mode.kind == ValueKind::Real;
      modes.add(std::move(mode.tensor), true);
    }

    const ProjectionConfig cfg{opts.eps, opts.fallback};
    const CoeffTensor p = modes.empty() ? project_sso(input.tensor, cfg)
                                        : project_sso_orth(input.tensor, modes, cfg, true);
    const double imag = p.max_abs_imag();
    const ValueKind kind = real && imag <= kRealTolerance ? ValueKind::Real : ValueKind::Complex;
    write_coeff_file(opts.output, p, kind);

    const SsoReport report = is_shift_orthogonal(p, 1e-10);
    double max_perp = 0.0;
    for (std::size_t m = 0; m < modes.size(); ++m) {
      max_perp = std::max(max_perp,
                          check_shift_perpendicular(modes.mode(m), p, 1e-10).max_shift_inner);
    }
    const auto [lo, hi] = std::minmax_element(report.per_frequency_norms.begin(),
                                              report.per_frequency_norms.end());
    json line;
    line["command"] = "project";
    line["input"] = opts.input.string();
    line["output"] = opts.output.string();
    line["M"] = domain.size();
    line["modes"] = modes.size();
    line["max_constraint_violation"] = report.max_constraint_violation;
    line["max_norm_deviation"] = report.max_norm_deviation;
    line["min_frequency_norm"] = *lo;
    line["max_frequency_norm"] = *hi;
    line["is_member"] = report.is_member;
    line["max_shift_inner_with_modes"] = max_perp;
    line["max_abs_imag"] = imag;
    line["kind"] = kind == ValueKind::Real ? "real" : "complex";
    line["config"] = {{"eps", cfg.effective_eps(domain)},
                      {"fallback", opts.fallback == FallbackVector::UniformReal ? "uniform"
                                                                                 : "first"}};
    out << line.dump() << "\n";
    return static_cast<int>(kExitOk);
  });
}

int cmd_sopw(const SopwOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const SopwBasis1D basis(opts.shifts, opts.depths);
    json line;
    line["command"] = "sopw";
    line["L"] = basis.shifts();
    line["N"] = basis.depths();

    if (opts.table) {
      write_text(*opts.table, format_sopw_table(basis));
      line["table"] = opts.table->string();
    }
    if (opts.plot) {
      std::vector<int> depths = opts.plot_depths;
      if (depths.empty()) {
        for (int k = 1; k <= basis.depths(); ++k) depths.push_back(k);
      }
      const int shift = opts.shift.value_or(basis.shifts() / 2);
      if (shift < 0 || shift >= basis.shifts()) {
        throw PreconditionError("--shift must lie in [0, L)");
      }
      const std::size_t grid = opts.grid.value_or(std::max<std::size_t>(
          1024, basis.default_grid_size()));
      const RealVector x = grid_points(grid, basis.shifts());
      std::vector<Panel> panels;
      for (int k : depths) {
        if (k < 1 || k > basis.depths()) {
          throw PreconditionError("plot depth " + std::to_string(k) + " is outside 1..N");
        }
        CoeffTensor unit(basis.domain());
        unit[static_cast<std::size_t>(k - 1) * basis.shifts() + shift] = 1.0;
        const std::string name = "θ^" + std::to_string(k) + "_" + std::to_string(shift);
        panels.push_back({name, {{name, x, synthesize_grid_real(unit, grid, basis)}}});
      }
      SvgLayout layout;
      layout.title = "SOPW basis functions, L = " + std::to_string(basis.shifts());
      write_svg(*opts.plot, panels, layout);
      line["plot"] = opts.plot->string();
      line["panels"] = depths;
      line["shift"] = shift;
      line["grid"] = grid;
    }
    out << line.dump() << "\n";
    return static_cast<int>(kExitOk);
  });
}

int cmd_cpw(const CpwOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    using Clock = std::chrono::steady_clock;
    const SopwBasis1D basis(opts.shifts, opts.depths);
    CpwConfig cfg;
    cfg.mu = opts.mu;
    cfg.lambda = opts.lambda;
    cfg.r = opts.r;
    cfg.tol = opts.tol;
    cfg.max_iter = opts.max_iter;
    cfg.grid_size = opts.grid;
    if (opts.seed) {
      cfg.init = CpwInit::RandomSeeded;
      cfg.seed = *opts.seed;
    }
    cfg.validate(basis);
    if (opts.modes < 1 || opts.modes > basis.depths()) {
      throw PreconditionError("--modes must lie in 1..N = " + std::to_string(basis.depths()));
    }
    const std::size_t grid = cfg.effective_grid(basis);
    std::filesystem::create_directories(opts.outdir);
    std::ofstream status(opts.outdir / "status.jsonl", std::ios::binary);
    if (!status) throw Error("cannot write status.jsonl in " + opts.outdir.string());
    auto emit = [&](const json& line) {
      out << line.dump() << "\n";
      status << line.dump() << "\n";
    };

    json config = {{"L", basis.shifts()},
                   {"N", basis.depths()},
                   {"mu", number_or_inf(cfg.mu)},
                   {"lambda", cfg.effective_lambda(basis)},
                   {"r", cfg.effective_r(basis)},
                   {"grid", grid},
                   {"tol", cfg.tol},
                   {"max_iter", cfg.max_iter},
                   {"modes", opts.modes},
                   {"init", cfg.init == CpwInit::GaussianBump ? "gaussian" : "random"},
                   {"seed", cfg.seed}};

    const RealVector x = grid_points(grid, basis.shifts());
    CpwModeSet set(basis);
    std::vector<CpwMode> modes;
    std::vector<double> seconds;
    std::string timing = "points,mode,iterations,seconds\n";
    bool all_converged = true;
    for (int m = 1; m <= opts.modes; ++m) {
      const auto start = Clock::now();
      CpwMode mode = solve_cpw_mode(set, cfg, basis);
      seconds.push_back(std::chrono::duration<double>(Clock::now() - start).count());
      set.add(mode);
      const CpwDiagnostics& d = mode.diagnostics;
      all_converged = all_converged && d.converged;

      const std::string stem = "mode_" + std::to_string(m);
      std::string samples = "x,psi\n";
      for (std::size_t i = 0; i < grid; ++i) {
        samples += format_double(x[i]) + "," + format_double(mode.samples[i]) + "\n";
      }
      write_text(opts.outdir / (stem + ".csv"), samples);
      const ValueKind kind =
          mode.coeffs.max_abs_imag() <= kRealTolerance ? ValueKind::Real : ValueKind::Complex;
      write_coeff_file(opts.outdir / (stem + ".coeff.csv"), mode.coeffs, kind);
      timing += std::to_string(grid) + "," + std::to_string(m) + "," +
                std::to_string(d.iterations) + "," + format_double(seconds.back()) + "\n";

      emit({{"mode", m},
            {"converged", d.converged},
            {"iterations", d.iterations},
            {"energy", d.energy},
            {"support_fraction", d.support_fraction},
            {"constraint_violation", d.constraint_violation},
            {"perpendicular_violation", d.perpendicular_violation},
            {"max_band_residual", d.max_band_residual},
            {"final_change", d.change_history.empty() ? 0.0 : d.change_history.back()},
            {"seconds", seconds.back()}});
      if (d.max_band_residual > kBandWarning) {
        emit({{"warning", "out-of-band residual in the v-update exceeds 1e-6"},
              {"mode", m},
              {"max_band_residual", d.max_band_residual}});
      }
      if (!d.converged) {
        err << "warning: mode " << m << " did not converge in " << d.iterations
            << " iterations\n";
      }
      modes.push_back(std::move(mode));
    }

    // Entry (a, b): shift-orthogonality violation on the diagonal, largest
    // shift inner product off it.
    json pairwise = json::array();
    double worst = 0.0;
    for (std::size_t a = 0; a < modes.size(); ++a) {
      json row = json::array();
      for (std::size_t b = 0; b < modes.size(); ++b) {
        const double v =
            a == b ? is_shift_orthogonal(modes[a].coeffs, 1e-7).max_constraint_violation
                   : check_shift_perpendicular(modes[a].coeffs, modes[b].coeffs, 1e-7)
                         .max_shift_inner;
        worst = std::max(worst, v);
        row.push_back(v);
      }
      pairwise.push_back(std::move(row));
    }

    double total_seconds = 0.0;
    int total_iterations = 0;
    for (std::size_t m = 0; m < modes.size(); ++m) {
      total_seconds += seconds[m];
      total_iterations += modes[m].diagnostics.iterations;
    }
    timing += std::to_string(grid) + ",total," + std::to_string(total_iterations) + "," +
              format_double(total_seconds) + "\n";
    write_text(opts.outdir / "timing.csv", timing);

    std::vector<Panel> panels;
    for (std::size_t m = 0; m < modes.size(); ++m) {
      const std::string name = "ψ^" + std::to_string(m + 1);
      panels.push_back({name, {{name, x, modes[m].samples}}});
    }
    SvgLayout layout;
    layout.title = "Compressed plane waves, L = " + std::to_string(basis.shifts()) +
                   ", mu = " + (std::isinf(cfg.mu) ? std::string("inf") : format_double(cfg.mu));
    write_svg(opts.outdir / "modes.svg", panels, layout);

    json summary = {{"summary", true},
                    {"config", config},
                    {"modes", modes.size()},
                    {"all_converged", all_converged},
                    {"max_pairwise_violation", worst},
                    {"pairwise", pairwise},
                    {"total_iterations", total_iterations},
                    {"total_seconds", total_seconds}};
    if (std::isinf(cfg.mu)) {
      const double reference = sopw_kinetic_energy(1, basis);
      summary["reference_energy"] = reference;
      summary["energy_relative_error"] =
          std::abs(modes.front().diagnostics.energy - reference) / reference;
    }
    emit(summary);
    return static_cast<int>(all_converged ? kExitOk : kExitNotConverged);
  });
}

int cmd_certify(const CertifyOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opts.shifts.empty()) throw PreconditionError("no L values to certify");
    bool all = true;
    for (int shifts : opts.shifts) {
      const SopwBasis1D basis(shifts, 1);
      const CertificateReport r = verify_variational_certificate(basis, opts.tail_periods);
      all = all && r.passed();
      out << json{{"command", "certify"},
                  {"L", shifts},
                  {"tail_periods", r.tail_periods},
                  {"passed", r.passed()},
                  {"solve_ok", r.solve_ok},
                  {"primal_residual", r.primal_residual},
                  {"condition_number", r.condition_number},
                  {"min_slack", r.min_slack},
                  {"complementarity", r.complementarity},
                  {"leading_slack", r.leading_slack},
                  {"primal_objective", r.primal_objective},
                  {"dual_objective", r.dual_objective},
                  {"primal_feasible", r.primal_feasible},
                  {"dual_feasible", r.dual_feasible},
                  {"complementary", r.complementary},
                  {"leading_zero", r.leading_zero}}
                 .dump()
          << "\n";
    }
    return static_cast<int>(all ? kExitOk : kExitPrecondition);
  });
}

int cmd_bench(const BenchOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const BenchReport report = run_bench(opts.config, &err);
    for (const std::string& w : report.warnings) err << "warning: " << w << "\n";
    const std::string text = bench_report_json(report);
    if (opts.out) {
      write_text(*opts.out, text + "\n");
    } else {
      out << text << "\n";
    }
    json line = {{"command", "bench"}, {"ratio_ok", report.ratio_ok()}};
    for (const BenchSection& s : report.sections) {
      line[s.name] = {{"fitted_c", s.fitted_c},
                      {"max_ratio", s.max_ratio},
                      {"rms_residual", s.rms_residual}};
    }
    if (opts.out) out << line.dump() << "\n";
    if (!report.ratio_ok()) {
      err << "warning: a doubling ratio exceeded " << opts.config.ratio_bound << "\n";
    }
    return static_cast<int>(kExitOk);
  });
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Shift-orthogonal projection, SOPW bases and compressed plane waves"};
  app.name("shiftorth");
  app.require_subcommand(1);

  ProjectOptions project;
  std::string fallback = "uniform";
  auto* sub_project = app.add_subcommand("project", "Project a coefficient file onto SSO");
  sub_project->add_option("input", project.input, "Input coefficient file")->required();
  sub_project->add_option("output", project.output, "Output coefficient file")->required();
  sub_project->add_option("--eps", project.eps, "Zero-norm threshold for frequency columns");
  sub_project->add_option("--fallback", fallback, "Fallback unit vector")
      ->check(CLI::IsMember({"uniform", "first"}));
  sub_project->add_option("--modes", project.modes, "Coefficient files of earlier modes");

  SopwOptions sopw;
  std::vector<std::string> depth_tokens;
  auto* sub_sopw = app.add_subcommand("sopw", "Tabulate or plot SOPW basis functions");
  sub_sopw->add_option("--L", sopw.shifts, "Number of shifts (even)");
  sub_sopw->add_option("--N", sopw.depths, "Depth cap");
  sub_sopw->add_option("--table", sopw.table, "Write the Fourier coefficient table here");
  sub_sopw->add_option("--plot", sopw.plot, "Write an SVG plot here");
  sub_sopw->add_option("--depths", depth_tokens, "Depths to plot, e.g. 1..6 or 1,3")
      ->delimiter(',');
  sub_sopw->add_option("--shift", sopw.shift, "Shift index to plot (default L/2)");
  sub_sopw->add_option("--grid", sopw.grid, "Samples per period for the plot");

  CpwOptions cpw;
  std::string mu_text = "0.03";
  std::optional<std::uint64_t> seed;
  auto* sub_cpw = app.add_subcommand("cpw", "Compute compressed plane waves");
  sub_cpw->add_option("--L", cpw.shifts, "Number of shifts (even)");
  sub_cpw->add_option("--N", cpw.depths, "SOPW depth cap");
  sub_cpw->add_option("--mu", mu_text, "L1 weight, or inf");
  sub_cpw->add_option("--lambda", cpw.lambda, "Penalty on the sparse split");
  sub_cpw->add_option("--r", cpw.r, "Penalty on the constrained split");
  sub_cpw->add_option("--modes", cpw.modes, "Number of modes");
  sub_cpw->add_option("--grid", cpw.grid, "Grid points per period");
  sub_cpw->add_option("--tol", cpw.tol, "Relative-change tolerance");
  sub_cpw->add_option("--max-iter", cpw.max_iter, "Iteration cap per mode");
  sub_cpw->add_option("--seed", seed, "Random initial field with this seed");
  sub_cpw->add_option("--outdir", cpw.outdir, "Output directory");

  CertifyOptions certify;
  auto* sub_certify = app.add_subcommand("certify", "Check the primal-dual certificate");
  sub_certify->add_option("--L", certify.shifts, "Even L values")->delimiter(',');
  sub_certify->add_option("--tail", certify.tail_periods, "Frequency periods checked");

  BenchOptions bench;
  auto* sub_bench = app.add_subcommand("bench", "Time project_sso over doublings of M");
  sub_bench->add_option("--min-exp", bench.config.min_exp, "Smallest log2 M");
  sub_bench->add_option("--max-exp", bench.config.max_exp, "Largest log2 M");
  sub_bench->add_option("--repeats", bench.config.repeats, "Timed repeats per size");
  sub_bench->add_option("--out", bench.out, "Write the JSON report here");
  sub_bench->add_option("--seed", bench.config.seed, "Seed of the random inputs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? static_cast<int>(kExitOk) : static_cast<int>(kExitUsage);
  }

  if (*sub_project) {
    project.fallback =
        fallback == "first" ? FallbackVector::FirstCanonical : FallbackVector::UniformReal;
    return cmd_project(project, out, err);
  }
  if (*sub_sopw) {
    try {
      sopw.plot_depths = parse_depth_list(depth_tokens);
    } catch (const ParseError& e) {
      err << "error: " << e.what() << "\n";
      return kExitUsage;
    }
    return cmd_sopw(sopw, out, err);
  }
  if (*sub_cpw) {
    try {
      cpw.mu = parse_mu(mu_text);
    } catch (const ParseError& e) {
      err << "error: " << e.what() << "\n";
      return kExitUsage;
    }
    cpw.seed = seed;
    return cmd_cpw(cpw, out, err);
  }
  if (*sub_certify) return cmd_certify(certify, out, err);
  return cmd_bench(bench, out, err);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.push_back("shiftorth");
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace shiftorth::cli
