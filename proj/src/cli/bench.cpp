#include "shiftorth/cli/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <random>
#include <thread>

#include <json.hpp>

#include "shiftorth/projection.hpp"

namespace shiftorth::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

CoeffTensor random_tensor(const LatticeDomain& domain, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  ComplexVector data(domain.size());
  for (Complex& z : data) z = Complex(normal(rng), normal(rng));
  return CoeffTensor(domain, std::move(data));
}

// Keeps the optimizer from discarding the projection.
volatile double g_sink = 0.0;

struct Case {
  CoeffTensor input;
  int loops = 1;
  std::vector<double> samples;
};

Case prepare_case(int shifts, int depths, const BenchConfig& cfg, std::mt19937_64& rng) {
  Case c{random_tensor(LatticeDomain::line(shifts, depths), rng), 1, {}};
  // Warm-up (plan creation happens here), then one timed call to size the
  // inner loop; neither is part of the samples.
  g_sink = g_sink + project_sso(c.input)[0].real();
  const auto start = Clock::now();
  g_sink = g_sink + project_sso(c.input)[0].real();
  const double warm = std::max(seconds_since(start), 1e-9);
  c.loops = std::max(1, static_cast<int>(std::ceil(cfg.min_sample_seconds / warm)));
  return c;
}

void take_sample(Case& c) {
  const auto start = Clock::now();
  for (int i = 0; i < c.loops; ++i) g_sink = g_sink + project_sso(c.input)[0].real();
  c.samples.push_back(seconds_since(start) / c.loops);
}

BenchRow to_row(const Case& c) {
  const LatticeDomain& domain = c.input.domain();
  BenchRow row;
  row.size = domain.size();
  row.shifts = domain.shifts()[0];
  row.depths = domain.depths()[0];
  row.inner_loops = c.loops;
  row.median_seconds = median(c.samples);
  return row;
}

void finish_section(BenchSection& section, double bound) {
  std::vector<double> x, t;
  for (const BenchRow& row : section.rows) {
    x.push_back(static_cast<double>(row.size) * std::log(static_cast<double>(row.shifts)));
    t.push_back(row.median_seconds);
  }
  const ScalingFit fit = fit_scaling(x, t);
  section.fitted_c = fit.c;
  section.rms_residual = fit.rms;
  section.ratio_ok = true;
  for (std::size_t i = 0; i < section.rows.size(); ++i) {
    BenchRow& row = section.rows[i];
    row.model_seconds = fit.c * x[i];
    row.residual = fit.residuals[i];
    if (i > 0) {
      row.ratio = row.median_seconds / section.rows[i - 1].median_seconds;
      section.max_ratio = std::max(section.max_ratio, row.ratio);
      if (row.ratio > bound) section.ratio_ok = false;
    }
  }
}

}  // namespace

void BenchConfig::validate() const {
  if (repeats < 1) throw PreconditionError("repeats must be >= 1");
  if (fixed_depths < 1) throw PreconditionError("fixed depth count must be >= 1");
  if (fixed_shifts < 2) throw PreconditionError("fixed shift count must be >= 2");
  if (min_exp > max_exp) throw PreconditionError("min-exp must not exceed max-exp");
  if (max_exp > 26) throw PreconditionError("max-exp above 26 exceeds the bench memory budget");
  const auto smallest = std::size_t{1} << std::max(0, min_exp);
  if (min_exp < 1 || smallest < 2 * static_cast<std::size_t>(fixed_depths) ||
      smallest < static_cast<std::size_t>(fixed_shifts)) {
    throw PreconditionError("2^min-exp must be at least 2 N and L of the fixed axes");
  }
  if ((static_cast<unsigned>(fixed_depths) & static_cast<unsigned>(fixed_depths - 1)) != 0 ||
      (static_cast<unsigned>(fixed_shifts) & static_cast<unsigned>(fixed_shifts - 1)) != 0) {
    throw PreconditionError("fixed axes must be powers of two");
  }
}

bool BenchReport::ratio_ok() const {
  return std::all_of(sections.begin(), sections.end(),
                     [](const BenchSection& s) { return s.ratio_ok; });
}

double median(std::vector<double> values) {
  if (values.empty()) throw PreconditionError("median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

ScalingFit fit_scaling(const std::vector<double>& x, const std::vector<double>& t) {
  if (x.size() != t.size() || x.empty()) {
    throw PreconditionError("fit needs matching, nonempty samples");
  }
  double xt = 0.0, xx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    xt += x[i] * t[i];
    xx += x[i] * x[i];
  }
  ScalingFit fit;
  fit.c = xx > 0.0 ? xt / xx : 0.0;
  double sq = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double model = fit.c * x[i];
    const double r = model != 0.0 ? (t[i] - model) / model : 0.0;
    fit.residuals.push_back(r);
    sq += r * r;
  }
  fit.rms = std::sqrt(sq / static_cast<double>(x.size()));
  return fit;
}

BenchReport run_bench(const BenchConfig& cfg, std::ostream* progress) {
  cfg.validate();
  BenchReport report;
  report.config = cfg;
  report.hardware_threads = std::thread::hardware_concurrency();
  if (cfg.repeats < 5) {
    report.warnings.push_back("repeats = " + std::to_string(cfg.repeats) +
                              " < 5: medians are noisy and the ratio check is unreliable");
  }

  std::mt19937_64 rng(cfg.seed);
  std::vector<Case> by_shift_cases, by_depth_cases;
  for (int e = cfg.min_exp; e <= cfg.max_exp; ++e) {
    const std::size_t m = std::size_t{1} << e;
    by_shift_cases.push_back(
        prepare_case(static_cast<int>(m / cfg.fixed_depths), cfg.fixed_depths, cfg, rng));
    by_depth_cases.push_back(
        prepare_case(cfg.fixed_shifts, static_cast<int>(m / cfg.fixed_shifts), cfg, rng));
  }
  // Rounds visit every size once, so a slow spell on a shared machine is
  // spread over all sizes instead of biasing one of them.
  for (int rep = 0; rep < cfg.repeats; ++rep) {
    for (std::size_t k = 0; k < by_shift_cases.size(); ++k) {
      take_sample(by_shift_cases[k]);
      take_sample(by_depth_cases[k]);
    }
  }

  BenchSection by_shift{"L-scaling", {}, 0.0, 0.0, 0.0, false};
  BenchSection by_depth{"N-scaling", {}, 0.0, 0.0, 0.0, false};
  for (std::size_t k = 0; k < by_shift_cases.size(); ++k) {
    by_shift.rows.push_back(to_row(by_shift_cases[k]));
    by_depth.rows.push_back(to_row(by_depth_cases[k]));
    if (progress) {
      *progress << "M = " << by_shift.rows.back().size << ": L-scaling "
                << by_shift.rows.back().median_seconds << " s, N-scaling "
                << by_depth.rows.back().median_seconds << " s\n";
    }
  }
  finish_section(by_shift, cfg.ratio_bound);
  finish_section(by_depth, cfg.ratio_bound);
  report.sections = {std::move(by_shift), std::move(by_depth)};
  return report;
}

std::string bench_report_json(const BenchReport& report) {
  using nlohmann::json;
  json root;
  root["operation"] = "project_sso";
  root["threads"] = report.threads;
  root["hardware_threads"] = report.hardware_threads;
  root["repeats"] = report.config.repeats;
  root["warmup_runs"] = 1;
  root["min_exp"] = report.config.min_exp;
  root["max_exp"] = report.config.max_exp;
  root["ratio_bound"] = report.config.ratio_bound;
  root["ratio_ok"] = report.ratio_ok();
  root["warnings"] = report.warnings;
  root["sections"] = json::array();
  for (const BenchSection& s : report.sections) {
    json section;
    section["name"] = s.name;
    section["fitted_c"] = s.fitted_c;
    section["model"] = "t = c * M * log(prod L)";
    section["rms_residual"] = s.rms_residual;
    section["max_ratio"] = s.max_ratio;
    section["ratio_ok"] = s.ratio_ok;
    section["rows"] = json::array();
    for (const BenchRow& r : s.rows) {
      json row;
      row["M"] = r.size;
      row["L"] = r.shifts;
      row["N"] = r.depths;
      row["inner_loops"] = r.inner_loops;
      row["median_seconds"] = r.median_seconds;
      row["model_seconds"] = r.model_seconds;
      row["residual"] = r.residual;
      if (r.ratio > 0.0) row["ratio"] = r.ratio;
      section["rows"].push_back(std::move(row));
    }
    root["sections"].push_back(std::move(section));
  }
  return root.dump(2);
}

}  // namespace shiftorth::cli
