#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include <json.hpp>

#include "shiftorth/cli/bench.hpp"
#include "shiftorth/cli/svg_plot.hpp"

namespace shiftorth::cli {
namespace {

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + 1)) {
    ++n;
  }
  return n;
}

Panel sine_panel(const std::string& title, int freq) {
  Series s{title, {}, {}};
  for (int i = 0; i < 50; ++i) {
    s.x.push_back(i / 50.0);
    s.y.push_back(std::sin(2 * M_PI * freq * i / 50.0));
  }
  return {title, {s}};
}

TEST(Svg, OnePolylinePerSeriesAndEscapedTitles) {
  std::vector<Panel> panels;
  for (int k = 1; k <= 6; ++k) panels.push_back(sine_panel("a<b & " + std::to_string(k), k));
  SvgLayout layout;
  layout.title = "demo";
  const std::string svg = render_svg(panels, layout);
  EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
  EXPECT_EQ(count(svg, "<polyline"), 6u);
  EXPECT_EQ(count(svg, "</svg>"), 1u);
  EXPECT_EQ(count(svg, "a&lt;b &amp; "), 12u);  // panel title and series title
  EXPECT_EQ(svg.find("nan"), std::string::npos);
  EXPECT_EQ(svg.find("inf"), std::string::npos);
}

TEST(Svg, RejectsBadInput) {
  EXPECT_THROW(render_svg({}, {}), PreconditionError);
  Panel mismatched{"m", {{"s", {0.0, 1.0}, {0.0}}}};
  EXPECT_THROW(render_svg({mismatched}, {}), PreconditionError);
  Panel non_finite{"n", {{"s", {0.0, 1.0}, {0.0, std::numeric_limits<double>::quiet_NaN()}}}};
  EXPECT_THROW(render_svg({non_finite}, {}), PreconditionError);
  SvgLayout zero_columns;
  zero_columns.columns = 0;
  EXPECT_THROW(render_svg({sine_panel("p", 1)}, zero_columns), PreconditionError);
}

TEST(Svg, ConstantSeriesStillRenders) {
  Panel flat{"flat", {{"s", {0.0, 1.0, 2.0}, {3.0, 3.0, 3.0}}}};
  const std::string svg = render_svg({flat}, {});
  EXPECT_EQ(count(svg, "<polyline"), 1u);
  EXPECT_EQ(svg.find("nan"), std::string::npos);
}

TEST(Bench, Median) {
  EXPECT_EQ(median({3.0}), 3.0);
  EXPECT_EQ(median({5.0, 1.0, 3.0}), 3.0);
  EXPECT_EQ(median({4.0, 1.0, 3.0, 2.0}), 2.5);
  EXPECT_THROW(median({}), PreconditionError);
}

TEST(Bench, FitScalingRecoversExactModel) {
  const std::vector<double> x{1.0, 2.0, 4.0, 8.0};
  std::vector<double> t;
  for (double v : x) t.push_back(3e-9 * v);
  const ScalingFit fit = fit_scaling(x, t);
  EXPECT_NEAR(fit.c, 3e-9, 1e-22);
  EXPECT_LE(fit.rms, 1e-12);
  for (double r : fit.residuals) EXPECT_LE(std::abs(r), 1e-12);

  // Least squares through the origin: c = sum x t / sum x^2.
  const ScalingFit skew = fit_scaling({1.0, 2.0}, {1.0, 1.0});
  EXPECT_DOUBLE_EQ(skew.c, 3.0 / 5.0);
  EXPECT_DOUBLE_EQ(skew.residuals[0], (1.0 - 0.6) / 0.6);
  EXPECT_THROW(fit_scaling({1.0}, {}), PreconditionError);
}

TEST(Bench, ConfigValidation) {
  EXPECT_NO_THROW(BenchConfig{}.validate());
  auto rejects = [](auto mutate) {
    BenchConfig c;
    mutate(c);
    EXPECT_THROW(c.validate(), PreconditionError);
  };
  rejects([](BenchConfig& c) { c.repeats = 0; });
  rejects([](BenchConfig& c) { c.min_exp = 12; c.max_exp = 11; });
  rejects([](BenchConfig& c) { c.max_exp = 27; });
  rejects([](BenchConfig& c) { c.min_exp = 5; });  // 2^5 < L = 64
  rejects([](BenchConfig& c) { c.fixed_depths = 3; });
  rejects([](BenchConfig& c) { c.fixed_shifts = 1; });
}

TEST(Bench, SmallRunHasTwoMonotoneSections) {
  BenchConfig cfg;
  cfg.min_exp = 8;
  cfg.max_exp = 10;
  cfg.repeats = 1;
  cfg.min_sample_seconds = 0.001;
  const BenchReport report = run_bench(cfg);
  ASSERT_EQ(report.warnings.size(), 1u);
  EXPECT_NE(report.warnings[0].find("repeats"), std::string::npos);
  ASSERT_EQ(report.sections.size(), 2u);
  EXPECT_EQ(report.sections[0].name, "L-scaling");
  EXPECT_EQ(report.sections[1].name, "N-scaling");
  for (const BenchSection& s : report.sections) {
    ASSERT_EQ(s.rows.size(), 3u);
    for (std::size_t i = 0; i < s.rows.size(); ++i) {
      EXPECT_EQ(s.rows[i].size, std::size_t{1} << (8 + i));
      EXPECT_EQ(s.rows[i].size, static_cast<std::size_t>(s.rows[i].shifts) * s.rows[i].depths);
      EXPECT_GT(s.rows[i].median_seconds, 0.0);
      EXPECT_GE(s.rows[i].inner_loops, 1);
    }
    EXPECT_GT(s.fitted_c, 0.0);
  }
  EXPECT_EQ(report.sections[0].rows[0].depths, 4);
  EXPECT_EQ(report.sections[1].rows[0].shifts, 64);

  const auto json = nlohmann::json::parse(bench_report_json(report));
  EXPECT_EQ(json["operation"], "project_sso");
  EXPECT_EQ(json["repeats"], 1);
  EXPECT_EQ(json["threads"], 1);
  EXPECT_EQ(json["sections"].size(), 2u);
  EXPECT_EQ(json["warnings"].size(), 1u);
  EXPECT_FALSE(json["sections"][0]["rows"][0].contains("ratio"));
  EXPECT_TRUE(json["sections"][0]["rows"][1].contains("ratio"));
}

TEST(Bench, FiveRepeatsRaiseNoWarning) {
  BenchConfig cfg;
  cfg.min_exp = 8;
  cfg.max_exp = 8;
  cfg.min_sample_seconds = 0.0;
  EXPECT_TRUE(run_bench(cfg).warnings.empty());
}

}  // namespace
}  // namespace shiftorth::cli
