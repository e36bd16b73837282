#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "su11/sweep.hpp"

using namespace su11;
using std::numbers::pi;

TEST_CASE("shortest round-trip formatting") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng);
    const std::string s = format_double(x);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(back == x);
  }
}

TEST_CASE("grid endpoints and degenerate grids") {
  const GridSpec g{-1.0, 1.0, 5};
  CHECK(g.value(0) == -1.0);
  CHECK(g.value(4) == 1.0);
  CHECK(g.value(2) == doctest::Approx(0.0));
  const GridSpec single{0.7, 0.9, 1};
  CHECK(single.value(0) == 0.7);
}

TEST_CASE("row ordering is row-major in declared axis order") {
  SweepSpec spec;
  spec.axes = {{"T", {0.1, 0.2, 2}}, {"phi", {0.0, 1.0, 3}}};
  REQUIRE(spec.row_count() == 6);
  CHECK(spec.point_at(0).T == 0.1);
  CHECK(spec.point_at(0).phi == 0.0);
  CHECK(spec.point_at(1).phi == 0.5);
  CHECK(spec.point_at(2).phi == 1.0);
  CHECK(spec.point_at(3).T == 0.2);
  CHECK(spec.point_at(3).phi == 0.0);
}

TEST_CASE("spec validation") {
  SweepSpec spec;
  spec.axes = {{"bogus", {0.0, 1.0, 2}}};
  CHECK_THROWS_AS(spec.validate(), invalid_config);
  spec.axes = {{"T", {0.0, 1.5, 2}}};
  CHECK_THROWS_AS(spec.validate(), invalid_config);
  spec.axes = {{"g", {0.0, 1.0, 0}}};
  CHECK_THROWS_AS(spec.validate(), invalid_config);
  spec.axes = {{"g", {0.0, 1.0, 2}}, {"g", {0.0, 1.0, 2}}};
  CHECK_THROWS_AS(spec.validate(), invalid_config);
}

TEST_CASE("sweep output is byte-identical across worker counts") {
  SweepSpec spec;
  spec.fixed = {1.1, 0.5, 1.0, 0.7, -pi / 8, 0.0};
  spec.axes = {{"theta", {-pi, pi, 7}}, {"phi", {-pi, pi, 7}}};
  spec.verify_fraction = 0.2;
  spec.jobs = 1;
  const auto one = run_sweep(spec);
  spec.jobs = 4;
  const auto four = run_sweep(spec);
  spec.jobs = 8;
  const auto eight = run_sweep(spec);
  CHECK(one.csv == four.csv);
  CHECK(one.csv == eight.csv);
  CHECK(one.manifest_json == four.manifest_json);
}

TEST_CASE("a 1x1 sweep equals the direct evaluation") {
  SweepSpec spec;
  spec.fixed = {1.2, 0.5, 1.0, 0.75, -pi / 8, 0.1};
  const auto out = run_sweep(spec);
  CHECK(out.rows == 1);
  const auto e = enhancement_factors(to_config(spec.fixed), spec.fixed.phi);
  CHECK(out.csv.find(format_double(e.dphi_sid_pr)) != std::string::npos);
  CHECK(out.csv.find(format_double(e.lambda)) != std::string::npos);
}

TEST_CASE("verify sampling flags residuals below tolerance on stable rows") {
  SweepSpec spec;
  spec.fixed = {1.0, 0.4, 1.0, 0.6, -pi / 8, 0.0};
  spec.axes = {{"phi", {-0.3, 0.3, 5}}};
  spec.verify_fraction = 1.0;
  const auto out = run_sweep(spec);
  CHECK(out.max_verify_residual < 1e-8);
  CHECK(out.csv.find("verify_rel_sid_mean") != std::string::npos);
}

TEST_CASE("unstable rows are emitted, flagged, and counted") {
  SweepSpec spec;
  spec.fixed = {1.2, 0.5, 1.0, 0.8, 0.0, 0.0};
  spec.axes = {{"phi", {0.0, pi, 5}}};
  const auto out = run_sweep(spec);
  CHECK(out.rows == 5);
  CHECK(out.unstable > 0);
  CHECK(out.csv.find("false") != std::string::npos);
  CHECK(out.manifest_json.find("unstable_fraction") != std::string::npos);
}

TEST_CASE("figure parameter table is caption-locked") {
  {
    const auto fp = figure_parameters("fig3");
    CHECK(fp.fixed.g == 1.0);
    CHECK(fp.fixed.r == 0.5);
    CHECK(fp.fixed.gamma == 1.0);
  }
  {
    const auto fp = figure_parameters("fig5");
    CHECK(fp.fixed.g == 1.2);
    CHECK(fp.fixed.r == 0.5);
    CHECK(fp.fixed.gamma == 1.0);
    CHECK(fp.panel_values == std::vector<double>{0.75, 0.85, 0.95});
    CHECK(fp.panel_key == "T");
    CHECK(fp.sweep_grid.count == 201);
  }
  {
    const auto fp = figure_parameters("fig6");
    CHECK(fp.panel_values == std::vector<double>{0.5, 1.0, 1.5});
    CHECK(fp.fixed.T == 0.80);
    CHECK(fp.fixed.r == 0.5);
    CHECK(fp.fixed.gamma == 1.0);
  }
  {
    const auto fp = figure_parameters("fig7");
    CHECK(fp.panel_values == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(fp.fixed.g == 1.0);
    CHECK(fp.fixed.r == 0.7);
    CHECK(fp.fixed.T == 0.80);
  }
  {
    const auto fp = figure_parameters("fig8");
    CHECK(fp.panel_values == std::vector<double>{0.0, 0.5, 1.0});
    CHECK(fp.fixed.gamma == 3.0);
    CHECK(fp.fixed.T == 0.80);
  }
  {
    const auto fp = figure_parameters("fig9");
    CHECK(fp.panel_values == std::vector<double>{0.5, 0.7, 1.0, 1.2});
    CHECK(fp.fixed.T == 0.80);
    CHECK(fp.fixed.gamma == 1.0);
    CHECK(fp.fixed.phi == 0.0);
    CHECK(fp.fixed.theta == doctest::Approx(-pi / 8));
    CHECK(fp.sweep_grid.start == 0.0);
    CHECK(fp.sweep_grid.stop == 1.5);
  }
  {
    const auto fp = figure_parameters("fig10");
    CHECK(fp.panel_values == std::vector<double>{0.0, 0.5, 1.0, 2.0});
    CHECK(fp.fixed.g == 1.2);
    CHECK(fp.fixed.r == 0.5);
  }
  {
    const auto fp = figure_parameters("fig11");
    CHECK(fp.fixed.T == 0.80);
    CHECK(fp.fixed.r == 0.5);
    CHECK(fp.fixed.gamma == 1.0);
    CHECK(fp.fixed.phi == 0.0);
    CHECK(fp.fixed.theta == doctest::Approx(-pi / 8));
  }
  CHECK(is_figure_name("fig4"));
  CHECK(!is_figure_name("fig12"));
  CHECK_THROWS_AS(figure_parameters("fig12"), invalid_config);
}

TEST_CASE("verify row selection is deterministic") {
  for (std::size_t i = 0; i < 50; ++i) {
    CHECK(verify_selected(i, 0.3) == verify_selected(i, 0.3));
  }
  CHECK(!verify_selected(7, 0.0));
  CHECK(verify_selected(7, 1.0));
}
