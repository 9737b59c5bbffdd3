#include <doctest.h>

#include <cmath>
#include <random>

#include "hydronozzle/errors.hpp"
#include "hydronozzle/geometry.hpp"

using namespace hydronozzle;

TEST_CASE("strip walls") {
  const auto g = NozzleGeometry::strip(20.0);
  for (double x : {-20.0, -3.0, 0.0, 7.5, 20.0}) {
    CHECK(g.width(x) == 1.0);
    CHECK(g.lower_slope(x) == 0.0);
    CHECK(g.upper_slope(x) == 0.0);
    CHECK(g.alpha(x) == 1.0);
    CHECK(g.alpha_slope(x) == 0.0);
  }
  const auto fp = g.flatten(2.0, 0.375);
  CHECK(fp.y1 == 2.0);
  CHECK(fp.y2 == 0.375);
  const auto report = validate_assumptions(g, 1e-12);
  CHECK(report.passed());
  for (const auto& c : report.clauses) CHECK(c.residual == 0.0);
}

TEST_CASE("tanh transition limits") {
  const auto g = NozzleGeometry::tanh_transition(0.0, 1.5, 1.0, 20.0);
  CHECK(g.width(-20.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(g.width(20.0) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(g.downstream_kind() == DownstreamKind::Flat);
  const auto report = validate_assumptions(g, 1e-12);
  CHECK(report.passed());
  REQUIRE(report.find("A3") != nullptr);
  CHECK(report.find("A3")->residual <= 1e-12);
}

TEST_CASE("tanh flatten at the downstream end") {
  const auto g = NozzleGeometry::tanh_transition(0.5, 2.0, 1.0, 20.0);
  const auto fp = g.flatten(20.0, 1.5);
  CHECK(fp.y2 == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("slanted walls and downstream checks") {
  const auto g = NozzleGeometry::slanted(0.0, 1.0, 1.0, 40.0);
  CHECK(g.width(40.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(g.downstream_kind() == DownstreamKind::Slanted);
  const auto as_slanted = validate_assumptions(g, 1e-10);
  CHECK(as_slanted.passed());
  CHECK(as_slanted.find("A3_slanted")->passed);
  const auto as_flat = validate_assumptions(g, 1e-10, DownstreamKind::Flat);
  REQUIRE(as_flat.find("A3") != nullptr);
  CHECK_FALSE(as_flat.find("A3")->passed);
  CHECK_FALSE(as_flat.passed());
}

TEST_CASE("flatten round trip on every family") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<NozzleGeometry> gs = {NozzleGeometry::strip(), NozzleGeometry::tanh_transition(0.5, 2.0),
                                          NozzleGeometry::bump(0.3, 5.0, 0.0, 1.5, true),
                                          NozzleGeometry::bump(0.3, 2.0, 0.2, 1.2, false),
                                          NozzleGeometry::slanted(0.3, 0.7)};
  for (const auto& g : gs) {
    for (int t = 0; t < 200; ++t) {
      const double x1 = -20.0 + 40.0 * u(rng);
      const double y2 = u(rng);
      const auto p = g.unflatten(x1, y2);
      const auto q = g.flatten(p.x1, p.x2);
      CHECK(std::abs(q.y1 - x1) <= 1e-14);
      CHECK(std::abs(q.y2 - y2) <= 1e-14);
    }
  }
}

TEST_CASE("flatten rejects points outside the walls") {
  const auto g = NozzleGeometry::strip();
  try {
    g.flatten(0.0, 1.2);
    FAIL("expected OutsideNozzle");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OutsideNozzle);
  }
}

TEST_CASE("wall slopes and alpha slope match finite differences") {
  const std::vector<NozzleGeometry> gs = {NozzleGeometry::tanh_transition(0.5, 2.0),
                                          NozzleGeometry::bump(0.3, 5.0, 0.0, 1.5, true),
                                          NozzleGeometry::bump(0.3, 2.0, 0.2, 1.2, false),
                                          NozzleGeometry::slanted(0.3, 0.7)};
  const double h = 1e-5;
  for (const auto& g : gs) {
    for (double x : {-4.3, -1.0, 0.2, 2.5, 4.9}) {
      CHECK(std::abs(g.lower_slope(x) - (g.lower(x + h) - g.lower(x - h)) / (2 * h)) <= 1e-8);
      CHECK(std::abs(g.upper_slope(x) - (g.upper(x + h) - g.upper(x - h)) / (2 * h)) <= 1e-8);
      CHECK(std::abs(g.alpha_slope(x) - (g.alpha(x + h) - g.alpha(x - h)) / (2 * h)) <= 1e-7);
    }
  }
}

TEST_CASE("compact bump is exactly flat outside its support") {
  const auto g = NozzleGeometry::bump(0.3, 5.0, 0.0, 1.5, true, 10.0);
  for (double x : {-10.0, -7.0, -5.0}) {
    CHECK(g.lower(x) == 0.0);
    CHECK(g.upper(x) == 1.0);
    CHECK(g.upper_slope(x) == 0.0);
  }
  for (double x : {5.0, 6.0, 10.0}) {
    CHECK(g.lower(x) == 0.0);
    CHECK(g.upper(x) == 1.5);
    CHECK(g.upper_slope(x) == 0.0);
  }
}

TEST_CASE("degenerate and unknown geometries") {
  NozzleGeometry::Walls w{[](double) { return 0.0; }, [](double x) { return x; }, [](double) { return 0.0; },
                          [](double) { return 1.0; }};
  try {
    NozzleGeometry::custom("bad", w, FlatAsymptote{}, 5.0);
    FAIL("expected DegenerateWidth");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateWidth);
  }
  try {
    make_geometry("torus", {}, 10.0);
    FAIL("expected InvalidArgument");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
  }
  try {
    make_geometry("tanh", {{"radius", 1.0}}, 10.0);
    FAIL("expected InvalidArgument");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
  }
}

TEST_CASE("tabulated walls interpolate and extend by constants") {
  std::vector<double> x{-5, -1, 0, 1, 5}, lo{0, 0, 0, 0, 0}, hi{1, 1, 1.2, 1.4, 1.4};
  const auto g = NozzleGeometry::from_tables(x, lo, x, hi, 10.0);
  CHECK(g.upper(-10.0) == doctest::Approx(1.0));
  CHECK(g.upper(10.0) == doctest::Approx(1.4));
  CHECK(g.upper(0.0) == doctest::Approx(1.2));
  CHECK(g.min_width() > 0.0);
}
