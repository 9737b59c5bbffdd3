#include <doctest.h>

#include <cmath>

#include "hydronozzle/analysis.hpp"
#include "hydronozzle/errors.hpp"
#include "hydronozzle/kinematics.hpp"

using namespace hydronozzle;

TEST_CASE("strip with constant profile: horizontal streamlines") {
  const auto g = NozzleGeometry::strip(5.0);
  const SliceFlowSampler flow(g, VorticitySource::from_profile(IncomingProfile::constant(1.0)), 400);
  for (double h : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const auto tr = trace_streamline(flow, {0.0, h}, {.t_max = 100.0, .step = 0.1});
    CHECK(tr.end == PathEnd::LeftDomain);
    for (const auto& p : tr.points) CHECK(std::abs(p.x2 - h) <= 1e-14);
    CHECK(tr.points.back().x1 >= 5.0 - 0.1 - 1e-12);
    CHECK(tr.phi_drift() <= 1e-14);
  }
}

TEST_CASE("bump streamlines conserve phi and omega") {
  const auto g = NozzleGeometry::bump(0.3, 5.0, 0.0, 1.5, true, 8.0);
  const auto src = VorticitySource::from_profile(IncomingProfile::quartic_bump(0.2));
  const SliceFlowSampler flow(g, src, 1000);
  const TraceOptions coarse{.t_max = 30.0, .step = 0.1};
  const TraceOptions fine{.t_max = 30.0, .step = 0.05};
  for (double h : {0.2, 0.5, 0.85}) {
    const auto a = trace_streamline(flow, {-7.0, h}, coarse);
    const auto b = trace_streamline(flow, {-7.0, h}, fine);
    CHECK(a.end == PathEnd::LeftDomain);
    CHECK(b.phi_drift() <= 1e-6);
    CHECK(b.omega_drift() <= 1e-5);
    // Step halving: both runs end on the same streamline.
    const double phi_end_a = a.phi_along.back(), phi_end_b = b.phi_along.back();
    CHECK(std::abs(phi_end_a - phi_end_b) <= 1e-6);
    // Upstream height of the seed is kappa(phi).
    const auto p = IncomingProfile::quartic_bump(0.2);
    CHECK(p.kappa(b.phi_along.front()) == doctest::Approx(h).epsilon(1e-8));
  }
}

TEST_CASE("seeds on or outside the walls are rejected") {
  const auto g = NozzleGeometry::strip(5.0);
  const SliceFlowSampler flow(g, VorticitySource::from_profile(IncomingProfile::constant(1.0)), 200);
  for (PhysicalPoint bad : {PhysicalPoint{0.0, 0.0}, PhysicalPoint{0.0, 1.0}, PhysicalPoint{0.0, 1.5},
                            PhysicalPoint{9.0, 0.5}}) {
    try {
      trace_streamline(flow, bad);
      FAIL("expected OutsideInterior");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::OutsideInterior);
    }
  }
}

TEST_CASE("bilinear sampler is exact on the uniform strip") {
  const auto g = NozzleGeometry::strip(5.0);
  const auto src = VorticitySource::from_profile(IncomingProfile::constant(1.0));
  AssemblyOptions o;
  o.ny1 = 50;
  o.ny2 = 50;
  const BilinearFlowSampler flow(g, reconstruct(assemble(g, src, o), g, src));
  const auto s = flow.sample(0.123, 0.377);
  CHECK(s.v1 == doctest::Approx(1.0));
  CHECK(s.v2 == 0.0);
  CHECK(s.phi == doctest::Approx(0.377).epsilon(1e-14));
}

TEST_CASE("gradient flow: vertical segment in the uniform strip") {
  const auto g = NozzleGeometry::strip(5.0);
  const SliceFlowSampler flow(g, VorticitySource::from_profile(IncomingProfile::constant(1.0)), 200);
  const GradientFlowOptions o{.wall_offset = 1e-3, .step = 1e-2};
  const auto tr = gradient_flow_curve(flow, 0.0, o);
  CHECK(tr.kind == PathKind::GradientFlow);
  CHECK(tr.end == PathEnd::ReachedTop);
  CHECK(tr.points.front().x2 == doctest::Approx(1e-3));
  CHECK(tr.points.back().x2 == doctest::Approx(1.0 - 1e-3).epsilon(1e-12));
  for (const auto& p : tr.points) CHECK(p.x1 == 0.0);
}

TEST_CASE("gradient flow: phi increases monotonically across the quartic strip") {
  const auto g = NozzleGeometry::strip(5.0);
  const auto profile = IncomingProfile::quartic_bump(0.6);
  const SliceFlowSampler flow(g, VorticitySource::from_profile(profile), 1000);
  const auto tr = gradient_flow_curve(flow, 1.0, {.wall_offset = 1e-4, .step = 1e-2});
  CHECK(tr.end == PathEnd::ReachedTop);
  for (std::size_t k = 1; k < tr.phi_along.size(); ++k) CHECK(tr.phi_along[k] > tr.phi_along[k - 1]);
  CHECK(tr.phi_along.front() <= 2e-4);
  CHECK(tr.phi_along.back() >= profile.flux() - 2e-4);
  for (std::size_t k = 0; k < tr.points.size(); k += 10) {
    CHECK(tr.phi_along[k] == doctest::Approx(profile.cumulative(tr.points[k].x2)).epsilon(1e-9));
  }
}

TEST_CASE("gradient flow stagnates far upstream of the exponential field") {
  const ExponentialNonShear fixture;
  const AnalyticFlowSampler flow(NozzleGeometry::strip(40.0),
                                 [fixture](double x1, double x2) { return fixture.sample(x1, x2); }, -40.0, 1.0);
  try {
    gradient_flow_curve(flow, -30.0);
    FAIL("expected Stagnation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Stagnation);
  }
  CHECK_NOTHROW(gradient_flow_curve(flow, 0.0, {.step = 1e-2}));
}
