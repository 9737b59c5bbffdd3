#include <doctest.h>

#include <cmath>

#include "hydronozzle/errors.hpp"
#include "hydronozzle/field.hpp"

using namespace hydronozzle;

namespace {

VorticitySource zero_source(double c) {
  return VorticitySource::from_function([](double) { return 0.0; }, c, ScalarFn([](double) { return 0.0; }), 0.0,
                                        ScalarFn([](double) { return 0.0; }));
}

AssemblyOptions grid(std::size_t ny1, std::size_t ny2) {
  AssemblyOptions o;
  o.ny1 = ny1;
  o.ny2 = ny2;
  return o;
}

}  // namespace

TEST_CASE("strip: identical slices and no y1-dependence") {
  const auto g = NozzleGeometry::strip(10.0);
  const auto src = VorticitySource::from_profile(IncomingProfile::quartic_bump(0.4));
  const auto field = assemble(g, src, grid(50, 80));
  REQUIRE(field.columns() == 51);
  REQUIRE(field.rows() == 81);
  for (std::size_t i = 1; i < field.columns(); ++i) {
    for (std::size_t j = 0; j < field.rows(); ++j) {
      CHECK(field.phi(i, j) == field.phi(0, j));
      CHECK(field.dphi_dy1_at(i, j) == 0.0);
    }
  }
  const auto flow = reconstruct(field, g, src);
  for (std::size_t k = 0; k < flow.v2.size(); ++k) CHECK(flow.v2[k] == 0.0);
}

TEST_CASE("strip with constant profile: uniform flow") {
  const auto g = NozzleGeometry::strip(5.0);
  const auto src = VorticitySource::from_profile(IncomingProfile::constant(1.0));
  const auto flow = reconstruct(assemble(g, src, grid(50, 50)), g, src);
  for (std::size_t k = 0; k < flow.v1.size(); ++k) {
    CHECK(flow.v1[k] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(flow.v2[k] == 0.0);
    CHECK(flow.p[k] == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(flow.omega[k] == 0.0);
  }
  for (std::size_t i = 0; i < flow.columns(); ++i) CHECK(mass_flux_at(flow, i) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("zero vorticity in a tanh nozzle") {
  const double c = 1.3;
  const auto g = NozzleGeometry::tanh_transition(0.0, 2.0, 1.0, 15.0);
  const auto src = zero_source(c);
  const auto field = assemble(g, src, grid(60, 50));
  for (std::size_t i = 0; i < field.columns(); ++i) {
    for (std::size_t j = 0; j < field.rows(); ++j) {
      CHECK(field.phi(i, j) == doctest::Approx(c * field.y2[j]).epsilon(1e-13));
      CHECK(std::abs(field.dphi_dy1_at(i, j)) <= 1e-14);
    }
  }
  const auto flow = reconstruct(field, g, src);
  for (std::size_t i = 0; i < flow.columns(); ++i) {
    const double s = g.width(flow.y1[i]);
    for (std::size_t j = 0; j < flow.rows(); ++j) {
      CHECK(flow.v1[flow.index(i, j)] == doctest::Approx(c / s).epsilon(1e-13));
    }
  }
  CHECK(flow.v1[flow.index(flow.columns() - 1, 10)] == doctest::Approx(c / 2.0).epsilon(1e-12));
}

TEST_CASE("bump: assembled dphi/dy1 matches y1-differencing of phi") {
  const auto g = NozzleGeometry::bump(0.3, 5.0, 0.0, 1.5, true, 10.0);
  const auto src = VorticitySource::from_profile(IncomingProfile::quartic_bump(0.2));
  const auto field = assemble(g, src, grid(80, 100));
  const auto table = std::make_shared<const PrimitiveTable>(src, 2000);
  const double h = 1e-4;
  double e = 0.0;
  for (std::size_t i = 10; i < field.columns() - 10; i += 5) {
    const double y1 = field.y1[i];
    const auto sp = invert_to_slice(build_lagrange_slice(g.alpha(y1 + h), table), y1 + h, field.rows() - 1);
    const auto sm = invert_to_slice(build_lagrange_slice(g.alpha(y1 - h), table), y1 - h, field.rows() - 1);
    for (std::size_t j = 0; j < field.rows(); ++j) {
      e = std::max(e, std::abs(field.dphi_dy1_at(i, j) - (sp.phi[j] - sm.phi[j]) / (2 * h)));
    }
  }
  CHECK(e <= 1e-5);
}

TEST_CASE("bump: flux is c on every column") {
  const auto g = NozzleGeometry::bump(0.3, 5.0, 0.0, 1.5, true, 10.0);
  const auto src = VorticitySource::from_profile(IncomingProfile::quartic_bump(0.2));
  const auto flow = reconstruct(assemble(g, src, grid(100, 100)), g, src);
  for (std::size_t i = 0; i < flow.columns(); ++i) {
    CHECK(std::abs(flow.flux[i] - flow.c) <= 1e-8 * flow.c);
  }
  CHECK(flow.gamma_bar > 0.0);
  CHECK(flow.bounds_certified);
  for (std::size_t k = 0; k < flow.phi.size(); ++k) {
    CHECK(flow.phi[k] >= 0.0);
    CHECK(flow.phi[k] <= flow.c);
  }

  SUBCASE("corrupted column is detected") {
    FlowField bad = flow;
    const std::size_t i = 37;
    for (std::size_t j = 0; j < bad.rows(); ++j) bad.v1[bad.index(i, j)] *= 1.001;
    CHECK(std::abs(mass_flux_at(bad, i) - bad.c) > 1e-4 * bad.c);
    CHECK(std::abs(mass_flux_at(bad, i + 1) - bad.c) <= 1e-8 * bad.c);
  }
}

TEST_CASE("pressure is constant on each column") {
  const auto g = NozzleGeometry::bump(0.3, 5.0, 0.0, 1.5, true, 10.0);
  const auto src = VorticitySource::from_profile(IncomingProfile::quartic_bump(0.6));
  const auto field = assemble(g, src, grid(60, 60));
  const auto flow = reconstruct(field, g, src);
  for (std::size_t i = 0; i < flow.columns(); ++i) {
    const double beta = build_lagrange_slice(g.alpha(flow.y1[i]), src).beta();
    for (std::size_t j = 0; j < flow.rows(); ++j) {
      CHECK(flow.p[flow.index(i, j)] == doctest::Approx(-beta / (2 * g.alpha(flow.y1[i]))).epsilon(1e-10));
    }
  }
}

TEST_CASE("serial and parallel kernels are bitwise identical") {
  const auto g = NozzleGeometry::bump(0.3, 5.0, 0.0, 1.5, true, 10.0);
  const auto src = VorticitySource::from_profile(IncomingProfile::quartic_bump(0.2));
  for (SliceMethod m : {SliceMethod::Lagrange, SliceMethod::Picard}) {
    auto o = grid(60, 60);
    o.method = m;
    const auto a = assemble(g, src, o);
    const auto b = assemble_serial(g, src, o);
    CHECK(max_phi_deviation(a, b) == 0.0);
    CHECK(a.dphi_dy1 == b.dphi_dy1);
    const auto fa = reconstruct(a, g, src);
    const auto fb = reconstruct_serial(b, g, src);
    CHECK(fa.v1 == fb.v1);
    CHECK(fa.v2 == fb.v2);
    CHECK(fa.p == fb.p);
  }
}

TEST_CASE("methods agree on the bump") {
  const auto g = NozzleGeometry::bump(0.3, 5.0, 0.0, 1.5, true, 10.0);
  const auto src = VorticitySource::from_profile(IncomingProfile::quartic_bump(0.2));
  auto o = grid(50, 100);
  const auto lag = assemble(g, src, o);
  o.method = SliceMethod::Picard;
  const auto pic = assemble(g, src, o);
  o.method = SliceMethod::Shooting;
  const auto sh = assemble(g, src, o);
  CHECK(max_phi_deviation(lag, pic) <= 1e-6);
  CHECK(max_phi_deviation(lag, sh) <= 1e-6);
}

TEST_CASE("negative v1 is rejected") {
  const auto g = NozzleGeometry::strip(5.0);
  const auto src = VorticitySource::from_profile(IncomingProfile::quartic_bump(0.2));
  auto field = assemble(g, src, grid(50, 50));
  field.slices[3].dphi[10] = -1.0;
  try {
    reconstruct_serial(field, g, src);
    FAIL("expected NonPositiveV1");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonPositiveV1);
  }
}
