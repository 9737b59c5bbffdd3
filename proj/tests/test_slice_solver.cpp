#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hydronozzle/errors.hpp"
#include "hydronozzle/slice_solver.hpp"

using namespace hydronozzle;

namespace {

VorticitySource zero_source(double c) {
  return VorticitySource::from_function([](double) { return 0.0; }, c, ScalarFn([](double) { return 0.0; }), 0.0,
                                        ScalarFn([](double) { return 0.0; }));
}

// fhat(phi) = phi - 1/2 on c = 1.
VorticitySource sinh_source() {
  return VorticitySource::from_function([](double z) { return z - 0.5; }, 1.0,
                                        ScalarFn([](double z) { return 0.5 * z * z - 0.5 * z; }), 1.0,
                                        ScalarFn([](double) { return 1.0; }));
}

double sinh_exact(double y) { return 0.5 + std::sinh(y - 0.5) / (2.0 * std::sinh(0.5)); }

// Random smooth rho with analytic derivatives on the grid.
struct Trig {
  std::vector<double> a;
  double value(double y) const {
    double s = 0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * std::sin((k + 1) * std::numbers::pi * y);
    return s;
  }
  double first(double y) const {
    double s = 0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * (k + 1) * std::numbers::pi * std::cos((k + 1) * std::numbers::pi * y);
    return s;
  }
  double second(double y) const {
    double s = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      const double w = (k + 1) * std::numbers::pi;
      s -= a[k] * w * w * std::sin(w * y);
    }
    return s;
  }
};

}  // namespace

TEST_CASE("green kernel values") {
  CHECK(green_kernel(0.5, 0.5) == doctest::Approx(-0.25));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    const double a = u(rng), b = u(rng);
    CHECK(green_kernel(0.0, a) == 0.0);
    CHECK(green_kernel(1.0, a) == 0.0);
    CHECK(green_kernel(a, b) == doctest::Approx(green_kernel(b, a)).epsilon(1e-15));
  }
}

TEST_CASE("T with zero vorticity is the linear profile") {
  const auto src = zero_source(1.7);
  std::vector<double> rho(201);
  for (std::size_t k = 0; k < rho.size(); ++k) rho[k] = std::sin(0.1 * k);
  const auto img = apply_T(rho, 2.3, src);
  for (std::size_t k = 0; k < rho.size(); ++k) {
    const double y = k / 200.0;
    CHECK(img.value[k] == doctest::Approx(1.7 * y).epsilon(1e-15));
    CHECK(img.first[k] == doctest::Approx(1.7).epsilon(1e-15));
    CHECK(std::abs(img.second[k]) <= 1e-15);
  }
}

TEST_CASE("T bound and Lipschitz factor on random pairs") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double c = 1.3;
  const auto src = VorticitySource::from_function([c](double z) { return 0.8 * std::sin(2 * (z - 0.5 * c)); }, c);
  const std::size_t n = 400;
  for (int t = 0; t < 30; ++t) {
    const double alpha = 0.25 + 3.75 * (0.5 + 0.5 * u(rng));
    Trig ra{{u(rng), 0.5 * u(rng), 0.2 * u(rng)}}, rb{{u(rng), 0.5 * u(rng), 0.2 * u(rng)}};
    std::vector<double> a(n + 1), b(n + 1), d0(n + 1), d1(n + 1), d2(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
      const double y = static_cast<double>(k) / n;
      a[k] = c * y + ra.value(y);
      b[k] = c * y + rb.value(y);
      d0[k] = ra.value(y) - rb.value(y);
      d1[k] = ra.first(y) - rb.first(y);
      d2[k] = ra.second(y) - rb.second(y);
    }
    const auto ta = apply_T(a, alpha, src);
    const auto tb = apply_T(b, alpha, src);
    CHECK(c2_norm(ta.value, ta.first, ta.second) <= 13.0 / 8.0 * alpha * src.sup() + 2.0 * c);
    std::vector<double> e0(n + 1), e1(n + 1), e2(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
      e0[k] = ta.value[k] - tb.value[k];
      e1[k] = ta.first[k] - tb.first[k];
      e2[k] = ta.second[k] - tb.second[k];
    }
    CHECK(c2_norm(e0, e1, e2) <= 13.0 / 8.0 * alpha * src.lipschitz() * c2_norm(d0, d1, d2) * (1 + 1e-12));
  }
}

TEST_CASE("picard with zero vorticity converges immediately") {
  const auto src = zero_source(1.2);
  const auto sol = picard_solve(3.0, src);
  CHECK(sol.stats.iterations <= 1);
  for (std::size_t k = 0; k < sol.y2.size(); ++k) CHECK(sol.phi[k] == doctest::Approx(1.2 * sol.y2[k]));
}

TEST_CASE("sinh closed form: picard and shooting") {
  const auto src = sinh_source();
  const auto pic = picard_solve(1.0, src, {.n = 400});
  const auto sh = shooting_solve(1.0, src, {.n = 400});
  double ep = 0, es = 0;
  for (std::size_t k = 0; k < pic.y2.size(); ++k) {
    ep = std::max(ep, std::abs(pic.phi[k] - sinh_exact(pic.y2[k])));
    es = std::max(es, std::abs(sh.phi[k] - sinh_exact(sh.y2[k])));
  }
  CHECK(ep <= 1e-8);
  CHECK(es <= 1e-8);
  const double m = 0.5 * std::cosh(0.5) / std::sinh(0.5);
  CHECK(sh.stats.initial_slope == doctest::Approx(m).epsilon(1e-9));
  CHECK(m == doctest::Approx(1.08198).epsilon(1e-5));
  CHECK(pic.stats.relax == doctest::Approx(0.9 / (13.0 / 8.0)));
}

TEST_CASE("quartic bump: picard matches the shooting oracle") {
  const auto src = VorticitySource::from_profile(IncomingProfile::quartic_bump(0.2));
  const auto pic = picard_solve(1.0, src);
  const auto sh = shooting_solve(1.0, src);
  double e = 0;
  for (std::size_t k = 0; k < pic.y2.size(); ++k) e = std::max(e, std::abs(pic.phi[k] - sh.phi[k]));
  CHECK(e <= 1e-7);
}

TEST_CASE("shooting uniqueness over random brackets") {
  const auto src = sinh_source();
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  const double ref = shooting_solve(1.0, src).stats.initial_slope;
  for (int t = 0; t < 16; ++t) {
    double lo = u(rng), hi = u(rng);
    if (lo > hi) std::swap(lo, hi);
    ShootingOptions o;
    o.bracket = std::make_pair(lo, hi + 1e-3);
    CHECK(std::abs(shooting_solve(1.0, src, o).stats.initial_slope - ref) <= 1e-9);
  }
}

TEST_CASE("shoot endpoint is increasing in the slope") {
  const auto src = VorticitySource::from_profile(IncomingProfile::quartic_bump(0.5));
  double prev = -1e300;
  for (double m = -2.0; m <= 4.0; m += 0.25) {
    const double r = shoot_endpoint(2.0, src, m, 1000);
    CHECK(r > prev);
    prev = r;
  }
}

TEST_CASE("slice invariants") {
  SUBCASE("zero vorticity") {
    const auto src = zero_source(1.4);
    const auto rep = check_slice(picard_solve(2.0, src), src);
    CHECK(rep.passed());
    CHECK(rep.gamma == doctest::Approx(1.4));
  }
  SUBCASE("sinh slice") {
    const auto src = sinh_source();
    const auto rep = check_slice(shooting_solve(1.0, src, {.n = 400}), src);
    CHECK(rep.passed());
    CHECK(rep.gamma == doctest::Approx(1.0 / (2.0 * std::sinh(0.5))).epsilon(1e-6));
    CHECK(rep.gamma == doctest::Approx(0.95952).epsilon(1e-5));
  }
  SUBCASE("flipped sign is flagged") {
    const auto src = VorticitySource::from_function([](double z) { return 0.5 - z; }, 1.0,
                                                    ScalarFn([](double z) { return 0.5 * z - 0.5 * z * z; }), 1.0);
    CHECK_FALSE(src.sign_condition_ok());
    const auto rep = check_slice(shooting_solve(16.0, src), src);
    CHECK_FALSE(rep.bounds_ok);
    CHECK_FALSE(rep.passed());
    CHECK((rep.phi_max > 1.0 || rep.phi_min < 0.0 || !rep.strict_interior));
  }
}

TEST_CASE("picard reports non-convergence") {
  const auto src = sinh_source();
  PicardOptions o;
  o.max_iter = 2;
  try {
    picard_solve(1.0, src, o);
    FAIL("expected NoConvergence");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoConvergence);
  }
}
