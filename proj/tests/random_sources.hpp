#pragma once

// Randomized vorticity family f = p (z - t c) + q sin(2 pi k z / c) with
// closed-form primitive, derivative and Lipschitz bound. p >= 0 and
// t in [0, 1] give f(0) <= 0 <= f(c).

#include <cmath>
#include <numbers>
#include <random>

#include "hydronozzle/profiles.hpp"

namespace hydronozzle::testing {

struct RandomFamily {
  double c, p, t, q;
  int k;

  double f(double z) const { return p * (z - t * c) + q * std::sin(2 * std::numbers::pi * k * z / c); }
  double F(double z) const {
    const double w = 2 * std::numbers::pi * k / c;
    return p * (0.5 * z * z - t * c * z) + q / w * (1.0 - std::cos(w * z));
  }
  double df(double z) const {
    const double w = 2 * std::numbers::pi * k / c;
    return p + q * w * std::cos(w * z);
  }
  double lip() const { return p + std::abs(q) * 2 * std::numbers::pi * k / c; }

  VorticitySource source() const {
    const RandomFamily self = *this;
    return VorticitySource::from_function([self](double z) { return self.f(z); }, c,
                                          ScalarFn([self](double z) { return self.F(z); }), lip(),
                                          ScalarFn([self](double z) { return self.df(z); }));
  }
};

inline RandomFamily draw_family(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RandomFamily r{};
  r.c = 0.5 + 1.5 * u(rng);
  r.p = 1.5 * u(rng);
  r.t = u(rng);
  r.q = 0.6 * (u(rng) - 0.5);
  r.k = 1 + static_cast<int>(u(rng) * 2.0);
  return r;
}

inline double draw_alpha(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.25, 4.0);
  return u(rng);
}

}  // namespace hydronozzle::testing
