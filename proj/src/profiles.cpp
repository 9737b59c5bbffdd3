#include "hydronozzle/profiles.hpp"

#include <algorithm>
#include <cmath>

// pchip.hpp calls isnan unqualified.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <fmt/format.h>

#include "hydronozzle/errors.hpp"
#include "hydronozzle/numerics.hpp"

namespace hydronozzle {

namespace {

constexpr std::size_t kValidationSamples = 4000;

}  // namespace

IncomingProfile IncomingProfile::build(Impl impl) {
  const std::size_t m = kCumulativeCells;
  impl.nodes = numerics::uniform_grid(0.0, 1.0, m);

  double vmin = impl.v(0.0);
  for (std::size_t i = 0; i <= kValidationSamples; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(kValidationSamples);
    vmin = std::min(vmin, impl.v(x));
  }
  if (!(vmin > 0.0)) {
    throw Error(ErrorCode::NonPositiveProfile,
                fmt::format("incoming profile '{}' has min velocity {:.6g} <= 0", impl.name, vmin));
  }

  impl.cum.assign(m + 1, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    impl.cum[k + 1] = impl.cum[k] + numerics::simpson_panel(impl.v, impl.nodes[k], impl.nodes[k + 1]);
  }

  const double d0 = impl.dv(0.0), d1 = impl.dv(1.0);
  if (d0 > 0.0 || d1 < 0.0) {
    impl.sign_ok = false;
    impl.warnings.push_back(fmt::format(
        "{}: v'(0) = {:.6g}, v'(1) = {:.6g}; bounds 0 <= phi <= c are not guaranteed",
        to_string(ErrorCode::SignConditionViolated), d0, d1));
  }
  return IncomingProfile(std::make_shared<const Impl>(std::move(impl)));
}

IncomingProfile IncomingProfile::analytic(ScalarFn v, ScalarFn dv, std::optional<ScalarFn> d2v,
                                          std::string name) {
  Impl impl;
  impl.name = std::move(name);
  impl.v = std::move(v);
  impl.dv = std::move(dv);
  impl.d2v = std::move(d2v);
  return build(std::move(impl));
}

IncomingProfile IncomingProfile::constant(double value) {
  return analytic([value](double) { return value; }, [](double) { return 0.0; },
                  ScalarFn([](double) { return 0.0; }), "constant");
}

IncomingProfile IncomingProfile::quartic_bump(double amplitude) {
  return analytic([amplitude](double x) { return 1.0 + amplitude * (x - 0.5) * (x - 0.5); },
                  [amplitude](double x) { return 2.0 * amplitude * (x - 0.5); },
                  ScalarFn([amplitude](double) { return 2.0 * amplitude; }), "quartic_bump");
}

IncomingProfile IncomingProfile::from_samples(std::vector<double> x2, std::vector<double> v) {
  if (x2.size() != v.size()) {
    throw Error(ErrorCode::InvalidArgument, "profile table columns differ in length");
  }
  if (x2.size() < 9) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("profile table needs at least 9 samples, got {}", x2.size()));
  }
  for (std::size_t i = 1; i < x2.size(); ++i) {
    if (!(x2[i] > x2[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "profile table abscissae must be strictly increasing");
    }
  }
  if (std::abs(x2.front()) > 1e-12 || std::abs(x2.back() - 1.0) > 1e-12) {
    throw Error(ErrorCode::InvalidArgument, "profile table must span [0, 1]");
  }
  x2.front() = 0.0;
  x2.back() = 1.0;
  using Pchip = boost::math::interpolators::pchip<std::vector<double>>;
  auto interp = std::make_shared<const Pchip>(std::move(x2), std::move(v));
  auto clamp01 = [](double x) { return std::clamp(x, 0.0, 1.0); };
  Impl impl;
  impl.name = "table";
  impl.v = [interp, clamp01](double x) { return (*interp)(clamp01(x)); };
  impl.dv = [interp, clamp01](double x) { return interp->prime(clamp01(x)); };
  return build(std::move(impl));
}

double IncomingProfile::velocity(double x2) const { return impl_->v(x2); }
double IncomingProfile::derivative(double x2) const { return impl_->dv(x2); }

double IncomingProfile::second_derivative(double x2) const {
  if (!impl_->d2v) {
    throw Error(ErrorCode::MissingSecondDerivative,
                fmt::format("profile '{}' has no second derivative", impl_->name));
  }
  return (*impl_->d2v)(x2);
}

double IncomingProfile::cumulative(double x2) const {
  if (x2 <= 0.0) return 0.0;
  if (x2 >= 1.0) return impl_->cum.back();
  const std::size_t k = numerics::locate_cell(impl_->nodes, x2);
  return impl_->cum[k] + numerics::simpson_panel(impl_->v, impl_->nodes[k], x2);
}

double IncomingProfile::kappa(double phi) const {
  const double c = flux();
  if (!(phi >= 0.0 && phi <= c)) {
    throw Error(ErrorCode::OutOfRange, fmt::format("kappa: phi = {:.17g} outside [0, {:.17g}]", phi, c));
  }
  if (phi == 0.0) return 0.0;
  if (phi == c) return 1.0;
  const auto& cum = impl_->cum;
  const auto& nodes = impl_->nodes;
  const std::size_t k = numerics::locate_cell(cum, phi);
  const double a = nodes[k], b = nodes[k + 1];
  auto g = [&](double x) { return cum[k] + numerics::simpson_panel(impl_->v, a, x) - phi; };
  return numerics::bracketed_root(g, a, b, cum[k] - phi, cum[k + 1] - phi);
}

double f_prime(const IncomingProfile& profile, double phi) {
  if (!profile.has_second_derivative()) {
    throw Error(ErrorCode::MissingSecondDerivative,
                fmt::format("profile '{}' has no second derivative", profile.name()));
  }
  const double x = profile.kappa(phi);
  return profile.second_derivative(x) / profile.velocity(x);
}

VorticitySource VorticitySource::from_profile(const IncomingProfile& profile) {
  Impl impl;
  impl.c = profile.flux();
  const double v0 = profile.velocity(0.0);
  impl.f = [profile](double phi) { return profile.derivative(profile.kappa(phi)); };
  impl.F = [profile, v0](double phi) {
    const double v = profile.velocity(profile.kappa(phi));
    return 0.5 * (v - v0) * (v + v0);
  };
  if (profile.has_second_derivative()) {
    impl.fp = [profile](double phi) { return hydronozzle::f_prime(profile, phi); };
  }
  impl.f0 = profile.derivative(0.0);
  impl.fc = profile.derivative(1.0);
  impl.Fc = impl.F(impl.c);

  // Sample in x2 directly: f(cum(x)) = v'(x) and f'(cum(x)) = v''(x) / v(x).
  constexpr std::size_t m = 4000;
  double sup = 0.0, lip = 0.0;
  double prev_dv = profile.derivative(0.0), prev_cum = 0.0;
  for (std::size_t i = 0; i <= m; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(m);
    const double dv = profile.derivative(x);
    sup = std::max(sup, std::abs(dv));
    if (profile.has_second_derivative()) {
      lip = std::max(lip, std::abs(profile.second_derivative(x) / profile.velocity(x)));
    } else if (i > 0) {
      const double cum = profile.cumulative(x);
      lip = std::max(lip, std::abs(dv - prev_dv) / (cum - prev_cum));
      prev_cum = cum;
    }
    prev_dv = dv;
  }
  impl.sup = sup;
  impl.lip = lip;
  return VorticitySource(std::make_shared<const Impl>(std::move(impl)));
}

VorticitySource VorticitySource::from_function(ScalarFn f, double c, std::optional<ScalarFn> primitive,
                                               std::optional<double> lip, std::optional<ScalarFn> f_prime) {
  if (!(c > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("mass flux must be positive, got {:.6g}", c));
  }
  Impl impl;
  impl.c = c;
  impl.f = f;
  impl.fp = std::move(f_prime);
  if (primitive) {
    const double F0 = (*primitive)(0.0);
    impl.F = [P = *primitive, F0](double phi) { return P(phi) - F0; };
  } else {
    using GL = boost::math::quadrature::gauss<double, 7>;
    auto nodes = std::make_shared<std::vector<double>>(numerics::uniform_grid(0.0, c, kPrimitiveCells));
    auto table = std::make_shared<std::vector<double>>(kPrimitiveCells + 1, 0.0);
    for (std::size_t k = 0; k < kPrimitiveCells; ++k) {
      (*table)[k + 1] = (*table)[k] + GL::integrate(f, (*nodes)[k], (*nodes)[k + 1]);
    }
    impl.F = [f, nodes, table](double phi) {
      const std::size_t k = numerics::locate_cell(*nodes, phi);
      return (*table)[k] + GL::integrate(f, (*nodes)[k], phi);
    };
  }
  impl.f0 = f(0.0);
  impl.fc = f(c);
  impl.Fc = impl.F(c);

  constexpr std::size_t m = 4096;
  double sup = 0.0, est = 0.0, prev = f(0.0);
  for (std::size_t i = 0; i <= m; ++i) {
    const double phi = c * static_cast<double>(i) / static_cast<double>(m);
    const double val = f(phi);
    sup = std::max(sup, std::abs(val));
    if (i > 0) est = std::max(est, std::abs(val - prev) / (c / static_cast<double>(m)));
    prev = val;
  }
  impl.sup = sup;
  impl.lip = lip.value_or(est);
  return VorticitySource(std::make_shared<const Impl>(std::move(impl)));
}

double VorticitySource::f(double phi) const {
  if (!(phi >= 0.0 && phi <= impl_->c)) {
    throw Error(ErrorCode::OutOfRange, fmt::format("f: phi = {:.17g} outside [0, {:.17g}]", phi, impl_->c));
  }
  return impl_->f(phi);
}

double VorticitySource::fhat(double phi) const {
  if (phi <= 0.0) return impl_->f0;
  if (phi >= impl_->c) return impl_->fc;
  return impl_->f(phi);
}

double VorticitySource::primitive(double phi) const {
  if (phi <= 0.0) return impl_->f0 * phi;
  if (phi >= impl_->c) return impl_->Fc + impl_->fc * (phi - impl_->c);
  return impl_->F(phi);
}

std::optional<double> VorticitySource::f_prime(double phi) const {
  if (!impl_->fp) return std::nullopt;
  return (*impl_->fp)(std::clamp(phi, 0.0, impl_->c));
}

}  // namespace hydronozzle
