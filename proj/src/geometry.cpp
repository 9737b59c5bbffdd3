#include "hydronozzle/geometry.hpp"

#include <algorithm>
#include <cmath>

// pchip.hpp calls isnan unqualified.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>
#include <fmt/format.h>

#include "hydronozzle/errors.hpp"

namespace hydronozzle {

namespace {

constexpr std::size_t kWidthSamples = 10000;

// Smooth logistic step 0 -> 1 with length scale L.
double tanh_step(double x, double L) { return 0.5 * (1.0 + std::tanh(x / L)); }
double tanh_step_slope(double x, double L) {
  const double t = std::tanh(x / L);
  return 0.5 * (1.0 - t * t) / L;
}

double softplus(double t) { return t > 30.0 ? t : std::log1p(std::exp(t)); }
double logistic(double t) { return 1.0 / (1.0 + std::exp(-t)); }

// exp(-1/t) for t > 0, zero otherwise.
double flat_tail(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }
double flat_tail_slope(double t) { return t > 0.0 ? std::exp(-1.0 / t) / (t * t) : 0.0; }

// C-infinity step, exactly 0 for x <= -w and exactly 1 for x >= w.
double compact_step(double x, double w) {
  if (x <= -w) return 0.0;
  if (x >= w) return 1.0;
  const double t = (x + w) / (2.0 * w);
  const double a = flat_tail(t), b = flat_tail(1.0 - t);
  return a / (a + b);
}
double compact_step_slope(double x, double w) {
  if (x <= -w || x >= w) return 0.0;
  const double t = (x + w) / (2.0 * w);
  const double a = flat_tail(t), b = flat_tail(1.0 - t);
  const double da = flat_tail_slope(t), db = -flat_tail_slope(1.0 - t);
  return (da * b - a * db) / ((a + b) * (a + b)) / (2.0 * w);
}

// exp(1 - 1/(1 - r^2)) on |r| < 1: peak 1 at the centre, identically zero outside.
double compact_bump(double x, double w) {
  const double r = x / w;
  if (std::abs(r) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - r * r));
}
double compact_bump_slope(double x, double w) {
  const double r = x / w;
  if (std::abs(r) >= 1.0) return 0.0;
  const double q = 1.0 - r * r;
  return compact_bump(x, w) * (-2.0 * r / (q * q)) / w;
}

double param(const std::map<std::string, double>& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

}  // namespace

double SlantedAsymptote::vertical_width() const { return std::sqrt(slope * slope + 1.0); }

NozzleGeometry NozzleGeometry::custom(std::string family, Walls walls, DownstreamAsymptote downstream,
                                      double cutoff) {
  if (!(cutoff > 0.0)) throw Error(ErrorCode::InvalidArgument, "cutoff X must be positive");
  Impl impl;
  impl.family = std::move(family);
  impl.walls = std::move(walls);
  impl.downstream = downstream;
  impl.cutoff = cutoff;
  double dmin = impl.walls.s1(-cutoff) - impl.walls.s0(-cutoff);
  double dmax = dmin;
  for (std::size_t i = 0; i <= kWidthSamples; ++i) {
    const double x = -cutoff + 2.0 * cutoff * static_cast<double>(i) / static_cast<double>(kWidthSamples);
    const double s = impl.walls.s1(x) - impl.walls.s0(x);
    dmin = std::min(dmin, s);
    dmax = std::max(dmax, s);
  }
  if (!(dmin > 0.0)) {
    throw Error(ErrorCode::DegenerateWidth,
                fmt::format("nozzle '{}' has minimum width {:.6g} <= 0", impl.family, dmin));
  }
  impl.d_min = dmin;
  impl.d_max = dmax;
  return NozzleGeometry(std::make_shared<const Impl>(std::move(impl)));
}

NozzleGeometry NozzleGeometry::strip(double cutoff) {
  Walls w{[](double) { return 0.0; }, [](double) { return 1.0; }, [](double) { return 0.0; },
          [](double) { return 0.0; }};
  return custom("strip", std::move(w), FlatAsymptote{0.0, 1.0}, cutoff);
}

NozzleGeometry NozzleGeometry::tanh_transition(double a, double sigma, double length, double cutoff) {
  if (!(sigma > 0.0) || !(length > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "tanh nozzle needs sigma > 0 and length > 0");
  }
  const double rise = a + sigma - 1.0;
  Walls w{[=](double x) { return a * tanh_step(x, length); },
          [=](double x) { return 1.0 + rise * tanh_step(x, length); },
          [=](double x) { return a * tanh_step_slope(x, length); },
          [=](double x) { return rise * tanh_step_slope(x, length); }};
  return custom("tanh", std::move(w), FlatAsymptote{a, sigma}, cutoff);
}

NozzleGeometry NozzleGeometry::bump(double amplitude, double width, double a, double sigma, bool compact,
                                   double cutoff) {
  if (!(width > 0.0) || !(sigma > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "bump nozzle needs width > 0 and sigma > 0");
  }
  const double rise = a + sigma - 1.0;
  Walls w;
  if (compact) {
    w.s0 = [=](double x) { return a * compact_step(x, width); };
    w.ds0 = [=](double x) { return a * compact_step_slope(x, width); };
    w.s1 = [=](double x) { return 1.0 + rise * compact_step(x, width) + amplitude * compact_bump(x, width); };
    w.ds1 = [=](double x) {
      return rise * compact_step_slope(x, width) + amplitude * compact_bump_slope(x, width);
    };
  } else {
    const double L = 0.5 * width;
    w.s0 = [=](double x) { return a * tanh_step(x, L); };
    w.ds0 = [=](double x) { return a * tanh_step_slope(x, L); };
    w.s1 = [=](double x) {
      const double r = x / width;
      return 1.0 + rise * tanh_step(x, L) + amplitude * std::exp(-r * r);
    };
    w.ds1 = [=](double x) {
      const double r = x / width;
      return rise * tanh_step_slope(x, L) - 2.0 * r / width * amplitude * std::exp(-r * r);
    };
  }
  return custom(compact ? "bump" : "gaussian_bump", std::move(w), FlatAsymptote{a, sigma}, cutoff);
}

NozzleGeometry NozzleGeometry::slanted(double b0, double b1, double length, double cutoff) {
  if (!(length > 0.0)) throw Error(ErrorCode::InvalidArgument, "slanted nozzle needs length > 0");
  const double gap = std::sqrt(b1 * b1 + 1.0) - 1.0;
  auto s0 = [=](double x) { return b0 * tanh_step(x, length) + b1 * length * softplus(x / length); };
  auto ds0 = [=](double x) { return b0 * tanh_step_slope(x, length) + b1 * logistic(x / length); };
  Walls w{s0, [=](double x) { return s0(x) + 1.0 + gap * tanh_step(x, length); }, ds0,
          [=](double x) { return ds0(x) + gap * tanh_step_slope(x, length); }};
  return custom("slanted", std::move(w), SlantedAsymptote{b0, b1}, cutoff);
}

NozzleGeometry NozzleGeometry::from_tables(std::vector<double> x_lower, std::vector<double> s_lower,
                                           std::vector<double> x_upper, std::vector<double> s_upper,
                                           double cutoff) {
  using Pchip = boost::math::interpolators::pchip<std::vector<double>>;
  auto make = [](std::vector<double> x, std::vector<double> s, const char* which) {
    if (x.size() != s.size() || x.size() < 4) {
      throw Error(ErrorCode::InvalidArgument, fmt::format("{} wall table needs >= 4 matching rows", which));
    }
    for (std::size_t i = 1; i < x.size(); ++i) {
      if (!(x[i] > x[i - 1])) {
        throw Error(ErrorCode::InvalidArgument, fmt::format("{} wall abscissae must increase", which));
      }
    }
    const double lo = x.front(), hi = x.back();
    // Flat ends: zero slope at the table boundary so the constant extension is C1.
    auto p = std::make_shared<const Pchip>(std::move(x), std::move(s), 0.0, 0.0);
    ScalarFn val = [p, lo, hi](double t) { return (*p)(std::clamp(t, lo, hi)); };
    ScalarFn der = [p, lo, hi](double t) { return (t <= lo || t >= hi) ? 0.0 : p->prime(t); };
    return std::pair{val, der};
  };
  auto [s0, ds0] = make(std::move(x_lower), std::move(s_lower), "lower");
  auto [s1, ds1] = make(std::move(x_upper), std::move(s_upper), "upper");
  const double far = 1e300;
  FlatAsymptote down{s0(far), s1(far) - s0(far)};
  return custom("table", Walls{s0, s1, ds0, ds1}, down, cutoff);
}

DownstreamKind NozzleGeometry::downstream_kind() const {
  return std::holds_alternative<SlantedAsymptote>(impl_->downstream) ? DownstreamKind::Slanted
                                                                     : DownstreamKind::Flat;
}

double NozzleGeometry::alpha(double x1) const {
  const double s = width(x1);
  return s * s;
}

double NozzleGeometry::alpha_slope(double x1) const { return 2.0 * width(x1) * width_slope(x1); }

FlatPoint NozzleGeometry::flatten(double x1, double x2) const {
  const double s0 = lower(x1), s1 = upper(x1);
  const double slack = 1e-14 * (1.0 + std::abs(s0) + std::abs(s1));
  if (x2 < s0 - slack || x2 > s1 + slack) {
    throw Error(ErrorCode::OutsideNozzle,
                fmt::format("point ({:.6g}, {:.6g}) lies outside [{:.6g}, {:.6g}]", x1, x2, s0, s1));
  }
  return {x1, std::clamp((x2 - s0) / (s1 - s0), 0.0, 1.0)};
}

PhysicalPoint NozzleGeometry::unflatten(double y1, double y2) const {
  return {y1, (1.0 - y2) * lower(y1) + y2 * upper(y1)};
}

NozzleGeometry make_geometry(const std::string& family, const std::map<std::string, double>& params,
                             double cutoff) {
  auto allow = [&](std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : params) {
      if (std::none_of(keys.begin(), keys.end(), [&](const char* key) { return k == key; })) {
        throw Error(ErrorCode::InvalidArgument, fmt::format("unknown parameter '{}' for family '{}'", k, family));
      }
    }
  };
  if (family == "strip") {
    allow({});
    return NozzleGeometry::strip(cutoff);
  }
  if (family == "tanh") {
    allow({"a", "sigma", "length"});
    return NozzleGeometry::tanh_transition(param(params, "a", 0.0), param(params, "sigma", 1.5),
                                           param(params, "length", 1.0), cutoff);
  }
  if (family == "bump") {
    allow({"amplitude", "width", "a", "sigma", "compact"});
    return NozzleGeometry::bump(param(params, "amplitude", 0.3), param(params, "width", 5.0),
                                param(params, "a", 0.0), param(params, "sigma", 1.0),
                                param(params, "compact", 1.0) != 0.0, cutoff);
  }
  if (family == "slanted") {
    allow({"b0", "b1", "length"});
    return NozzleGeometry::slanted(param(params, "b0", 0.0), param(params, "b1", 1.0),
                                   param(params, "length", 1.0), cutoff);
  }
  throw Error(ErrorCode::InvalidArgument, fmt::format("unknown geometry family '{}'", family));
}

bool AssumptionReport::passed() const {
  return std::all_of(clauses.begin(), clauses.end(), [](const ClauseResult& c) { return c.passed; });
}

const ClauseResult* AssumptionReport::find(const std::string& clause) const {
  for (const auto& c : clauses) {
    if (c.clause == clause) return &c;
  }
  return nullptr;
}

AssumptionReport validate_assumptions(const NozzleGeometry& g, double tol, std::optional<DownstreamKind> check_as) {
  const double X = g.cutoff();
  AssumptionReport report;

  // (A1): positive width on a wide grid. The residual is the shortfall below zero.
  double dmin = g.width(-X);
  for (std::size_t i = 0; i <= kWidthSamples; ++i) {
    const double x = -X + 2.0 * X * static_cast<double>(i) / static_cast<double>(kWidthSamples);
    dmin = std::min(dmin, g.width(x));
  }
  report.clauses.push_back({"A1", dmin > 0.0, std::max(0.0, -dmin)});

  const double a2 = std::max(std::abs(g.lower(-X)), std::abs(g.upper(-X) - 1.0));
  report.clauses.push_back({"A2", a2 <= tol, a2});

  const double decay = std::max(std::abs(g.lower_slope(-X)), std::abs(g.upper_slope(-X)));
  report.clauses.push_back({"upstream_slope_decay", decay <= tol, decay});

  const DownstreamKind kind = check_as.value_or(g.downstream_kind());
  double a3 = 0.0;
  if (kind == DownstreamKind::Flat) {
    FlatAsymptote flat{g.lower(X), g.width(X)};
    if (auto* declared = std::get_if<FlatAsymptote>(&g.downstream())) flat = *declared;
    a3 = std::max({std::abs(g.lower(X) - flat.offset), std::abs(g.upper(X) - flat.offset - flat.width),
                   std::abs(g.lower_slope(X)), std::abs(g.upper_slope(X))});
    report.clauses.push_back({"A3", a3 <= tol, a3});
  } else {
    SlantedAsymptote sl{g.lower(X) - g.lower_slope(X) * X, g.lower_slope(X)};
    if (auto* declared = std::get_if<SlantedAsymptote>(&g.downstream())) sl = *declared;
    a3 = std::max({std::abs(g.lower(X) - sl.intercept - sl.slope * X),
                   std::abs(g.upper(X) - sl.intercept - sl.vertical_width() - sl.slope * X),
                   std::abs(g.lower_slope(X) - sl.slope), std::abs(g.upper_slope(X) - sl.slope)});
    report.clauses.push_back({"A3_slanted", a3 <= tol, a3});
  }
  return report;
}

}  // namespace hydronozzle
