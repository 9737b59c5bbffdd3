#include "hydronozzle/kinematics.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "hydronozzle/errors.hpp"
#include "hydronozzle/numerics.hpp"

namespace hydronozzle {

SliceFlowSampler::SliceFlowSampler(NozzleGeometry g, const VorticitySource& src, std::size_t nz, double beta_tol)
    : g_(std::move(g)), table_(std::make_shared<const PrimitiveTable>(src, nz)), beta_tol_(beta_tol) {}

FlowSample SliceFlowSampler::sample(double x1, double x2) const {
  const FlatPoint y = g_.flatten(x1, x2);
  const LagrangeSlice L = build_lagrange_slice(g_.alpha(x1), table_, beta_tol_);
  const double z = L.z_at(y.y2);
  const double s = g_.width(x1);
  const double dphi_dy2 = 1.0 / L.psi_at(z);
  const double dphi_dy1 = -dphi_dy2 * L.dPhi_dz1_at(z, g_.alpha_slope(x1));
  FlowSample out;
  out.phi = z;
  out.v1 = dphi_dy2 / s;
  out.v2 = -dphi_dy1 + (g_.lower_slope(x1) + y.y2 * g_.width_slope(x1)) * out.v1;
  out.omega = table_->source().fhat(z);
  return out;
}

BilinearFlowSampler::BilinearFlowSampler(NozzleGeometry g, FlowField flow) : g_(std::move(g)), flow_(std::move(flow)) {}

FlowSample BilinearFlowSampler::sample(double x1, double x2) const {
  const FlatPoint y = g_.flatten(x1, x2);
  const std::size_t i = numerics::locate_cell(flow_.y1, y.y1);
  const std::size_t j = numerics::locate_cell(flow_.y2, y.y2);
  const double a = std::clamp((y.y1 - flow_.y1[i]) / (flow_.y1[i + 1] - flow_.y1[i]), 0.0, 1.0);
  const double b = std::clamp((y.y2 - flow_.y2[j]) / (flow_.y2[j + 1] - flow_.y2[j]), 0.0, 1.0);
  auto lerp = [&](const std::vector<double>& q) {
    const double q00 = q[flow_.index(i, j)], q01 = q[flow_.index(i, j + 1)];
    const double q10 = q[flow_.index(i + 1, j)], q11 = q[flow_.index(i + 1, j + 1)];
    return (1 - a) * ((1 - b) * q00 + b * q01) + a * ((1 - b) * q10 + b * q11);
  };
  return {lerp(flow_.v1), lerp(flow_.v2), lerp(flow_.phi), lerp(flow_.omega)};
}

AnalyticFlowSampler::AnalyticFlowSampler(NozzleGeometry g, Eval eval, double x_min, double x_max)
    : g_(std::move(g)), eval_(std::move(eval)), lo_(x_min), hi_(x_max) {}

std::string to_string(PathEnd end) {
  switch (end) {
    case PathEnd::LeftDomain: return "LeftDomain";
    case PathEnd::TimeLimit: return "TimeLimit";
    case PathEnd::StepLimit: return "StepLimit";
    case PathEnd::ReachedTop: return "ReachedTop";
    case PathEnd::WallContact: return "WallContact";
  }
  return "unknown";
}

double PathTrace::phi_drift() const {
  double d = 0.0;
  for (double v : phi_along) d = std::max(d, std::abs(v - phi_along.front()));
  return d;
}

double PathTrace::omega_drift() const {
  double d = 0.0;
  for (double v : omega_along) d = std::max(d, std::abs(v - omega_along.front()));
  return d;
}

namespace {

struct Vec2 {
  double a, b;
};

enum class StepStatus { Ok, Outside, Wall };

// One RK4 step of X' = rhs(X); `inside` guards every stage point.
template <class Rhs, class Inside>
StepStatus rk4(Vec2& x, double h, Rhs&& rhs, Inside&& inside) {
  Vec2 k[4];
  const Vec2 stages[3] = {{0.5, 0.5}, {0.5, 0.5}, {1.0, 1.0}};
  Vec2 p = x;
  for (int s = 0; s < 4; ++s) {
    if (s > 0) p = {x.a + stages[s - 1].a * h * k[s - 1].a, x.b + stages[s - 1].b * h * k[s - 1].b};
    const StepStatus st = inside(p);
    if (st != StepStatus::Ok) return st;
    k[s] = rhs(p);
  }
  x = {x.a + h / 6.0 * (k[0].a + 2 * k[1].a + 2 * k[2].a + k[3].a),
       x.b + h / 6.0 * (k[0].b + 2 * k[1].b + 2 * k[2].b + k[3].b)};
  return inside(x);
}

void record(PathTrace& tr, double t, const Vec2& x, const FlowSample& s) {
  tr.points.push_back({t, x.a, x.b});
  tr.phi_along.push_back(s.phi);
  tr.omega_along.push_back(s.omega);
}

}  // namespace

PathTrace trace_streamline(const FlowSampler& flow, PhysicalPoint start, const TraceOptions& opts) {
  const NozzleGeometry& g = flow.geometry();
  if (!(start.x1 > flow.x_min() && start.x1 < flow.x_max())) {
    throw Error(ErrorCode::OutsideInterior, fmt::format("seed x1 = {:.6g} outside the sampled range", start.x1));
  }
  const double lo = g.lower(start.x1), hi = g.upper(start.x1);
  if (!(start.x2 > lo && start.x2 < hi)) {
    throw Error(ErrorCode::OutsideInterior,
                fmt::format("seed ({:.6g}, {:.6g}) is not strictly inside the nozzle", start.x1, start.x2));
  }

  auto inside = [&](const Vec2& p) {
    if (!(p.a >= flow.x_min() && p.a <= flow.x_max())) return StepStatus::Outside;
    const double s0 = g.lower(p.a), s1 = g.upper(p.a);
    const double y2 = (p.b - s0) / (s1 - s0);
    if (!(y2 > opts.wall_margin && y2 < 1.0 - opts.wall_margin)) return StepStatus::Wall;
    return StepStatus::Ok;
  };
  auto rhs = [&](const Vec2& p) {
    const FlowSample s = flow.sample(p.a, p.b);
    return Vec2{s.v1, s.v2};
  };

  PathTrace tr;
  tr.kind = PathKind::Streamline;
  Vec2 x{start.x1, start.x2};
  double t = 0.0;
  record(tr, t, x, flow.sample(x.a, x.b));
  for (std::size_t step = 0;; ++step) {
    if (step >= opts.max_steps) {
      tr.end = PathEnd::StepLimit;
      break;
    }
    const double h = std::min(opts.step, opts.t_max - t);
    if (h <= 0.0) {
      tr.end = PathEnd::TimeLimit;
      break;
    }
    Vec2 next = x;
    const StepStatus st = rk4(next, h, rhs, inside);
    if (st == StepStatus::Outside) {
      tr.end = PathEnd::LeftDomain;
      break;
    }
    if (st == StepStatus::Wall) {
      tr.end = PathEnd::WallContact;
      break;
    }
    x = next;
    t += h;
    record(tr, t, x, flow.sample(x.a, x.b));
  }
  return tr;
}

PathTrace gradient_flow_curve(const FlowSampler& flow, double x1, const GradientFlowOptions& opts) {
  const NozzleGeometry& g = flow.geometry();
  if (!(x1 >= flow.x_min() && x1 <= flow.x_max())) {
    throw Error(ErrorCode::OutsideInterior, fmt::format("x1 = {:.6g} outside the sampled range", x1));
  }
  const double eps = opts.wall_offset;
  for (int k = 0; k <= 100; ++k) {
    const double y2 = eps + (1.0 - 2.0 * eps) * k / 100.0;
    const PhysicalPoint p = g.unflatten(x1, y2);
    const FlowSample s = flow.sample(p.x1, p.x2);
    const double speed = std::hypot(s.v1, s.v2);
    if (speed < opts.min_speed) {
      throw Error(ErrorCode::Stagnation,
                  fmt::format("|grad phi| = {:.3e} < {:.3e} at ({:.6g}, {:.6g})", speed, opts.min_speed, p.x1, p.x2));
    }
  }

  auto y2_of = [&](const Vec2& p) { return (p.b - g.lower(p.a)) / g.width(p.a); };
  auto inside = [&](const Vec2& p) {
    if (!(p.a >= flow.x_min() && p.a <= flow.x_max())) return StepStatus::Outside;
    const double y2 = y2_of(p);
    if (!(y2 > 0.0 && y2 < 1.0)) return StepStatus::Wall;
    return StepStatus::Ok;
  };
  auto rhs = [&](const Vec2& p) {
    const FlowSample s = flow.sample(p.a, p.b);
    if (std::hypot(s.v1, s.v2) < opts.min_speed) {
      throw Error(ErrorCode::Stagnation, fmt::format("|grad phi| below {:.3e} at ({:.6g}, {:.6g})", opts.min_speed,
                                                     p.a, p.b));
    }
    return Vec2{-s.v2, s.v1};
  };

  PathTrace tr;
  tr.kind = PathKind::GradientFlow;
  tr.end = PathEnd::StepLimit;
  const PhysicalPoint p0 = g.unflatten(x1, eps);
  Vec2 x{p0.x1, p0.x2};
  double t = 0.0;
  const double target = 1.0 - eps;
  record(tr, t, x, flow.sample(x.a, x.b));
  for (std::size_t step = 0; step < opts.max_steps; ++step) {
    Vec2 next = x;
    double h = opts.step;
    StepStatus st = rk4(next, h, rhs, inside);
    if (st == StepStatus::Outside) {
      tr.end = PathEnd::LeftDomain;
      return tr;
    }
    if (st == StepStatus::Wall || y2_of(next) >= target) {
      // Bisect the final step length so the curve stops on y2 = 1 - eps.
      double h_lo = 0.0, h_hi = h;
      Vec2 best = x;
      for (int it = 0; it < 80; ++it) {
        const double hm = 0.5 * (h_lo + h_hi);
        Vec2 trial = x;
        const StepStatus s = rk4(trial, hm, rhs, inside);
        if (s == StepStatus::Outside) {
          tr.end = PathEnd::LeftDomain;
          return tr;
        }
        if (s == StepStatus::Ok && y2_of(trial) <= target) {
          h_lo = hm;
          best = trial;
          if (target - y2_of(trial) <= 1e-13) break;
        } else {
          h_hi = hm;
        }
      }
      if (h_lo > 0.0) {
        t += h_lo;
        x = best;
        record(tr, t, x, flow.sample(x.a, x.b));
        tr.end = PathEnd::ReachedTop;
      } else {
        tr.end = PathEnd::WallContact;
      }
      return tr;
    }
    x = next;
    t += h;
    record(tr, t, x, flow.sample(x.a, x.b));
  }
  return tr;
}

}  // namespace hydronozzle
