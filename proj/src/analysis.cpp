#include "hydronozzle/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "hydronozzle/errors.hpp"
#include "hydronozzle/numerics.hpp"

namespace hydronozzle {

namespace {

using Grid = std::vector<double>;

// Second-order derivative along y1 (dir = 0) or y2 (dir = 1) of row-major data.
Grid differentiate(const Grid& q, std::size_t n1, std::size_t n2, double h, int dir) {
  Grid out(q.size());
  const std::size_t n = dir == 0 ? n1 : n2;
  auto at = [&](std::size_t line, std::size_t k) { return dir == 0 ? q[k * n2 + line] : q[line * n2 + k]; };
  const std::size_t lines = dir == 0 ? n2 : n1;
  for (std::size_t line = 0; line < lines; ++line) {
    for (std::size_t k = 0; k < n; ++k) {
      double d;
      if (k == 0) {
        d = (-3.0 * at(line, 0) + 4.0 * at(line, 1) - at(line, 2)) / (2.0 * h);
      } else if (k + 1 == n) {
        d = (3.0 * at(line, n - 1) - 4.0 * at(line, n - 2) + at(line, n - 3)) / (2.0 * h);
      } else {
        d = (at(line, k + 1) - at(line, k - 1)) / (2.0 * h);
      }
      (dir == 0 ? out[k * n2 + line] : out[line * n2 + k]) = d;
    }
  }
  return out;
}

Norms norms(const Grid& r) {
  Norms out;
  double sum = 0.0;
  for (double v : r) {
    out.sup = std::max(out.sup, std::abs(v));
    sum += v * v;
  }
  out.l2 = r.empty() ? 0.0 : std::sqrt(sum / static_cast<double>(r.size()));
  return out;
}

}  // namespace

ResidualNorms residuals(const FlowField& flow) {
  const std::size_t n1 = flow.columns(), n2 = flow.rows();
  if (n1 < 3 || n2 < 3) throw Error(ErrorCode::InvalidArgument, "residuals need at least three nodes per direction");
  const double h1 = (flow.y1.back() - flow.y1.front()) / static_cast<double>(n1 - 1);
  const double h2 = (flow.y2.back() - flow.y2.front()) / static_cast<double>(n2 - 1);

  const Grid x2_y1 = differentiate(flow.x2, n1, n2, h1, 0);
  const Grid x2_y2 = differentiate(flow.x2, n1, n2, h2, 1);
  auto physical = [&](const Grid& q, Grid& d1, Grid& d2) {
    const Grid qy1 = differentiate(q, n1, n2, h1, 0);
    const Grid qy2 = differentiate(q, n1, n2, h2, 1);
    d1.resize(q.size());
    d2.resize(q.size());
    for (std::size_t k = 0; k < q.size(); ++k) {
      d2[k] = qy2[k] / x2_y2[k];
      d1[k] = qy1[k] - x2_y1[k] * d2[k];
    }
  };
  Grid v1_1, v1_2, v2_1, v2_2, p_1, p_2, w_1, w_2;
  physical(flow.v1, v1_1, v1_2);
  physical(flow.v2, v2_1, v2_2);
  physical(flow.p, p_1, p_2);
  physical(flow.omega, w_1, w_2);

  const std::size_t m = flow.v1.size();
  Grid mom(m), hyd(m), div(m), vor(m);
  for (std::size_t k = 0; k < m; ++k) {
    mom[k] = flow.v1[k] * v1_1[k] + flow.v2[k] * v1_2[k] + p_1[k];
    hyd[k] = p_2[k];
    div[k] = v1_1[k] + v2_2[k];
    vor[k] = flow.v1[k] * w_1[k] + flow.v2[k] * w_2[k];
  }
  return {norms(mom), norms(hyd), norms(div), norms(vor)};
}

FlowSample ExponentialNonShear::sample(double x1, double x2) const {
  const double e = std::exp(x1), pi = std::numbers::pi;
  const double sn = std::sin(pi * x2), cs = std::cos(pi * x2);
  return {-pi * e * cs, e * sn, -e * sn, pi * pi * e * sn};
}

double ExponentialNonShear::pressure(double x1, double) const {
  return -0.5 * std::numbers::pi * std::numbers::pi * std::exp(2.0 * x1);
}

PointResidual ExponentialNonShear::residual_at(double x1, double x2) const {
  const double e = std::exp(x1), pi = std::numbers::pi;
  const double sn = std::sin(pi * x2), cs = std::cos(pi * x2);
  const double v1 = -pi * e * cs, v2 = e * sn;
  const double v1_1 = v1, v1_2 = pi * pi * e * sn;
  const double v2_2 = pi * e * cs;
  const double p_1 = -pi * pi * e * e, p_2 = 0.0;
  const double w_1 = pi * pi * e * sn, w_2 = pi * pi * pi * e * cs;
  return {v1 * v1_1 + v2 * v1_2 + p_1, p_2, v1_1 + v2_2, v1 * w_1 + v2 * w_2};
}

FlowField ExponentialNonShear::grid(double x_lo, double x_hi, std::size_t nx1, std::size_t nx2) const {
  FlowField f;
  f.c = 0.0;
  f.gamma_bar = std::numeric_limits<double>::quiet_NaN();
  f.bounds_certified = false;
  f.y1 = numerics::uniform_grid(x_lo, x_hi, nx1);
  f.y2 = numerics::uniform_grid(0.0, 1.0, nx2);
  const std::size_t total = f.y1.size() * f.y2.size();
  for (auto* v : {&f.x1, &f.x2, &f.phi, &f.v1, &f.v2, &f.p, &f.omega}) v->resize(total);
  for (std::size_t i = 0; i < f.columns(); ++i) {
    for (std::size_t j = 0; j < f.rows(); ++j) {
      const std::size_t k = f.index(i, j);
      const FlowSample s = sample(f.y1[i], f.y2[j]);
      f.x1[k] = f.y1[i];
      f.x2[k] = f.y2[j];
      f.phi[k] = s.phi;
      f.v1[k] = s.v1;
      f.v2[k] = s.v2;
      f.p[k] = pressure(f.y1[i], f.y2[j]);
      f.omega[k] = s.omega;
    }
  }
  f.flux.resize(f.columns());
  for (std::size_t i = 0; i < f.columns(); ++i) f.flux[i] = mass_flux_at(f, i);
  return f;
}

std::string to_string(ShearStatus status) {
  switch (status) {
    case ShearStatus::ShearConfirmed: return "ShearConfirmed";
    case ShearStatus::ShearViolated: return "ShearViolated";
    case ShearStatus::HypothesisNotMet: return "HypothesisNotMet";
    case ShearStatus::NotApplicable: return "NotApplicable";
  }
  return "unknown";
}

ShearReport liouville_check(const FlowField& flow, double min_speed, double tol, double settle_tol) {
  ShearReport r;
  const std::size_t n1 = flow.columns(), n2 = flow.rows();
  if (n1 < 2) {
    r.message = "need at least two columns";
    return r;
  }
  for (std::size_t i = 1; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      if (std::abs(flow.x2[flow.index(i, j)] - flow.x2[flow.index(0, j)]) > 1e-14) {
        r.message = fmt::format("walls are not straight (column {} differs from column 0)", i);
        return r;
      }
    }
  }

  r.min_speed = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < flow.v1.size(); ++k) {
    r.min_speed = std::min(r.min_speed, std::hypot(flow.v1[k], flow.v2[k]));
    r.v2_sup = std::max(r.v2_sup, std::abs(flow.v2[k]));
  }
  std::vector<double> mean(n2, 0.0);
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) mean[j] += flow.v1[flow.index(i, j)];
  }
  for (double& m : mean) m /= static_cast<double>(n1);
  double worst = 0.0;
  for (std::size_t i = 0; i < n1; ++i) {
    double col = 0.0, col_v2 = 0.0;
    for (std::size_t j = 0; j < n2; ++j) {
      col = std::max(col, std::abs(flow.v1[flow.index(i, j)] - mean[j]));
      col_v2 = std::max(col_v2, std::abs(flow.v2[flow.index(i, j)]));
    }
    r.spread = std::max(r.spread, col);
    if (std::max(col, col_v2) > worst) {
      worst = std::max(col, col_v2);
      r.worst_column = i;
    }
  }
  r.worst_x1 = flow.y1[r.worst_column];

  if (r.min_speed < min_speed) {
    r.status = ShearStatus::HypothesisNotMet;
    r.message = fmt::format("min |v| = {:.3e} < {:.3e}: stagnation, shear theorem does not apply", r.min_speed,
                            min_speed);
    return r;
  }
  auto end_change = [&](std::size_t a, std::size_t b) {
    double d = 0.0;
    for (std::size_t j = 0; j < n2; ++j) {
      d = std::max(d, std::abs(flow.v1[flow.index(a, j)] - flow.v1[flow.index(b, j)]));
      d = std::max(d, std::abs(flow.v2[flow.index(a, j)] - flow.v2[flow.index(b, j)]));
    }
    return d;
  };
  const double change = std::max(end_change(0, 1), end_change(n1 - 1, n1 - 2));
  if (change > settle_tol) {
    r.status = ShearStatus::NotApplicable;
    r.message = fmt::format(
        "truncated domain: end columns still vary by {:.3e}; Liouville not applicable as a theorem", change);
    return r;
  }
  const bool ok = r.v2_sup <= tol && r.spread <= tol;
  r.status = ok ? ShearStatus::ShearConfirmed : ShearStatus::ShearViolated;
  r.message = ok ? fmt::format("shear flow on the sampled strip (empirical, not a theorem certificate)")
                 : fmt::format("shear violated: |v2| = {:.3e}, spread {:.3e} at column {} (x1 = {:.6g})", r.v2_sup,
                               r.spread, r.worst_column, r.worst_x1);
  return r;
}

double FarFieldState::phi(double y2) const { return slice_->z_at(std::clamp(y2, 0.0, 1.0)); }

double FarFieldState::v1(double y2) const {
  const double z = phi(y2);
  return 1.0 / (slice_->psi_at(z) * height_);
}

double FarFieldState::flux(std::size_t n) const {
  if (n % 2 == 1) ++n;
  std::vector<double> v(n + 1);
  for (std::size_t j = 0; j <= n; ++j) v[j] = v1(static_cast<double>(j) / static_cast<double>(n));
  return numerics::simpson(v, height_ / static_cast<double>(n));
}

FarFieldState farfield_state(const VorticitySource& src, const NozzleGeometry& g, FarFieldSide side, std::size_t nz) {
  FarFieldState st;
  st.side_ = side;
  if (side == FarFieldSide::Downstream) {
    if (const auto* flat = std::get_if<FlatAsymptote>(&g.downstream())) {
      st.height_ = flat->width;
      st.offset_ = flat->offset;
    } else {
      const auto& sl = std::get<SlantedAsymptote>(g.downstream());
      st.height_ = sl.vertical_width();
      st.offset_ = sl.intercept;
      st.slope_ = sl.slope;
    }
  }
  st.alpha1_ = st.height_ * st.height_;
  st.slice_ = std::make_shared<const LagrangeSlice>(build_lagrange_slice(st.alpha1_, src, nz));
  return st;
}

ConvergenceReport convergence_report(const FlowField& flow, const FarFieldState& up, const FarFieldState& down,
                                     double tol) {
  ConvergenceReport rep;
  const std::size_t n1 = flow.columns(), n2 = flow.rows();
  rep.rows.resize(n1);
  auto column_error = [&](std::size_t i, const FarFieldState& st) {
    double e = 0.0;
    const double x1 = flow.y1[i];
    for (std::size_t j = 0; j < n2; ++j) {
      const std::size_t k = flow.index(i, j);
      const double yl = (flow.x2[k] - st.lower(x1)) / st.height();
      if (yl < 0.1 || yl > 0.9) continue;
      e = std::max(e, std::abs(flow.v1[k] - st.v1(yl)));
    }
    return e;
  };
  const auto n = static_cast<long>(n1);
#pragma omp parallel for schedule(dynamic, 4)
  for (long i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    rep.rows[u] = {flow.y1[u], column_error(u, up), column_error(u, down)};
  }
  rep.upstream_err = rep.rows.front().upstream_err;
  rep.downstream_err = rep.rows.back().downstream_err;
  rep.upstream_ok = rep.upstream_err <= tol;
  rep.downstream_ok = rep.downstream_err <= tol;
  return rep;
}

}  // namespace hydronozzle
