#include "hydronozzle/slice_solver.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include <fmt/format.h>

#include "hydronozzle/errors.hpp"
#include "hydronozzle/numerics.hpp"

namespace hydronozzle {

std::string to_string(SliceMethod method) {
  switch (method) {
    case SliceMethod::Picard: return "picard";
    case SliceMethod::Shooting: return "shooting";
    case SliceMethod::Lagrange: return "lagrange";
  }
  return "unknown";
}

double green_kernel(double xi, double y2) { return xi <= y2 ? xi * (y2 - 1.0) : y2 * (xi - 1.0); }

OperatorImage apply_T(std::span<const double> rho, double alpha1, const VorticitySource& src) {
  const std::size_t n = rho.size() - 1;
  if (rho.size() < 3) throw Error(ErrorCode::InvalidArgument, "apply_T needs at least two intervals");
  const double h = 1.0 / static_cast<double>(n);
  const double c = src.c();

  std::vector<double> g(n + 1), left(n + 1), right(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double xi = static_cast<double>(i) * h;
    g[i] = src.fhat(rho[i]);
    left[i] = xi * g[i];
    right[i] = (xi - 1.0) * g[i];
  }
  // A(y) = \int_0^y xi g,  B(y) = \int_y^1 (xi - 1) g.
  const auto A = numerics::cumulative_simpson(left, h);
  const auto Bc = numerics::cumulative_simpson(right, h);

  OperatorImage out;
  out.value.resize(n + 1);
  out.first.resize(n + 1);
  out.second.resize(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    const double y = (j == n) ? 1.0 : static_cast<double>(j) * h;
    const double B = Bc[n] - Bc[j];
    out.value[j] = alpha1 * ((y - 1.0) * A[j] + y * B) + c * y;
    out.first[j] = alpha1 * (A[j] + B) + c;
    out.second[j] = alpha1 * g[j];
  }
  out.value[0] = 0.0;
  out.value[n] = c;
  return out;
}

double c2_norm(std::span<const double> value, std::span<const double> first, std::span<const double> second) {
  auto sup = [](std::span<const double> u) {
    double m = 0.0;
    for (double x : u) m = std::max(m, std::abs(x));
    return m;
  };
  return sup(value) + sup(first) + sup(second);
}

double default_relaxation(double alpha1, const VorticitySource& src) {
  const double bound = 13.0 / 8.0 * alpha1 * src.lipschitz();
  return bound > 0.0 ? std::min(1.0, 0.9 / bound) : 1.0;
}

SliceSolution picard_solve(double alpha1, const VorticitySource& src, const PicardOptions& opts) {
  if (opts.n < 50) throw Error(ErrorCode::InvalidArgument, fmt::format("picard needs n >= 50, got {}", opts.n));
  const double relax = opts.relax.value_or(default_relaxation(alpha1, src));
  if (!(relax > 0.0 && relax <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("relaxation {:.6g} outside (0, 1]", relax));
  }
  const std::size_t n = opts.n;
  const double c = src.c();

  SliceSolution sol;
  sol.alpha1 = alpha1;
  sol.c = c;
  sol.method = SliceMethod::Picard;
  sol.y2 = numerics::uniform_grid(0.0, 1.0, n);

  std::vector<double> rho(n + 1), drho(n + 1, c), d2rho(n + 1, 0.0);
  for (std::size_t i = 0; i <= n; ++i) rho[i] = c * sol.y2[i];
  double max_c2 = c2_norm(rho, drho, d2rho);

  std::size_t it = 0;
  bool converged = false;
  while (it < opts.max_iter) {
    ++it;
    const OperatorImage img = apply_T(rho, alpha1, src);
    double update = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      const double next = (1.0 - relax) * rho[i] + relax * img.value[i];
      update = std::max(update, std::abs(next - rho[i]));
      rho[i] = next;
      drho[i] = (1.0 - relax) * drho[i] + relax * img.first[i];
      d2rho[i] = (1.0 - relax) * d2rho[i] + relax * img.second[i];
    }
    max_c2 = std::max(max_c2, c2_norm(rho, drho, d2rho));
    if (!std::isfinite(update)) break;
    if (update <= opts.tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw Error(ErrorCode::NoConvergence,
                fmt::format("picard did not converge in {} iterations (alpha1 = {:.6g}, relax = {:.3g})", it,
                            alpha1, relax));
  }

  OperatorImage fin = apply_T(rho, alpha1, src);
  sol.phi = std::move(fin.value);
  sol.dphi = std::move(fin.first);
  sol.d2phi = std::move(fin.second);
  sol.stats.iterations = it;
  sol.stats.relax = relax;
  sol.stats.max_iterate_c2 = max_c2;
  return sol;
}

namespace {

struct State {
  double rho, drho;
};

State rk4_step(const State& s, double h, double alpha1, const VorticitySource& src) {
  auto rhs = [&](const State& u) { return State{u.drho, alpha1 * src.fhat(u.rho)}; };
  const State k1 = rhs(s);
  const State k2 = rhs({s.rho + 0.5 * h * k1.rho, s.drho + 0.5 * h * k1.drho});
  const State k3 = rhs({s.rho + 0.5 * h * k2.rho, s.drho + 0.5 * h * k2.drho});
  const State k4 = rhs({s.rho + h * k3.rho, s.drho + h * k3.drho});
  return {s.rho + h / 6.0 * (k1.rho + 2.0 * k2.rho + 2.0 * k3.rho + k4.rho),
          s.drho + h / 6.0 * (k1.drho + 2.0 * k2.drho + 2.0 * k3.drho + k4.drho)};
}

}  // namespace

double shoot_endpoint(double alpha1, const VorticitySource& src, double m, std::size_t steps) {
  const double h = 1.0 / static_cast<double>(steps);
  State s{0.0, m};
  for (std::size_t k = 0; k < steps; ++k) s = rk4_step(s, h, alpha1, src);
  return s.rho;
}

SliceSolution shooting_solve(double alpha1, const VorticitySource& src, const ShootingOptions& opts) {
  if (opts.n < 2) throw Error(ErrorCode::InvalidArgument, "shooting needs at least two intervals");
  const std::size_t n = opts.n;
  const double c = src.c();
  const auto sub = static_cast<std::size_t>(std::ceil((1.0 / static_cast<double>(n)) / opts.max_step - 1e-12));
  const std::size_t steps = n * std::max<std::size_t>(sub, 1);

  auto miss = [&](double m) { return shoot_endpoint(alpha1, src, m, steps) - c; };

  double lo = c - std::max(c, 0.5 * alpha1 * src.sup());
  double hi = c + std::max(c, 0.5 * alpha1 * src.sup());
  if (opts.bracket) std::tie(lo, hi) = *opts.bracket;
  if (lo > hi) std::swap(lo, hi);
  const double limit = std::ldexp(c, 20);
  double g_lo = miss(lo), g_hi = miss(hi);
  double step = std::max(hi - lo, c);
  while (g_lo > 0.0) {
    lo -= step;
    step *= 2.0;
    if (std::abs(lo - c) > limit) throw Error(ErrorCode::BracketFailure, "shooting: no lower slope bracket");
    g_lo = miss(lo);
  }
  step = std::max(hi - lo, c);
  while (g_hi < 0.0) {
    hi += step;
    step *= 2.0;
    if (std::abs(hi - c) > limit) throw Error(ErrorCode::BracketFailure, "shooting: no upper slope bracket");
    g_hi = miss(hi);
  }
  const double m = numerics::bracketed_root(miss, lo, hi, g_lo, g_hi, 52, 400);

  SliceSolution sol;
  sol.alpha1 = alpha1;
  sol.c = c;
  sol.method = SliceMethod::Shooting;
  sol.y2 = numerics::uniform_grid(0.0, 1.0, n);
  sol.phi.resize(n + 1);
  sol.dphi.resize(n + 1);
  sol.d2phi.resize(n + 1);
  const double h = 1.0 / static_cast<double>(steps);
  State s{0.0, m};
  sol.phi[0] = 0.0;
  sol.dphi[0] = m;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t k = 0; k < steps / n; ++k) s = rk4_step(s, h, alpha1, src);
    sol.phi[i] = s.rho;
    sol.dphi[i] = s.drho;
  }
  const double endpoint_miss = std::abs(sol.phi[n] - c);
  if (!(endpoint_miss <= opts.tol)) {
    throw Error(ErrorCode::NoConvergence, fmt::format("shooting endpoint miss {:.3e} > tol {:.3e}", endpoint_miss,
                                                      opts.tol));
  }
  sol.phi[n] = c;
  for (std::size_t i = 0; i <= n; ++i) sol.d2phi[i] = alpha1 * src.fhat(sol.phi[i]);
  sol.stats.initial_slope = m;
  sol.stats.iterations = 1;
  return sol;
}

SliceReport check_slice(const SliceSolution& sol, const VorticitySource& src, double tol) {
  SliceReport r;
  const std::size_t n = sol.intervals();
  const double c = sol.c;
  r.boundary_exact = sol.phi[0] == 0.0 && sol.phi[n] == c;
  r.phi_min = *std::min_element(sol.phi.begin(), sol.phi.end());
  r.phi_max = *std::max_element(sol.phi.begin(), sol.phi.end());
  r.bounds_ok = r.phi_min >= 0.0 && r.phi_max <= c;
  r.strict_interior = true;
  for (std::size_t i = 1; i < n; ++i) {
    if (!(sol.phi[i] > 0.0 && sol.phi[i] < c)) r.strict_interior = false;
  }
  r.gamma = *std::min_element(sol.dphi.begin(), sol.dphi.end());
  r.monotone = r.gamma > 0.0;
  r.endpoint_nondegenerate = sol.dphi[0] > 0.0 && sol.dphi[n] > 0.0;
  double res = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    res = std::max(res, std::abs(sol.d2phi[i] - sol.alpha1 * src.fhat(sol.phi[i])));
  }
  r.residual = res;
  r.residual_ok = res <= tol * (1.0 + sol.alpha1 * src.sup());
  return r;
}

}  // namespace hydronozzle
