#pragma once

// Per-slice two-point problem
//
//   rho'' = alpha1 * fhat(rho) on [0, 1],   rho(0) = 0,  rho(1) = c,
//
// where alpha1 = s^2(y1). Two independent routes are provided: relaxed Picard
// iteration on the Green's-kernel integral equation and a shooting oracle.

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hydronozzle/profiles.hpp"

namespace hydronozzle {

enum class SliceMethod { Picard, Shooting, Lagrange };

std::string to_string(SliceMethod method);

struct SolveStats {
  std::size_t iterations = 0;
  double relax = 1.0;
  /// Largest C^2 norm seen over all iterates (Picard only).
  double max_iterate_c2 = 0.0;
  /// Shooting slope phi'(0) at convergence.
  double initial_slope = 0.0;
};

/// phi(y1, .) on a uniform y2 grid with its first two y2-derivatives.
struct SliceSolution {
  double y1 = 0.0;
  double alpha1 = 1.0;
  double c = 1.0;
  std::vector<double> y2;
  std::vector<double> phi;
  std::vector<double> dphi;
  std::vector<double> d2phi;
  /// Normalization constant of the Lagrange route; NaN for the other routes.
  double beta = std::numeric_limits<double>::quiet_NaN();
  SliceMethod method = SliceMethod::Lagrange;
  SolveStats stats;

  std::size_t intervals() const { return y2.size() - 1; }
};

/// G(xi, y2) = xi (y2 - 1) for xi <= y2, y2 (xi - 1) otherwise.
double green_kernel(double xi, double y2);

/// Values of T(rho) and its first two derivatives on the rho grid.
struct OperatorImage {
  std::vector<double> value;
  std::vector<double> first;
  std::vector<double> second;
};

/// (T rho)(y2) = \int_0^1 alpha1 G(xi, y2) fhat(rho(xi)) dxi + c y2 on the
/// uniform grid carrying rho. The kernel is split at xi = y2 and both pieces
/// are integrated with cumulative Simpson.
OperatorImage apply_T(std::span<const double> rho, double alpha1, const VorticitySource& src);

/// sup|u| + sup|u'| + sup|u''|.
double c2_norm(std::span<const double> value, std::span<const double> first, std::span<const double> second);

struct PicardOptions {
  std::size_t n = 400;
  /// Defaults to min(1, 0.9 / ((13/8) alpha1 lip)).
  std::optional<double> relax;
  double tol = 1e-13;
  std::size_t max_iter = 200000;
};

double default_relaxation(double alpha1, const VorticitySource& src);

/// rho_{k+1} = (1 - relax) rho_k + relax T rho_k from rho_0 = c y2 until the
/// sup-norm update is below tol. Throws NoConvergence after max_iter.
SliceSolution picard_solve(double alpha1, const VorticitySource& src, const PicardOptions& opts = {});

struct ShootingOptions {
  std::size_t n = 400;
  double tol = 1e-12;
  /// RK4 step bound.
  double max_step = 1.0 / 2000.0;
  /// Initial slope bracket; expanded by doubling if it does not straddle.
  std::optional<std::pair<double, double>> bracket;
};

/// Integrates rho'' = alpha1 fhat(rho) from (0, m) with RK4 and adjusts the
/// slope m until |rho(1) - c| <= tol. Throws BracketFailure if no bracket is
/// found within |m - c| <= 2^20 c.
SliceSolution shooting_solve(double alpha1, const VorticitySource& src, const ShootingOptions& opts = {});

/// RK4 endpoint rho(1) for initial slope m (exposed for bracketing tests).
double shoot_endpoint(double alpha1, const VorticitySource& src, double m, std::size_t steps);

struct SliceReport {
  bool boundary_exact = false;
  bool bounds_ok = false;
  bool strict_interior = false;
  bool monotone = false;
  bool endpoint_nondegenerate = false;
  bool residual_ok = false;
  double residual = 0.0;
  /// min dphi over the slice.
  double gamma = 0.0;
  double phi_min = 0.0, phi_max = 0.0;

  bool passed() const {
    return boundary_exact && bounds_ok && strict_interior && monotone && endpoint_nondegenerate && residual_ok;
  }
};

/// Checks the slice invariants: exact boundary values, 0 <= phi <= c with
/// strict interior bounds, phi' > 0 including both endpoints, and
/// |phi'' - alpha1 fhat(phi)| <= tol (1 + alpha1 sup|fhat|).
SliceReport check_slice(const SliceSolution& sol, const VorticitySource& src, double tol = 1e-8);

}  // namespace hydronozzle
