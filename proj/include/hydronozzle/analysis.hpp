#pragma once

// Residuals of the hydrostatic Euler system, the strip shear check, far-field
// limit states and decay toward them.

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hydronozzle/field.hpp"
#include "hydronozzle/geometry.hpp"
#include "hydronozzle/kinematics.hpp"
#include "hydronozzle/lagrange.hpp"

namespace hydronozzle {

struct Norms {
  double sup = 0.0;
  /// Root mean square over the grid nodes.
  double l2 = 0.0;
};

/// momentum:    v1 d1 v1 + v2 d2 v1 + d1 p
/// hydrostatic: d2 p
/// divergence:  d1 v1 + d2 v2
/// vorticity:   v1 d1 omega + v2 d2 omega
struct ResidualNorms {
  Norms momentum, hydrostatic, divergence, vorticity;
};

/// Second-order finite differences on the (y1, y2) grid, mapped to physical
/// derivatives through the node coordinates (central inside, one-sided at edges).
ResidualNorms residuals(const FlowField& flow);

/// Pointwise residuals from exact derivatives.
struct PointResidual {
  double momentum, hydrostatic, divergence, vorticity;
};

/// Non-shear solution on the unit strip:
///   v = (-pi e^{x1} cos(pi x2), e^{x1} sin(pi x2)),  p = -(pi^2/2) e^{2 x1},
///   phi = -e^{x1} sin(pi x2),  omega = pi^2 e^{x1} sin(pi x2).
struct ExponentialNonShear {
  FlowSample sample(double x1, double x2) const;
  double pressure(double x1, double x2) const;
  PointResidual residual_at(double x1, double x2) const;
  /// Node samples on [x_lo, x_hi] x [0, 1] (strip geometry).
  FlowField grid(double x_lo, double x_hi, std::size_t nx1, std::size_t nx2) const;
};

enum class ShearStatus { ShearConfirmed, ShearViolated, HypothesisNotMet, NotApplicable };

std::string to_string(ShearStatus status);

struct ShearReport {
  ShearStatus status = ShearStatus::NotApplicable;
  double min_speed = 0.0;
  double v2_sup = 0.0;
  /// max over columns of sup |v1(x1, .) - mean_x1 v1(., .)|.
  double spread = 0.0;
  /// Column with the largest of |v2| and v1 spread.
  std::size_t worst_column = 0;
  double worst_x1 = 0.0;
  /// A truncated domain never certifies the whole-line theorem.
  bool certified = false;
  std::string message;
};

/// Empirical shear check on a strip. Requires every column to share the same
/// x2 nodes. HypothesisNotMet if min |v| < min_speed; NotApplicable if the
/// columns at the truncation ends are still changing (within settle_tol).
ShearReport liouville_check(const FlowField& flow, double min_speed = 1e-6, double tol = 1e-10,
                            double settle_tol = 1e-8);

enum class FarFieldSide { Upstream, Downstream };

/// Limit shear state: phi_inf'' = alpha1 f(phi_inf) on [0, 1] in the
/// normalized height y2, mapped to the limit height interval.
class FarFieldState {
 public:
  FarFieldSide side() const { return side_; }
  double alpha1() const { return alpha1_; }
  /// Vertical width of the limit interval (sigma or sqrt(b1^2 + 1)).
  double height() const { return height_; }
  /// Wall slope b1 (0 for flat limits).
  double slope() const { return slope_; }
  /// Lower wall height b0 + b1 x1 (a for flat limits).
  double lower(double x1) const { return offset_ + slope_ * x1; }

  /// Limit quantities at normalized height y2 in [0, 1].
  double phi(double y2) const;
  double v1(double y2) const;
  double v2(double y2) const { return slope_ * v1(y2); }
  /// \int v1 dx2 over the vertical interval.
  double flux(std::size_t n = 2000) const;
  double beta() const { return slice_->beta(); }

 private:
  friend FarFieldState farfield_state(const VorticitySource&, const NozzleGeometry&, FarFieldSide, std::size_t);

  FarFieldSide side_ = FarFieldSide::Upstream;
  double alpha1_ = 1.0, height_ = 1.0, slope_ = 0.0, offset_ = 0.0;
  std::shared_ptr<const LagrangeSlice> slice_;
};

FarFieldState farfield_state(const VorticitySource& src, const NozzleGeometry& g, FarFieldSide side,
                             std::size_t nz = 2000);

struct DecayRow {
  double x1 = 0.0;
  double upstream_err = 0.0;
  double downstream_err = 0.0;
};

struct ConvergenceReport {
  std::vector<DecayRow> rows;
  /// Errors at the first (x1 = -X) and last (x1 = +X) columns.
  double upstream_err = 0.0;
  double downstream_err = 0.0;
  bool upstream_ok = false;
  bool downstream_ok = false;
};

/// e(x1) = sup |v1(x1, .) - v1_limit| over the nodes whose height lies in the
/// 10%-90% core of each limit interval.
ConvergenceReport convergence_report(const FlowField& flow, const FarFieldState& up, const FarFieldState& down,
                                     double tol = 1e-6);

}  // namespace hydronozzle
