#pragma once

// Streamlines dX/dt = v(X) and the gradient-flow curve sigma' = grad(phi).

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "hydronozzle/field.hpp"
#include "hydronozzle/geometry.hpp"
#include "hydronozzle/lagrange.hpp"

namespace hydronozzle {

struct FlowSample {
  double v1 = 0.0, v2 = 0.0;
  double phi = 0.0;
  double omega = 0.0;
};

/// Pointwise flow evaluator over a nozzle.
class FlowSampler {
 public:
  virtual ~FlowSampler() = default;
  virtual FlowSample sample(double x1, double x2) const = 0;
  /// x1-range the sampler is valid on.
  virtual double x_min() const = 0;
  virtual double x_max() const = 0;
  virtual const NozzleGeometry& geometry() const = 0;
};

/// Builds the Lagrange slice at the query abscissa, so phi, v and omega are
/// exact up to quadrature error at every point.
class SliceFlowSampler final : public FlowSampler {
 public:
  SliceFlowSampler(NozzleGeometry g, const VorticitySource& src, std::size_t nz = 2000, double beta_tol = 1e-15);

  FlowSample sample(double x1, double x2) const override;
  double x_min() const override { return -g_.cutoff(); }
  double x_max() const override { return g_.cutoff(); }
  const NozzleGeometry& geometry() const override { return g_; }

 private:
  NozzleGeometry g_;
  std::shared_ptr<const PrimitiveTable> table_;
  double beta_tol_;
};

/// Bilinear interpolation on the flattened (y1, y2) grid of a FlowField.
class BilinearFlowSampler final : public FlowSampler {
 public:
  BilinearFlowSampler(NozzleGeometry g, FlowField flow);

  FlowSample sample(double x1, double x2) const override;
  double x_min() const override { return flow_.y1.front(); }
  double x_max() const override { return flow_.y1.back(); }
  const NozzleGeometry& geometry() const override { return g_; }

 private:
  NozzleGeometry g_;
  FlowField flow_;
};

/// Closed-form field (test fixtures).
class AnalyticFlowSampler final : public FlowSampler {
 public:
  using Eval = std::function<FlowSample(double, double)>;
  AnalyticFlowSampler(NozzleGeometry g, Eval eval, double x_min, double x_max);

  FlowSample sample(double x1, double x2) const override { return eval_(x1, x2); }
  double x_min() const override { return lo_; }
  double x_max() const override { return hi_; }
  const NozzleGeometry& geometry() const override { return g_; }

 private:
  NozzleGeometry g_;
  Eval eval_;
  double lo_, hi_;
};

enum class PathKind { Streamline, GradientFlow };

enum class PathEnd { LeftDomain, TimeLimit, StepLimit, ReachedTop, WallContact };

std::string to_string(PathEnd end);

struct PathPoint {
  double t, x1, x2;
};

struct PathTrace {
  PathKind kind = PathKind::Streamline;
  PathEnd end = PathEnd::TimeLimit;
  std::vector<PathPoint> points;
  std::vector<double> phi_along;
  std::vector<double> omega_along;

  double phi_drift() const;
  double omega_drift() const;
};

struct TraceOptions {
  double t_max = 100.0;
  double step = 0.05;
  std::size_t max_steps = 100000;
  /// Minimum flattened distance to either wall before WallContact is flagged.
  double wall_margin = 1e-9;
};

/// RK4 on dX/dt = v(X) from `start` until the path leaves [x_min, x_max],
/// t reaches t_max, or the step cap is hit. Throws OutsideInterior unless the
/// start lies strictly between the walls.
PathTrace trace_streamline(const FlowSampler& flow, PhysicalPoint start, const TraceOptions& opts = {});

struct GradientFlowOptions {
  /// Start and stop offset from the walls in flattened height.
  double wall_offset = 1e-3;
  /// Stagnation threshold on |grad phi|.
  double min_speed = 1e-6;
  double step = 1e-3;
  std::size_t max_steps = 1000000;
};

/// RK4 on sigma' = grad(phi) = (-v2, v1) from the bottom wall (offset
/// wall_offset) at x1 until y2 reaches 1 - wall_offset. Throws Stagnation if
/// |grad phi| < min_speed on the starting column or along the path.
PathTrace gradient_flow_curve(const FlowSampler& flow, double x1, const GradientFlowOptions& opts = {});

}  // namespace hydronozzle
