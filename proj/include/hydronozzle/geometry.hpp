#pragma once

// Nozzle walls s0 < s1, the width s = s1 - s0, and the flattening map
// (x1, x2) -> (y1, y2) = (x1, (x2 - s0) / s) onto the unit strip.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hydronozzle/profiles.hpp"

namespace hydronozzle {

/// Downstream walls tend to (offset, offset + width).
struct FlatAsymptote {
  double offset = 0.0;
  double width = 1.0;
};

/// Downstream walls tend to b0 + b1 x1 and b0 + sqrt(b1^2 + 1) + b1 x1.
struct SlantedAsymptote {
  double intercept = 0.0;
  double slope = 0.0;

  double vertical_width() const;
};

using DownstreamAsymptote = std::variant<FlatAsymptote, SlantedAsymptote>;

enum class DownstreamKind { Flat, Slanted };

struct FlatPoint {
  double y1, y2;
};

struct PhysicalPoint {
  double x1, x2;
};

class NozzleGeometry {
 public:
  struct Walls {
    ScalarFn s0, s1, ds0, ds1;
  };

  /// s0 == 0, s1 == 1.
  static NozzleGeometry strip(double cutoff = 20.0);
  /// Smooth tanh transition of length scale `length` from (0, 1) to (a, a + sigma).
  static NozzleGeometry tanh_transition(double a, double sigma, double length = 1.0, double cutoff = 20.0);
  /// Upper-wall bump of height `amplitude` plus a transition to (a, a + sigma).
  /// compact: bump and transition are C-infinity and exactly flat for |x1| >= width.
  /// Otherwise a Gaussian bump exp(-(x1/width)^2) with a tanh transition.
  static NozzleGeometry bump(double amplitude, double width = 5.0, double a = 0.0, double sigma = 1.0,
                             bool compact = true, double cutoff = 20.0);
  /// Walls with common asymptotic slope b1 downstream (softplus ramp of scale `length`).
  static NozzleGeometry slanted(double b0, double b1, double length = 1.0, double cutoff = 20.0);
  /// Tabulated walls (monotone cubic interpolation, constant extension).
  static NozzleGeometry from_tables(std::vector<double> x_lower, std::vector<double> s_lower,
                                    std::vector<double> x_upper, std::vector<double> s_upper,
                                    double cutoff = 20.0);
  /// Generic walls. Throws DegenerateWidth if s <= 0 on the sample grid.
  static NozzleGeometry custom(std::string family, Walls walls, DownstreamAsymptote downstream,
                               double cutoff = 20.0);

  const std::string& family() const { return impl_->family; }
  double cutoff() const { return impl_->cutoff; }
  const DownstreamAsymptote& downstream() const { return impl_->downstream; }
  DownstreamKind downstream_kind() const;

  double lower(double x1) const { return impl_->walls.s0(x1); }
  double upper(double x1) const { return impl_->walls.s1(x1); }
  double lower_slope(double x1) const { return impl_->walls.ds0(x1); }
  double upper_slope(double x1) const { return impl_->walls.ds1(x1); }
  double width(double x1) const { return upper(x1) - lower(x1); }
  double width_slope(double x1) const { return upper_slope(x1) - lower_slope(x1); }
  /// alpha1 = s^2 and its x1-derivative 2 s s'.
  double alpha(double x1) const;
  double alpha_slope(double x1) const;

  /// Throws OutsideNozzle unless s0(x1) <= x2 <= s1(x1) (up to round-off).
  FlatPoint flatten(double x1, double x2) const;
  PhysicalPoint unflatten(double y1, double y2) const;

  /// Sampled bounds of the width on [-cutoff, cutoff].
  double min_width() const { return impl_->d_min; }
  double max_width() const { return impl_->d_max; }

 private:
  struct Impl {
    std::string family;
    Walls walls;
    DownstreamAsymptote downstream;
    double cutoff = 20.0;
    double d_min = 0.0, d_max = 0.0;
  };
  explicit NozzleGeometry(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  std::shared_ptr<const Impl> impl_;
};

/// Builtin family by name ("strip", "tanh", "bump", "slanted") with numeric
/// parameters; unknown names or parameters throw InvalidArgument.
NozzleGeometry make_geometry(const std::string& family, const std::map<std::string, double>& params,
                             double cutoff = 20.0);

struct ClauseResult {
  std::string clause;
  bool passed = false;
  double residual = 0.0;
};

struct AssumptionReport {
  std::vector<ClauseResult> clauses;

  bool passed() const;
  const ClauseResult* find(const std::string& clause) const;
};

/// Numerical check of wall positivity (A1), upstream asymptote (A2),
/// downstream asymptote (A3, flat or slanted) and upstream slope decay.
/// `check_as` overrides which downstream form is tested.
AssumptionReport validate_assumptions(const NozzleGeometry& g, double tol,
                                      std::optional<DownstreamKind> check_as = std::nullopt);

}  // namespace hydronozzle
