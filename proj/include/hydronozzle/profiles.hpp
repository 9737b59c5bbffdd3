#pragma once

// Incoming (upstream) velocity profile and the vorticity function it induces.
//
// The upstream horizontal velocity v(x2) > 0 on [0,1] fixes the cumulative
// stream function phi^-(x2) = \int_0^{x2} v, the mass flux c = phi^-(1), its
// inverse kappa, and the vorticity function f = v' o kappa carried along
// streamlines. f is extended to the real line by constants (fhat) so the
// slice problems remain well posed off [0, c].

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hydronozzle {

using ScalarFn = std::function<double(double)>;

class IncomingProfile {
 public:
  /// Number of cells in the dense cumulative table (1001 nodes).
  static constexpr std::size_t kCumulativeCells = 1000;

  /// Analytic closure with its derivative(s). Throws NonPositiveProfile if
  /// v <= 0 anywhere on the dense grid.
  static IncomingProfile analytic(ScalarFn v, ScalarFn dv, std::optional<ScalarFn> d2v = std::nullopt,
                                  std::string name = "analytic");
  /// v == value.
  static IncomingProfile constant(double value = 1.0);
  /// v = 1 + amplitude * (x2 - 1/2)^2.
  static IncomingProfile quartic_bump(double amplitude);
  /// Monotone cubic (PCHIP) interpolant through at least 9 samples covering [0,1].
  static IncomingProfile from_samples(std::vector<double> x2, std::vector<double> v);

  const std::string& name() const { return impl_->name; }

  double velocity(double x2) const;
  double derivative(double x2) const;
  bool has_second_derivative() const { return impl_->d2v.has_value(); }
  /// Throws MissingSecondDerivative for sampled profiles.
  double second_derivative(double x2) const;

  /// Mass flux c.
  double flux() const { return impl_->cum.back(); }
  /// phi^-(x2) for x2 in [0,1].
  double cumulative(double x2) const;
  /// The unique x2 with phi^-(x2) = phi. Throws OutOfRange if phi is outside [0, c].
  double kappa(double phi) const;

  std::span<const double> cumulative_table() const { return impl_->cum; }
  std::span<const double> table_nodes() const { return impl_->nodes; }

  /// (v)'(0) <= 0 <= (v)'(1). A violation is recorded as a warning only.
  bool sign_condition_ok() const { return impl_->sign_ok; }
  const std::vector<std::string>& warnings() const { return impl_->warnings; }

 private:
  struct Impl {
    std::string name;
    ScalarFn v, dv;
    std::optional<ScalarFn> d2v;
    std::vector<double> nodes;
    std::vector<double> cum;
    bool sign_ok = true;
    std::vector<std::string> warnings;
  };

  explicit IncomingProfile(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  static IncomingProfile build(Impl impl);

  std::shared_ptr<const Impl> impl_;
};

/// f, its constant extension fhat, and the primitive F with F(0) = 0.
/// Immutable and cheap to copy; evaluators are pure.
class VorticitySource {
 public:
  /// Cells of the primitive table used when F has no closed form.
  static constexpr std::size_t kPrimitiveCells = 2048;

  /// Vorticity induced by an incoming profile: f = v' o kappa and
  /// F(phi) = (v(kappa(phi))^2 - v(0)^2) / 2.
  static VorticitySource from_profile(const IncomingProfile& profile);

  /// Arbitrary Lipschitz f on [0, c]. F is tabulated by Gauss-Legendre unless
  /// supplied. lip defaults to the largest sampled difference quotient.
  static VorticitySource from_function(ScalarFn f, double c, std::optional<ScalarFn> primitive = std::nullopt,
                                       std::optional<double> lip = std::nullopt,
                                       std::optional<ScalarFn> f_prime = std::nullopt);

  double c() const { return impl_->c; }

  /// f on [0, c]; OutOfRange otherwise.
  double f(double phi) const;
  /// f(0) for phi <= 0, f(c) for phi >= c, f otherwise.
  double fhat(double phi) const;
  /// F(phi) = \int_0^phi fhat.
  double primitive(double phi) const;
  /// f'(phi), when the source knows it.
  std::optional<double> f_prime(double phi) const;

  double lipschitz() const { return impl_->lip; }
  double sup() const { return impl_->sup; }
  bool sign_condition_ok() const { return impl_->f0 <= 0.0 && impl_->fc >= 0.0; }

 private:
  struct Impl {
    double c = 0.0;
    ScalarFn f;
    ScalarFn F;  // on [0, c]
    std::optional<ScalarFn> fp;
    double f0 = 0.0, fc = 0.0, Fc = 0.0;
    double lip = 0.0, sup = 0.0;
  };
  explicit VorticitySource(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  std::shared_ptr<const Impl> impl_;
};

/// f'(phi) = v''(kappa) / v(kappa). Throws MissingSecondDerivative for
/// profiles without an analytic second derivative.
double f_prime(const IncomingProfile& profile, double phi);

}  // namespace hydronozzle
