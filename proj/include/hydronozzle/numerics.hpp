#pragma once

// Small numerical kernels shared by the solvers: uniform grids, Simpson
// quadrature (total and cumulative), cubic Hermite cells and a bracketed
// scalar root finder.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace hydronozzle::numerics {

/// n+1 equally spaced nodes on [a, b]; the last node is exactly b.
std::vector<double> uniform_grid(double a, double b, std::size_t n);

/// Composite Simpson over uniformly spaced samples. An odd number of intervals
/// closes with the 3/8 rule on the last three, so cubics integrate exactly.
double simpson(std::span<const double> f, double h);

/// Running integral I_k = \int_{x_0}^{x_k} f on uniform samples. Even k use
/// composite Simpson; odd k add a Simpson half panel.
std::vector<double> cumulative_simpson(std::span<const double> f, double h);

/// Simpson's rule on a single interval using its midpoint.
template <class F>
double simpson_panel(F&& f, double a, double b) {
  return (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
}

/// Cubic Hermite interpolant on [x0, x1] with values and slopes at both ends.
struct HermiteCell {
  double x0, x1, y0, y1, d0, d1;

  double value(double x) const;
  double slope(double x) const;
};

/// Index k with nodes[k] <= x <= nodes[k+1], clamped to the valid cells.
std::size_t locate_cell(std::span<const double> nodes, double x);

/// Bracketed root of g on [lo, hi] (TOMS 748). Requires a sign change.
/// Throws BracketFailure when g(lo) and g(hi) share a sign.
double bracketed_root(const std::function<double(double)>& g, double lo, double hi,
                      double g_lo, double g_hi, int bits = 50, std::size_t max_iter = 200);

inline double bracketed_root(const std::function<double(double)>& g, double lo, double hi) {
  return bracketed_root(g, lo, hi, g(lo), g(hi));
}

}  // namespace hydronozzle::numerics
