#include "hydronozzle/numerics.hpp"

#include <algorithm>
#include <cstdint>

#include <boost/math/tools/toms748_solve.hpp>

#include "hydronozzle/errors.hpp"

namespace hydronozzle::numerics {

std::vector<double> uniform_grid(double a, double b, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "uniform grid needs at least one interval");
  std::vector<double> x(n + 1);
  const double h = (b - a) / static_cast<double>(n);
  for (std::size_t i = 0; i <= n; ++i) x[i] = a + h * static_cast<double>(i);
  x[n] = b;
  return x;
}

double simpson(std::span<const double> f, double h) {
  const std::size_t n = f.size() - 1;
  if (f.size() < 3) {
    return f.size() == 2 ? 0.5 * h * (f[0] + f[1]) : 0.0;
  }
  // Odd n: Simpson up to n - 3, then the 3/8 rule on the last three intervals.
  const std::size_t even = n % 2 == 0 ? n : n - 3;
  double total = 0.0;
  if (even > 0) {
    double odd_sum = 0.0, even_sum = 0.0;
    for (std::size_t i = 1; i < even; i += 2) odd_sum += f[i];
    for (std::size_t i = 2; i < even; i += 2) even_sum += f[i];
    total = h / 3.0 * (f[0] + 4.0 * odd_sum + 2.0 * even_sum + f[even]);
  }
  if (n % 2 == 1) total += 3.0 * h / 8.0 * (f[n - 3] + 3.0 * f[n - 2] + 3.0 * f[n - 1] + f[n]);
  return total;
}

std::vector<double> cumulative_simpson(std::span<const double> f, double h) {
  const std::size_t n = f.size() - 1;
  std::vector<double> out(f.size(), 0.0);
  if (f.size() < 3) {
    if (f.size() == 2) out[1] = 0.5 * h * (f[0] + f[1]);
    return out;
  }
  for (std::size_t k = 2; k <= n; k += 2) {
    out[k] = out[k - 2] + h / 3.0 * (f[k - 2] + 4.0 * f[k - 1] + f[k]);
  }
  for (std::size_t k = 1; k <= n; k += 2) {
    if (k + 1 <= n) {
      out[k] = out[k - 1] + h / 12.0 * (5.0 * f[k - 1] + 8.0 * f[k] - f[k + 1]);
    } else {
      out[k] = out[k - 1] + h / 12.0 * (-f[k - 2] + 8.0 * f[k - 1] + 5.0 * f[k]);
    }
  }
  return out;
}

double HermiteCell::value(double x) const {
  const double h = x1 - x0;
  const double t = (x - x0) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
  const double h10 = t3 - 2.0 * t2 + t;
  const double h01 = -2.0 * t3 + 3.0 * t2;
  const double h11 = t3 - t2;
  return h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1;
}

double HermiteCell::slope(double x) const {
  const double h = x1 - x0;
  const double t = (x - x0) / h;
  const double t2 = t * t;
  const double dh00 = (6.0 * t2 - 6.0 * t) / h;
  const double dh10 = 3.0 * t2 - 4.0 * t + 1.0;
  const double dh01 = (-6.0 * t2 + 6.0 * t) / h;
  const double dh11 = 3.0 * t2 - 2.0 * t;
  return dh00 * y0 + dh10 * d0 + dh01 * y1 + dh11 * d1;
}

std::size_t locate_cell(std::span<const double> nodes, double x) {
  if (nodes.size() < 2) throw Error(ErrorCode::InvalidArgument, "locate_cell needs two nodes");
  auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
  std::size_t k = (it == nodes.begin()) ? 0 : static_cast<std::size_t>(it - nodes.begin()) - 1;
  return std::min(k, nodes.size() - 2);
}

double bracketed_root(const std::function<double(double)>& g, double lo, double hi, double g_lo,
                      double g_hi, int bits, std::size_t max_iter) {
  if (g_lo == 0.0) return lo;
  if (g_hi == 0.0) return hi;
  if ((g_lo > 0.0) == (g_hi > 0.0)) {
    throw Error(ErrorCode::BracketFailure, "root is not bracketed");
  }
  std::uintmax_t iters = max_iter;
  boost::math::tools::eps_tolerance<double> tol(bits);
  auto [a, b] = boost::math::tools::toms748_solve(g, lo, hi, g_lo, g_hi, tol, iters);
  return 0.5 * (a + b);
}

}  // namespace hydronozzle::numerics
