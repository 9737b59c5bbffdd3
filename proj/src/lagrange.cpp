#include "hydronozzle/lagrange.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "hydronozzle/errors.hpp"
#include "hydronozzle/numerics.hpp"

namespace hydronozzle {

PrimitiveTable::PrimitiveTable(VorticitySource src, std::size_t n) : src_(std::move(src)) {
  if (n < 2) n = 2;
  if (n % 2 == 1) ++n;
  z_ = numerics::uniform_grid(0.0, src_.c(), n);
  h_ = src_.c() / static_cast<double>(n);
  F_.resize(n + 1);
  for (std::size_t k = 0; k <= n; ++k) F_[k] = src_.primitive(z_[k]);
  F_[0] = 0.0;
  F_min_ = *std::min_element(F_.begin(), F_.end());
}

namespace {

double radicand_floor(double alpha1, const PrimitiveTable& table) {
  const double lo = -2.0 * alpha1 * table.F_min();
  return lo + 1e-12 * (1.0 + std::abs(lo));
}

int bits_for(double tol) {
  if (!(tol > 0.0)) return 52;
  return std::clamp(static_cast<int>(std::ceil(-std::log2(tol))), 8, 52);
}

}  // namespace

double normalization_integral(double alpha1, double alpha2, const PrimitiveTable& table) {
  const auto F = table.F();
  std::vector<double> integrand(F.size());
  for (std::size_t k = 0; k < F.size(); ++k) {
    const double r = 2.0 * alpha1 * F[k] + alpha2;
    if (!(r > 0.0)) return std::numeric_limits<double>::infinity();
    integrand[k] = 1.0 / std::sqrt(r);
  }
  return numerics::simpson(integrand, table.spacing());
}

double solve_beta(double alpha1, const PrimitiveTable& table, double tol) {
  if (!(alpha1 > 0.0)) throw Error(ErrorCode::InvalidArgument, fmt::format("alpha1 must be positive, got {}", alpha1));
  const double c = table.c();
  auto g = [&](double beta) { return normalization_integral(alpha1, beta, table) - 1.0; };

  const double lo = radicand_floor(alpha1, table);
  const double g_lo = g(lo);
  if (!(g_lo > 0.0)) {
    throw Error(ErrorCode::BracketFailure,
                fmt::format("normalization at the radicand floor is {:.6g} <= 1", g_lo + 1.0));
  }
  double hi = std::max(c * c, lo);
  double g_hi = g(hi);
  for (int k = 0; g_hi > 0.0; ++k) {
    if (k > 200) throw Error(ErrorCode::BracketFailure, "no upper bracket for beta");
    hi = hi > 0.0 ? 2.0 * hi : 1.0;
    g_hi = g(hi);
  }
  if (g_hi == 0.0) return hi;
  return numerics::bracketed_root(g, lo, hi, g_lo, g_hi, bits_for(tol), 400);
}

double solve_beta(double alpha1, const VorticitySource& src, double tol, std::size_t n) {
  return solve_beta(alpha1, PrimitiveTable(src, n), tol);
}

LagrangeSlice build_lagrange_slice(double alpha1, std::shared_ptr<const PrimitiveTable> table, double tol) {
  LagrangeSlice L;
  L.table_ = std::move(table);
  const PrimitiveTable& t = *L.table_;
  L.alpha1_ = alpha1;
  L.beta_ = solve_beta(alpha1, t, tol);

  const auto F = t.F();
  const std::size_t m = F.size();
  const double h = t.spacing();
  L.psi_.resize(m);
  std::vector<double> psi3(m), F_psi3(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double r = 2.0 * alpha1 * F[k] + L.beta_;
    if (!(r > 0.0)) {
      throw Error(ErrorCode::InversionFailure, fmt::format("non-positive radicand {:.3e} at z = {:.6g}", r, t.z()[k]));
    }
    L.psi_[k] = 1.0 / std::sqrt(r);
    psi3[k] = L.psi_[k] * L.psi_[k] * L.psi_[k];
    F_psi3[k] = F[k] * psi3[k];
  }
  L.Phi_ = numerics::cumulative_simpson(L.psi_, h);
  L.Phi_[0] = 0.0;

  // dG/dalpha1 = -\int F r^{-3/2},  dG/dbeta = -1/2 \int r^{-3/2}.
  const double dG_da = -numerics::simpson(F_psi3, h);
  const double dG_db = -0.5 * numerics::simpson(psi3, h);
  L.dbeta_ = -dG_da / dG_db;

  std::vector<double> q(m);
  L.factor_slope_.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    q[k] = (2.0 * F[k] + L.dbeta_) * psi3[k];
    L.factor_slope_[k] = -0.5 * q[k];
  }
  L.factor_ = numerics::cumulative_simpson(q, h);
  for (double& v : L.factor_) v *= -0.5;

  for (std::size_t k = 1; k < m; ++k) {
    if (!(L.Phi_[k] > L.Phi_[k - 1])) {
      throw Error(ErrorCode::InversionFailure, fmt::format("Phi not increasing at z = {:.6g}", t.z()[k]));
    }
  }
  return L;
}

LagrangeSlice build_lagrange_slice(double alpha1, const VorticitySource& src, std::size_t n, double tol) {
  return build_lagrange_slice(alpha1, std::make_shared<const PrimitiveTable>(src, n), tol);
}

double LagrangeSlice::psi_at(double z) const {
  const double r = 2.0 * alpha1_ * table_->source().primitive(std::clamp(z, 0.0, c())) + beta_;
  return 1.0 / std::sqrt(r);
}

double LagrangeSlice::Phi_at(double zq) const {
  const auto zs = z();
  const std::size_t k = numerics::locate_cell(zs, zq);
  const numerics::HermiteCell cell{zs[k], zs[k + 1], Phi_[k], Phi_[k + 1], psi_[k], psi_[k + 1]};
  return cell.value(std::clamp(zq, 0.0, c()));
}

double LagrangeSlice::z_at(double y2) const {
  if (y2 <= 0.0) return 0.0;
  const std::size_t last = Phi_.size() - 1;
  if (y2 >= Phi_[last]) return c();
  const auto zs = z();
  const std::size_t k = numerics::locate_cell(Phi_, y2);
  const numerics::HermiteCell cell{zs[k], zs[k + 1], Phi_[k], Phi_[k + 1], psi_[k], psi_[k + 1]};
  const double g_lo = Phi_[k] - y2, g_hi = Phi_[k + 1] - y2;
  if (g_lo == 0.0) return zs[k];
  if (g_hi == 0.0) return zs[k + 1];
  return numerics::bracketed_root([&](double zz) { return cell.value(zz) - y2; }, zs[k], zs[k + 1], g_lo, g_hi,
                                  52, 200);
}

double LagrangeSlice::dPhi_dz1_at(double z, double dalpha) const {
  const auto zs = this->z();
  const std::size_t k = numerics::locate_cell(zs, z);
  const numerics::HermiteCell cell{zs[k],      zs[k + 1],          factor_[k],
                                   factor_[k + 1], factor_slope_[k], factor_slope_[k + 1]};
  return cell.value(std::clamp(z, 0.0, c())) * dalpha;
}

SliceSolution invert_to_slice(const LagrangeSlice& L, double y1, std::size_t n_y) {
  if (n_y < 2) throw Error(ErrorCode::InvalidArgument, "invert_to_slice needs at least two intervals");
  const auto& src = L.table().source();
  SliceSolution sol;
  sol.y1 = y1;
  sol.alpha1 = L.alpha1();
  sol.c = L.c();
  sol.beta = L.beta();
  sol.method = SliceMethod::Lagrange;
  sol.y2 = numerics::uniform_grid(0.0, 1.0, n_y);
  sol.phi.resize(n_y + 1);
  sol.dphi.resize(n_y + 1);
  sol.d2phi.resize(n_y + 1);
  for (std::size_t i = 0; i <= n_y; ++i) {
    const double z = (i == 0) ? 0.0 : (i == n_y ? L.c() : L.z_at(sol.y2[i]));
    sol.phi[i] = z;
    sol.dphi[i] = 1.0 / L.psi_at(z);
    sol.d2phi[i] = L.alpha1() * src.fhat(z);
  }
  return sol;
}

std::vector<double> dPhi_dz1(const LagrangeSlice& L, double dalpha1) {
  std::vector<double> out(L.dPhi_factor().begin(), L.dPhi_factor().end());
  for (double& v : out) v *= dalpha1;
  return out;
}

}  // namespace hydronozzle
