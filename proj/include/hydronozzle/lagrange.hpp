#pragma once

// Euler-Lagrange transformed slice solver.
//
// Swapping the roles of y2 and phi = z2 turns each slice problem into
//
//   Phi_{z2 z2} + alpha1 f(z2) (Phi_{z2})^3 = 0,   Phi(0) = 0,  Phi(c) = 1,
//
// whose derivative psi = Phi_{z2} is explicit:
//
//   psi(z2) = (2 alpha1 F(z2) + beta)^{-1/2},   F(z2) = \int_0^{z2} f.
//
// beta is fixed by the normalization \int_0^c psi = 1. The y1-derivative of
// Phi follows from the implicit function theorem applied to that
// normalization, so d(phi)/d(y1) never needs differencing across slices.

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "hydronozzle/profiles.hpp"
#include "hydronozzle/slice_solver.hpp"

namespace hydronozzle {

/// F = \int_0^z f on a uniform z-grid over [0, c]. Built once per source and
/// shared by every slice.
class PrimitiveTable {
 public:
  /// Odd n is rounded up so composite Simpson covers the whole table.
  PrimitiveTable(VorticitySource src, std::size_t n = 2000);

  const VorticitySource& source() const { return src_; }
  double c() const { return src_.c(); }
  std::size_t intervals() const { return z_.size() - 1; }
  double spacing() const { return h_; }
  std::span<const double> z() const { return z_; }
  std::span<const double> F() const { return F_; }
  double F_min() const { return F_min_; }

 private:
  VorticitySource src_;
  double h_ = 0.0;
  std::vector<double> z_;
  std::vector<double> F_;
  double F_min_ = 0.0;
};

/// Normalization integral \int_0^c (2 alpha1 F + alpha2)^{-1/2} dz.
double normalization_integral(double alpha1, double alpha2, const PrimitiveTable& table);

/// The unique beta with normalization_integral(alpha1, beta) = 1. `tol` is
/// the relative bracket width on beta.
double solve_beta(double alpha1, const PrimitiveTable& table, double tol = 1e-15);
double solve_beta(double alpha1, const VorticitySource& src, double tol = 1e-15, std::size_t n = 2000);

class LagrangeSlice {
 public:
  double alpha1() const { return alpha1_; }
  double beta() const { return beta_; }
  /// d(beta)/d(alpha1) from the implicit function theorem.
  double dbeta_dalpha() const { return dbeta_; }
  double c() const { return table_->c(); }
  const PrimitiveTable& table() const { return *table_; }

  std::span<const double> z() const { return table_->z(); }
  std::span<const double> Fcum() const { return table_->F(); }
  std::span<const double> Phi() const { return Phi_; }
  std::span<const double> psi() const { return psi_; }
  /// z2-profile multiplying (s^2)' in d(Phi)/d(z1).
  std::span<const double> dPhi_factor() const { return factor_; }

  /// Exact psi at any z in [0, c].
  double psi_at(double z) const;
  /// Phi at any z (cubic Hermite on the table, slopes psi).
  double Phi_at(double z) const;
  /// z in [0, c] with Phi(z) = y2.
  double z_at(double y2) const;
  /// d(Phi)/d(z1) at z for a wall factor (s^2)' = dalpha.
  double dPhi_dz1_at(double z, double dalpha) const;

 private:
  friend LagrangeSlice build_lagrange_slice(double, std::shared_ptr<const PrimitiveTable>, double);

  std::shared_ptr<const PrimitiveTable> table_;
  double alpha1_ = 1.0, beta_ = 1.0, dbeta_ = 0.0;
  std::vector<double> Phi_, psi_, factor_, factor_slope_;
};

LagrangeSlice build_lagrange_slice(double alpha1, std::shared_ptr<const PrimitiveTable> table, double tol = 1e-15);
LagrangeSlice build_lagrange_slice(double alpha1, const VorticitySource& src, std::size_t n = 2000,
                                   double tol = 1e-15);

/// phi on n_y + 1 uniform y2-nodes by inverting Phi: phi = z, phi' = 1/psi(z),
/// phi'' = alpha1 f(z). Throws InversionFailure if Phi is not increasing.
SliceSolution invert_to_slice(const LagrangeSlice& slice, double y1, std::size_t n_y);

/// d(Phi)/d(z1) on the z-table for (s^2)' = dalpha1.
std::vector<double> dPhi_dz1(const LagrangeSlice& slice, double dalpha1);

}  // namespace hydronozzle
