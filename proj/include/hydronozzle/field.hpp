#pragma once

// 2-D stream function on the flattened strip and the physical flow built from it.
//
// Every y1-column gets its own slice solve; d(phi)/d(y1) comes from the
// Lagrange identity  phi_{y1} = -phi_{y2} * dPhi/dz1  evaluated at z2 = phi.

#include <cstddef>
#include <vector>

#include "hydronozzle/geometry.hpp"
#include "hydronozzle/lagrange.hpp"
#include "hydronozzle/profiles.hpp"
#include "hydronozzle/slice_solver.hpp"

namespace hydronozzle {

struct AssemblyOptions {
  /// Interval counts; the y1 grid covers [-cutoff, cutoff].
  std::size_t ny1 = 200;
  std::size_t ny2 = 200;
  SliceMethod method = SliceMethod::Lagrange;
  /// z2 table size for the Lagrange quadratures.
  std::size_t nz = 2000;
  double beta_tol = 1e-15;
  PicardOptions picard;
  ShootingOptions shooting;
  /// Retry with shooting when Picard reports NoConvergence.
  bool picard_fallback = true;
};

struct StreamFunctionField {
  double cutoff = 0.0;
  double c = 0.0;
  SliceMethod method = SliceMethod::Lagrange;
  std::vector<double> y1;
  std::vector<double> y2;
  std::vector<SliceSolution> slices;
  /// Row-major (column i = y1 index, row j = y2 index).
  std::vector<double> dphi_dy1;
  /// min over all nodes of d(phi)/d(y2).
  double gamma_bar = 0.0;
  /// Slices that fell back from Picard to shooting.
  std::size_t fallbacks = 0;

  std::size_t columns() const { return y1.size(); }
  std::size_t rows() const { return y2.size(); }
  std::size_t index(std::size_t i, std::size_t j) const { return i * rows() + j; }
  double phi(std::size_t i, std::size_t j) const { return slices[i].phi[j]; }
  double dphi_dy2(std::size_t i, std::size_t j) const { return slices[i].dphi[j]; }
  double dphi_dy1_at(std::size_t i, std::size_t j) const { return dphi_dy1[index(i, j)]; }
};

/// Parallel over y1 columns (OpenMP).
StreamFunctionField assemble(const NozzleGeometry& g, const VorticitySource& src, const AssemblyOptions& opts = {});
/// Single-threaded reference with identical arithmetic.
StreamFunctionField assemble_serial(const NozzleGeometry& g, const VorticitySource& src,
                                    const AssemblyOptions& opts = {});

/// Physical samples on the curvilinear grid x2 = (1 - y2) s0 + y2 s1.
struct FlowField {
  double c = 0.0;
  double gamma_bar = 0.0;
  /// False when the source violates f(0) <= 0 <= f(c).
  bool bounds_certified = true;
  std::vector<double> y1;
  std::vector<double> y2;
  /// Row-major like StreamFunctionField.
  std::vector<double> x1, x2, phi, v1, v2, p, omega;
  /// \int v1 dx2 per column.
  std::vector<double> flux;

  std::size_t columns() const { return y1.size(); }
  std::size_t rows() const { return y2.size(); }
  std::size_t index(std::size_t i, std::size_t j) const { return i * rows() + j; }
};

/// v1 = phi_{y2}/s, v2 = -phi_{y1} + (s0' + y2 s') phi_{y2}/s, p = -v1^2/2 + F(phi),
/// omega = f(phi). Throws NonPositiveV1 if any v1 <= 0. Parallel over columns.
FlowField reconstruct(const StreamFunctionField& field, const NozzleGeometry& g, const VorticitySource& src);
FlowField reconstruct_serial(const StreamFunctionField& field, const NozzleGeometry& g, const VorticitySource& src);

/// Simpson integral of v1 over the column's x2 extent.
double mass_flux_at(const FlowField& flow, std::size_t column);

/// max |phi_a - phi_b| over all nodes; grids must match.
double max_phi_deviation(const StreamFunctionField& a, const StreamFunctionField& b);

}  // namespace hydronozzle
