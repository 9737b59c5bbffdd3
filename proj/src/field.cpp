#include "hydronozzle/field.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <memory>

#include <fmt/format.h>

#include "hydronozzle/errors.hpp"
#include "hydronozzle/numerics.hpp"

namespace hydronozzle {

namespace {

struct ColumnResult {
  SliceSolution slice;
  std::vector<double> dphi_dy1;
  bool fell_back = false;
};

ColumnResult solve_column(double y1, const NozzleGeometry& g, const VorticitySource& src,
                          const std::shared_ptr<const PrimitiveTable>& table, const AssemblyOptions& opts) {
  const double alpha = g.alpha(y1);
  const double dalpha = g.alpha_slope(y1);
  const LagrangeSlice L = build_lagrange_slice(alpha, table, opts.beta_tol);

  ColumnResult out;
  switch (opts.method) {
    case SliceMethod::Lagrange:
      out.slice = invert_to_slice(L, y1, opts.ny2);
      break;
    case SliceMethod::Picard: {
      PicardOptions po = opts.picard;
      po.n = opts.ny2;
      try {
        out.slice = picard_solve(alpha, src, po);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NoConvergence || !opts.picard_fallback) throw;
        ShootingOptions so = opts.shooting;
        so.n = opts.ny2;
        out.slice = shooting_solve(alpha, src, so);
        out.fell_back = true;
      }
      break;
    }
    case SliceMethod::Shooting: {
      ShootingOptions so = opts.shooting;
      so.n = opts.ny2;
      out.slice = shooting_solve(alpha, src, so);
      break;
    }
  }
  out.slice.y1 = y1;
  out.slice.beta = L.beta();

  const std::size_t m = out.slice.phi.size();
  out.dphi_dy1.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    out.dphi_dy1[j] = -out.slice.dphi[j] * L.dPhi_dz1_at(out.slice.phi[j], dalpha);
  }
  return out;
}

StreamFunctionField prepare(const NozzleGeometry& g, const VorticitySource& src, const AssemblyOptions& opts) {
  if (opts.ny1 < 2 || opts.ny2 < 2) throw Error(ErrorCode::InvalidArgument, "assembly needs at least two intervals");
  StreamFunctionField field;
  field.cutoff = g.cutoff();
  field.c = src.c();
  field.method = opts.method;
  field.y1 = numerics::uniform_grid(-g.cutoff(), g.cutoff(), opts.ny1);
  field.y2 = numerics::uniform_grid(0.0, 1.0, opts.ny2);
  field.slices.resize(field.y1.size());
  field.dphi_dy1.resize(field.y1.size() * field.y2.size());
  return field;
}

void store(StreamFunctionField& field, std::size_t i, ColumnResult&& col) {
  std::copy(col.dphi_dy1.begin(), col.dphi_dy1.end(), field.dphi_dy1.begin() + static_cast<long>(field.index(i, 0)));
  field.slices[i] = std::move(col.slice);
  if (col.fell_back) ++field.fallbacks;
}

void finish(StreamFunctionField& field) {
  double gamma = std::numeric_limits<double>::infinity();
  for (const auto& s : field.slices) gamma = std::min(gamma, *std::min_element(s.dphi.begin(), s.dphi.end()));
  field.gamma_bar = gamma;
}

}  // namespace

StreamFunctionField assemble(const NozzleGeometry& g, const VorticitySource& src, const AssemblyOptions& opts) {
  StreamFunctionField field = prepare(g, src, opts);
  const auto table = std::make_shared<const PrimitiveTable>(src, opts.nz);
  const auto n = static_cast<long>(field.columns());
  std::vector<ColumnResult> cols(field.columns());
  std::vector<std::exception_ptr> errors(field.columns());

#pragma omp parallel for schedule(dynamic, 4)
  for (long i = 0; i < n; ++i) {
    try {
      cols[i] = solve_column(field.y1[i], g, src, table, opts);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (std::size_t i = 0; i < field.columns(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    store(field, i, std::move(cols[i]));
  }
  finish(field);
  return field;
}

StreamFunctionField assemble_serial(const NozzleGeometry& g, const VorticitySource& src,
                                    const AssemblyOptions& opts) {
  StreamFunctionField field = prepare(g, src, opts);
  const auto table = std::make_shared<const PrimitiveTable>(src, opts.nz);
  for (std::size_t i = 0; i < field.columns(); ++i) store(field, i, solve_column(field.y1[i], g, src, table, opts));
  finish(field);
  return field;
}

namespace {

FlowField prepare_flow(const StreamFunctionField& field, const VorticitySource& src) {
  FlowField flow;
  flow.c = field.c;
  flow.gamma_bar = field.gamma_bar;
  flow.bounds_certified = src.sign_condition_ok();
  flow.y1 = field.y1;
  flow.y2 = field.y2;
  const std::size_t total = field.columns() * field.rows();
  for (auto* v : {&flow.x1, &flow.x2, &flow.phi, &flow.v1, &flow.v2, &flow.p, &flow.omega}) v->resize(total);
  flow.flux.resize(field.columns());
  return flow;
}

// Returns false if some v1 <= 0.
bool reconstruct_column(std::size_t i, const StreamFunctionField& field, const NozzleGeometry& g,
                        const VorticitySource& src, FlowField& flow) {
  const double x1 = field.y1[i];
  const double s0 = g.lower(x1), s1 = g.upper(x1);
  const double s = s1 - s0;
  const double ds0 = g.lower_slope(x1), ds = g.width_slope(x1);
  bool ok = true;
  for (std::size_t j = 0; j < field.rows(); ++j) {
    const std::size_t k = flow.index(i, j);
    const double y2 = field.y2[j];
    const double phi = field.phi(i, j);
    const double dy2 = field.dphi_dy2(i, j);
    const double v1 = dy2 / s;
    flow.x1[k] = x1;
    flow.x2[k] = (j + 1 == field.rows()) ? s1 : (1.0 - y2) * s0 + y2 * s1;
    if (j == 0) flow.x2[k] = s0;
    flow.phi[k] = phi;
    flow.v1[k] = v1;
    flow.v2[k] = -field.dphi_dy1_at(i, j) + (ds0 + y2 * ds) * v1;
    flow.p[k] = -0.5 * v1 * v1 + src.primitive(phi);
    flow.omega[k] = src.fhat(phi);
    if (!(v1 > 0.0)) ok = false;
  }
  flow.flux[i] = mass_flux_at(flow, i);
  return ok;
}

[[noreturn]] void throw_nonpositive(const FlowField& flow) {
  for (std::size_t k = 0; k < flow.v1.size(); ++k) {
    if (!(flow.v1[k] > 0.0)) {
      throw Error(ErrorCode::NonPositiveV1,
                  fmt::format("v1 = {:.6g} at (x1, x2) = ({:.6g}, {:.6g})", flow.v1[k], flow.x1[k], flow.x2[k]));
    }
  }
  throw Error(ErrorCode::NonPositiveV1, "v1 <= 0");
}

}  // namespace

FlowField reconstruct(const StreamFunctionField& field, const NozzleGeometry& g, const VorticitySource& src) {
  FlowField flow = prepare_flow(field, src);
  const auto n = static_cast<long>(field.columns());
  bool ok = true;
#pragma omp parallel for reduction(&& : ok)
  for (long i = 0; i < n; ++i) ok = reconstruct_column(static_cast<std::size_t>(i), field, g, src, flow) && ok;
  if (!ok) throw_nonpositive(flow);
  return flow;
}

FlowField reconstruct_serial(const StreamFunctionField& field, const NozzleGeometry& g, const VorticitySource& src) {
  FlowField flow = prepare_flow(field, src);
  bool ok = true;
  for (std::size_t i = 0; i < field.columns(); ++i) ok = reconstruct_column(i, field, g, src, flow) && ok;
  if (!ok) throw_nonpositive(flow);
  return flow;
}

double mass_flux_at(const FlowField& flow, std::size_t column) {
  if (column >= flow.columns()) {
    throw Error(ErrorCode::OutOfRange, fmt::format("column {} outside [0, {})", column, flow.columns()));
  }
  const std::size_t m = flow.rows();
  const std::size_t k0 = flow.index(column, 0);
  const double h = (flow.x2[k0 + m - 1] - flow.x2[k0]) / static_cast<double>(m - 1);
  return numerics::simpson(std::span<const double>(flow.v1).subspan(k0, m), h);
}

double max_phi_deviation(const StreamFunctionField& a, const StreamFunctionField& b) {
  if (a.columns() != b.columns() || a.rows() != b.rows()) {
    throw Error(ErrorCode::InvalidArgument, "fields live on different grids");
  }
  double dev = 0.0;
  for (std::size_t i = 0; i < a.columns(); ++i) {
    for (std::size_t j = 0; j < a.rows(); ++j) dev = std::max(dev, std::abs(a.phi(i, j) - b.phi(i, j)));
  }
  return dev;
}

}  // namespace hydronozzle
