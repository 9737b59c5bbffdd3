#pragma once

// Run configuration (INI file).
//
//   [profile]     kind = constant | quartic_bump | table
//                 value = 1.0          (constant)
//                 amplitude = 0.2      (quartic_bump: 1 + amplitude (x2 - 1/2)^2)
//                 table = v.csv        (two columns x2, v; path relative to the config)
//   [geometry]    family = strip | tanh | bump | slanted | table
//                 <family parameters: a, sigma, length, amplitude, width, compact, b0, b1>
//                 lower = s0.csv, upper = s1.csv   (family = table)
//   [grid]        ny1 = 200, ny2 = 200, cutoff = 20, nz = 2000
//   [tolerances]  picard, beta, shooting, farfield, flux, shear, residual_order, residual_floor
//   [solver]      method = lagrange | picard | shooting | all
//   [output]      dir = out
//   [fixture]     kind = exponential_nonshear, x_min = 0, x_max = 1   (replaces profile/geometry)

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hydronozzle/geometry.hpp"
#include "hydronozzle/profiles.hpp"
#include "hydronozzle/slice_solver.hpp"

namespace hydronozzle {

struct ProfileSpec {
  std::string kind = "constant";
  double value = 1.0;
  double amplitude = 0.2;
  std::string table;
};

struct GeometrySpec {
  std::string family = "strip";
  std::map<std::string, double> params;
  std::string lower_table, upper_table;
};

struct Tolerances {
  double picard = 1e-13;
  double beta = 1e-15;
  double shooting = 1e-12;
  double farfield = 1e-6;
  double flux = 1e-8;
  double shear = 1e-10;
  double residual_order = 1.8;
  /// Residuals at or below this level count as converged regardless of order.
  double residual_floor = 1e-9;
};

struct FixtureSpec {
  std::string kind = "exponential_nonshear";
  double x_min = 0.0;
  double x_max = 1.0;
};

struct RunConfig {
  ProfileSpec profile;
  GeometrySpec geometry;
  std::size_t ny1 = 200;
  std::size_t ny2 = 200;
  std::size_t nz = 2000;
  double cutoff = 20.0;
  Tolerances tol;
  /// "lagrange", "picard", "shooting" or "all".
  std::string solver = "lagrange";
  std::string out_dir = "out";
  std::optional<FixtureSpec> fixture;
  /// Directory relative table paths are resolved against.
  std::filesystem::path base_dir = ".";
};

/// Throws ConfigError on unreadable files, unknown sections or keys, and bad values.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = ".");

/// Throws ConfigError: "grid too coarse" if ny1 or ny2 < 50, non-positive
/// tolerances or cutoff, unknown solver.
void validate(const RunConfig& cfg);

/// Methods selected by cfg.solver ("all" expands to all three, Lagrange first).
std::vector<SliceMethod> solver_methods(const std::string& solver);

IncomingProfile build_profile(const RunConfig& cfg);
NozzleGeometry build_geometry(const RunConfig& cfg);

}  // namespace hydronozzle
