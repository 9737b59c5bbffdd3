#include "hydronozzle/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "hydronozzle/errors.hpp"
#include "hydronozzle/io.hpp"

namespace hydronozzle {

namespace {

using boost::property_tree::ptree;

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::ConfigError, msg); }

double to_number(const std::string& section, const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    config_error(fmt::format("[{}] {} = '{}' is not a number", section, key, text));
  }
}

std::size_t to_count(const std::string& section, const std::string& key, const std::string& text) {
  const double v = to_number(section, key, text);
  if (!(v >= 0.0) || v != std::floor(v)) config_error(fmt::format("[{}] {} must be a non-negative integer", section, key));
  return static_cast<std::size_t>(v);
}

double to_flag(const std::string& section, const std::string& key, const std::string& text) {
  if (text == "true" || text == "yes" || text == "on") return 1.0;
  if (text == "false" || text == "no" || text == "off") return 0.0;
  return to_number(section, key, text);
}

}  // namespace

RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
  ptree tree;
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    config_error(fmt::format("malformed config: {}", e.message()));
  }

  RunConfig cfg;
  cfg.base_dir = base_dir;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) config_error(fmt::format("key '{}' outside any section", section));
    for (const auto& [key, node] : body) {
      const std::string value = node.get_value<std::string>();
      if (section == "profile") {
        if (key == "kind") cfg.profile.kind = value;
        else if (key == "value") cfg.profile.value = to_number(section, key, value);
        else if (key == "amplitude") cfg.profile.amplitude = to_number(section, key, value);
        else if (key == "table") cfg.profile.table = value;
        else config_error(fmt::format("unknown key [profile] {}", key));
      } else if (section == "geometry") {
        if (key == "family") cfg.geometry.family = value;
        else if (key == "lower") cfg.geometry.lower_table = value;
        else if (key == "upper") cfg.geometry.upper_table = value;
        else if (key == "compact") cfg.geometry.params[key] = to_flag(section, key, value);
        else cfg.geometry.params[key] = to_number(section, key, value);
      } else if (section == "grid") {
        if (key == "ny1") cfg.ny1 = to_count(section, key, value);
        else if (key == "ny2") cfg.ny2 = to_count(section, key, value);
        else if (key == "nz") cfg.nz = to_count(section, key, value);
        else if (key == "cutoff") cfg.cutoff = to_number(section, key, value);
        else config_error(fmt::format("unknown key [grid] {}", key));
      } else if (section == "tolerances") {
        static const std::map<std::string, double Tolerances::*> fields = {
            {"picard", &Tolerances::picard},           {"beta", &Tolerances::beta},
            {"shooting", &Tolerances::shooting},       {"farfield", &Tolerances::farfield},
            {"flux", &Tolerances::flux},               {"shear", &Tolerances::shear},
            {"residual_order", &Tolerances::residual_order}, {"residual_floor", &Tolerances::residual_floor}};
        const auto it = fields.find(key);
        if (it == fields.end()) config_error(fmt::format("unknown key [tolerances] {}", key));
        cfg.tol.*(it->second) = to_number(section, key, value);
      } else if (section == "solver") {
        if (key == "method") cfg.solver = value;
        else config_error(fmt::format("unknown key [solver] {}", key));
      } else if (section == "output") {
        if (key == "dir") cfg.out_dir = value;
        else config_error(fmt::format("unknown key [output] {}", key));
      } else if (section == "fixture") {
        if (!cfg.fixture) cfg.fixture.emplace();
        if (key == "kind") cfg.fixture->kind = value;
        else if (key == "x_min") cfg.fixture->x_min = to_number(section, key, value);
        else if (key == "x_max") cfg.fixture->x_max = to_number(section, key, value);
        else config_error(fmt::format("unknown key [fixture] {}", key));
      } else {
        config_error(fmt::format("unknown section [{}]", section));
      }
    }
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) config_error(fmt::format("cannot open config '{}'", path.string()));
  return parse_config(in, path.has_parent_path() ? path.parent_path() : std::filesystem::path("."));
}

std::vector<SliceMethod> solver_methods(const std::string& solver) {
  if (solver == "lagrange") return {SliceMethod::Lagrange};
  if (solver == "picard") return {SliceMethod::Picard};
  if (solver == "shooting") return {SliceMethod::Shooting};
  if (solver == "all") return {SliceMethod::Lagrange, SliceMethod::Picard, SliceMethod::Shooting};
  config_error(fmt::format("unknown solver '{}' (expected lagrange, picard, shooting or all)", solver));
}

void validate(const RunConfig& cfg) {
  if (cfg.ny1 < 50 || cfg.ny2 < 50) {
    config_error(fmt::format("grid too coarse: ny1 = {}, ny2 = {} (both must be >= 50)", cfg.ny1, cfg.ny2));
  }
  if (cfg.nz < 50) config_error(fmt::format("grid too coarse: nz = {} (must be >= 50)", cfg.nz));
  if (!(cfg.cutoff > 0.0)) config_error(fmt::format("cutoff must be positive, got {}", cfg.cutoff));
  const Tolerances& t = cfg.tol;
  for (const auto& [name, v] : std::initializer_list<std::pair<const char*, double>>{
           {"picard", t.picard}, {"beta", t.beta}, {"shooting", t.shooting}, {"farfield", t.farfield},
           {"flux", t.flux}, {"shear", t.shear}, {"residual_order", t.residual_order},
           {"residual_floor", t.residual_floor}}) {
    if (!(v > 0.0)) config_error(fmt::format("tolerance '{}' must be positive, got {}", name, v));
  }
  solver_methods(cfg.solver);
  if (cfg.fixture) {
    if (cfg.fixture->kind != "exponential_nonshear") config_error(fmt::format("unknown fixture '{}'", cfg.fixture->kind));
    if (!(cfg.fixture->x_max > cfg.fixture->x_min)) config_error("fixture needs x_max > x_min");
  }
}

IncomingProfile build_profile(const RunConfig& cfg) {
  const ProfileSpec& p = cfg.profile;
  if (p.kind == "constant") return IncomingProfile::constant(p.value);
  if (p.kind == "quartic_bump") return IncomingProfile::quartic_bump(p.amplitude);
  if (p.kind == "table") {
    if (p.table.empty()) config_error("[profile] kind = table needs 'table'");
    auto [x, v] = io::read_two_columns(cfg.base_dir / p.table);
    return IncomingProfile::from_samples(std::move(x), std::move(v));
  }
  config_error(fmt::format("unknown profile kind '{}'", p.kind));
}

NozzleGeometry build_geometry(const RunConfig& cfg) {
  const GeometrySpec& g = cfg.geometry;
  if (g.family == "table") {
    if (g.lower_table.empty() || g.upper_table.empty()) config_error("[geometry] family = table needs lower and upper");
    auto [xl, sl] = io::read_two_columns(cfg.base_dir / g.lower_table);
    auto [xu, su] = io::read_two_columns(cfg.base_dir / g.upper_table);
    return NozzleGeometry::from_tables(std::move(xl), std::move(sl), std::move(xu), std::move(su), cfg.cutoff);
  }
  return make_geometry(g.family, g.params, cfg.cutoff);
}

}  // namespace hydronozzle
