#include "hydronozzle/commands.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "hydronozzle/analysis.hpp"
#include "hydronozzle/io.hpp"
#include "hydronozzle/kinematics.hpp"

namespace hydronozzle {

using nlohmann::json;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::InvalidArgument:
    case ErrorCode::NonPositiveProfile:
    case ErrorCode::DegenerateWidth:
    case ErrorCode::OutsideNozzle:
    case ErrorCode::OutsideInterior:
    case ErrorCode::OutOfRange:
    case ErrorCode::IoError:
      return kExitConfig;
    default:
      return kExitSolver;
  }
}

namespace {

json norms_json(const Norms& n) { return {{"sup", n.sup}, {"l2", n.l2}}; }

json residuals_json(const ResidualNorms& r) {
  return {{"momentum", norms_json(r.momentum)},
          {"hydrostatic", norms_json(r.hydrostatic)},
          {"divergence", norms_json(r.divergence)},
          {"vorticity", norms_json(r.vorticity)}};
}

json shear_json(const ShearReport& s) {
  return {{"status", to_string(s.status)}, {"min_speed", s.min_speed}, {"v2_sup", s.v2_sup},
          {"spread", s.spread},            {"worst_x1", s.worst_x1},   {"certified", s.certified},
          {"message", s.message}};
}

bool is_strip(const RunConfig& cfg) { return cfg.fixture.has_value() || cfg.geometry.family == "strip"; }

json flux_json(const FlowField& flow) {
  const auto [lo, hi] = std::minmax_element(flow.flux.begin(), flow.flux.end());
  double dev = 0.0;
  for (double f : flow.flux) dev = std::max(dev, std::abs(f - flow.c));
  return {{"min", *lo}, {"max", *hi}, {"max_rel_dev", flow.c != 0.0 ? dev / std::abs(flow.c) : dev}};
}

double pressure_column_spread(const FlowField& flow) {
  double spread = 0.0;
  for (std::size_t i = 0; i < flow.columns(); ++i) {
    const auto first = flow.p.begin() + static_cast<long>(flow.index(i, 0));
    const auto [lo, hi] = std::minmax_element(first, first + static_cast<long>(flow.rows()));
    spread = std::max(spread, (*hi - *lo) / (1.0 + std::abs(*lo)));
  }
  return spread;
}

AssemblyOptions assembly_options(const RunConfig& cfg, SliceMethod method) {
  AssemblyOptions opts;
  opts.ny1 = cfg.ny1;
  opts.ny2 = cfg.ny2;
  opts.nz = cfg.nz;
  opts.method = method;
  opts.beta_tol = cfg.tol.beta;
  opts.picard.tol = cfg.tol.picard;
  opts.shooting.tol = cfg.tol.shooting;
  return opts;
}

// Every other node in both directions; nullopt if an interval count is odd.
std::optional<FlowField> coarsen(const FlowField& f) {
  if (f.columns() % 2 == 0 || f.rows() % 2 == 0 || f.columns() < 7 || f.rows() < 7) return std::nullopt;
  FlowField c;
  c.c = f.c;
  for (std::size_t i = 0; i < f.columns(); i += 2) c.y1.push_back(f.y1[i]);
  for (std::size_t j = 0; j < f.rows(); j += 2) c.y2.push_back(f.y2[j]);
  for (std::size_t i = 0; i < f.columns(); i += 2) {
    for (std::size_t j = 0; j < f.rows(); j += 2) {
      const std::size_t k = f.index(i, j);
      c.x1.push_back(f.x1[k]);
      c.x2.push_back(f.x2[k]);
      c.phi.push_back(f.phi[k]);
      c.v1.push_back(f.v1[k]);
      c.v2.push_back(f.v2[k]);
      c.p.push_back(f.p[k]);
      c.omega.push_back(f.omega[k]);
    }
  }
  return c;
}

CheckResult named(std::string name) {
  CheckResult c;
  c.name = std::move(name);
  return c;
}

}  // namespace

SolveOutcome run_solve(const RunConfig& cfg) {
  validate(cfg);
  SolveOutcome out;
  json& s = out.summary;
  s["solver"] = cfg.solver;
  s["grid"] = {{"ny1", cfg.ny1}, {"ny2", cfg.ny2}, {"nz", cfg.nz}, {"cutoff", cfg.cutoff}};

  if (cfg.fixture) {
    const ExponentialNonShear fx;
    out.flow = fx.grid(cfg.fixture->x_min, cfg.fixture->x_max, cfg.ny1, cfg.ny2);
    double worst = 0.0;
    for (std::size_t k = 0; k < out.flow.x1.size(); ++k) {
      const PointResidual r = fx.residual_at(out.flow.x1[k], out.flow.x2[k]);
      worst = std::max({worst, std::abs(r.momentum), std::abs(r.hydrostatic), std::abs(r.divergence),
                        std::abs(r.vorticity)});
    }
    s["fixture"] = cfg.fixture->kind;
    s["c"] = out.flow.c;
    s["analytic_residual_sup"] = worst;
    s["residuals"] = residuals_json(residuals(out.flow));
    s["shear"] = shear_json(liouville_check(out.flow, 1e-6, cfg.tol.shear));
    return out;
  }

  const IncomingProfile profile = build_profile(cfg);
  const VorticitySource src = VorticitySource::from_profile(profile);
  const NozzleGeometry g = build_geometry(cfg);
  s["profile"] = profile.name();
  s["geometry"] = g.family();
  s["warnings"] = profile.warnings();

  json assumptions = json::object();
  for (const auto& clause : validate_assumptions(g, 1e-8).clauses) {
    assumptions[clause.clause] = {{"passed", clause.passed}, {"residual", clause.residual}};
  }
  s["assumptions"] = assumptions;

  const auto methods = solver_methods(cfg.solver);
  std::vector<StreamFunctionField> fields;
  for (SliceMethod m : methods) fields.push_back(assemble(g, src, assembly_options(cfg, m)));
  if (methods.size() > 1) {
    json cross = json::object();
    double worst = 0.0;
    for (std::size_t k = 1; k < fields.size(); ++k) {
      const double d = max_phi_deviation(fields[0], fields[k]);
      cross[fmt::format("{}_vs_lagrange", to_string(methods[k]))] = d;
      worst = std::max(worst, d);
    }
    cross["max"] = worst;
    cross["picard_fallbacks"] = fields[1].fallbacks;
    s["cross_method"] = cross;
  }

  out.flow = reconstruct(fields[0], g, src);
  out.field = std::move(fields[0]);
  const FlowField& flow = out.flow;
  s["c"] = flow.c;
  s["gamma_bar"] = flow.gamma_bar;
  s["bounds_certified"] = flow.bounds_certified;
  s["flux"] = flux_json(flow);
  s["pressure_column_spread"] = pressure_column_spread(flow);
  s["residuals"] = residuals_json(residuals(flow));
  if (is_strip(cfg)) s["shear"] = shear_json(liouville_check(flow, 1e-6, cfg.tol.shear));

  const FarFieldState up = farfield_state(src, g, FarFieldSide::Upstream, cfg.nz);
  const FarFieldState down = farfield_state(src, g, FarFieldSide::Downstream, cfg.nz);
  const ConvergenceReport rep = convergence_report(flow, up, down, cfg.tol.farfield);
  s["farfield"] = {{"upstream_err", rep.upstream_err}, {"downstream_err", rep.downstream_err}};
  return out;
}

std::vector<CheckResult> verify_flow(const RunConfig& cfg, const FlowField& flow) {
  std::vector<CheckResult> checks;
  const bool fixture = cfg.fixture.has_value();

  if (!fixture) {
    CheckResult flux = named("flux");
    for (double f : flow.flux) flux.value = std::max(flux.value, std::abs(f - flow.c) / flow.c);
    flux.passed = flux.value <= cfg.tol.flux;
    flux.detail = fmt::format("max relative flux deviation {:.3e}", flux.value);
    checks.push_back(flux);

    CheckResult mono = named("monotonicity");
    mono.value = *std::min_element(flow.v1.begin(), flow.v1.end());
    mono.passed = mono.value > 0.0;
    mono.detail = fmt::format("min v1 = {:.6g}", mono.value);
    checks.push_back(mono);

    CheckResult bounds = named("bounds");
    if (!flow.bounds_certified) {
      bounds.applicable = false;
      bounds.detail = "sign condition violated: 0 <= phi <= c not certified";
    } else {
      double worst = 0.0;
      for (double phi : flow.phi) worst = std::max({worst, -phi, phi - flow.c});
      bool walls = true;
      for (std::size_t i = 0; i < flow.columns(); ++i) {
        walls = walls && flow.phi[flow.index(i, 0)] == 0.0 && flow.phi[flow.index(i, flow.rows() - 1)] == flow.c;
      }
      bounds.value = std::max(worst, 0.0);
      bounds.passed = worst <= 0.0 && walls;
      bounds.detail = walls ? fmt::format("max excursion {:.3e}", bounds.value) : "wall values not exact";
    }
    checks.push_back(bounds);
  }

  if (fixture) {
    const ExponentialNonShear fx;
    double worst = 0.0;
    for (std::size_t k = 0; k < flow.x1.size(); ++k) {
      const PointResidual r = fx.residual_at(flow.x1[k], flow.x2[k]);
      worst = std::max({worst, std::abs(r.momentum), std::abs(r.hydrostatic), std::abs(r.divergence),
                        std::abs(r.vorticity)});
    }
    for (const char* name : {"residual_momentum", "residual_hydrostatic", "residual_divergence", "residual_vorticity"}) {
      CheckResult c = named(name);
      c.value = worst;
      c.passed = worst <= 1e-12;
      c.detail = fmt::format("analytic pointwise residual {:.3e}", worst);
      checks.push_back(c);
    }
  } else {
    const ResidualNorms fine = residuals(flow);
    const auto coarse_flow = coarsen(flow);
    const std::optional<ResidualNorms> coarse =
        coarse_flow ? std::optional<ResidualNorms>(residuals(*coarse_flow)) : std::nullopt;
    auto add = [&](const char* name, Norms ResidualNorms::*member) {
      CheckResult c = named(name);
      const double rf = (fine.*member).sup;
      c.value = rf;
      if (rf <= cfg.tol.residual_floor) {
        c.detail = fmt::format("sup {:.3e} at round-off floor", rf);
      } else if (coarse) {
        const double order = std::log2(((*coarse).*member).sup / rf);
        c.passed = order >= cfg.tol.residual_order;
        c.detail = fmt::format("sup {:.3e}, observed order {:.3f}", rf, order);
      } else {
        c.passed = false;
        c.detail = fmt::format("sup {:.3e} above floor and no 2h grid (odd interval count)", rf);
      }
      checks.push_back(c);
    };
    add("residual_momentum", &ResidualNorms::momentum);
    add("residual_hydrostatic", &ResidualNorms::hydrostatic);
    add("residual_divergence", &ResidualNorms::divergence);
    add("residual_vorticity", &ResidualNorms::vorticity);
  }

  if (is_strip(cfg)) {
    const ShearReport sh = liouville_check(flow, 1e-6, cfg.tol.shear);
    CheckResult c = named("shear");
    c.applicable = sh.status == ShearStatus::ShearConfirmed || sh.status == ShearStatus::ShearViolated;
    c.passed = sh.status != ShearStatus::ShearViolated;
    c.value = std::max(sh.v2_sup, sh.spread);
    c.detail = fmt::format("{}: {}", to_string(sh.status), sh.message);
    checks.push_back(c);
  }

  if (!fixture) {
    const VorticitySource src = VorticitySource::from_profile(build_profile(cfg));
    const NozzleGeometry g = build_geometry(cfg);
    const ConvergenceReport rep =
        convergence_report(flow, farfield_state(src, g, FarFieldSide::Upstream, cfg.nz),
                           farfield_state(src, g, FarFieldSide::Downstream, cfg.nz), cfg.tol.farfield);
    checks.push_back({"farfield_upstream", rep.upstream_ok, true, rep.upstream_err,
                      fmt::format("core error at x1 = -X: {:.3e}", rep.upstream_err)});
    checks.push_back({"farfield_downstream", rep.downstream_ok, true, rep.downstream_err,
                      fmt::format("core error at x1 = +X: {:.3e}", rep.downstream_err)});
  }
  return checks;
}

int cmd_solve(const RunConfig& cfg) {
  const SolveOutcome out = run_solve(cfg);
  const std::filesystem::path dir = cfg.out_dir;
  io::write_field_csv(dir / "field.csv", out.flow);
  io::write_json(dir / "summary.json", out.summary);
  if (out.summary.contains("cross_method")) io::write_json(dir / "cross_method.json", out.summary["cross_method"]);
  fmt::print("wrote {}/field.csv and {}/summary.json\n", dir.string(), dir.string());
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, const std::optional<std::filesystem::path>& from) {
  validate(cfg);
  FlowField flow;
  if (from) {
    flow = io::read_field_csv(*from / "field.csv");
    const json summary = io::read_json(*from / "summary.json");
    flow.c = summary.value("c", 0.0);
    flow.bounds_certified = summary.value("bounds_certified", true);
  } else {
    flow = run_solve(cfg).flow;
  }
  const auto checks = verify_flow(cfg, flow);

  json report = json::array();
  std::vector<std::string> failing;
  for (const auto& c : checks) {
    report.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"applicable", c.applicable},
                      {"value", c.value},
                      {"detail", c.detail}});
    fmt::print("{:<22} {:<5} {}\n", c.name, !c.applicable ? "n/a" : (c.passed ? "ok" : "FAIL"), c.detail);
    if (!c.passed) failing.push_back(c.name);
  }
  io::write_json(std::filesystem::path(cfg.out_dir) / "verify.json", {{"checks", report}, {"failing", failing}});
  if (!failing.empty()) {
    std::string list;
    for (const auto& f : failing) list += (list.empty() ? "" : ", ") + f;
    fmt::print(stderr, "verification failed: {}\n", list);
    return kExitVerifyFailed;
  }
  return kExitOk;
}

namespace {

std::vector<PhysicalPoint> parse_seeds(const std::string& text) {
  std::vector<PhysicalPoint> seeds;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.empty()) continue;
    const auto comma = item.find(',');
    if (comma == std::string::npos) throw Error(ErrorCode::ConfigError, fmt::format("seed '{}' is not x1,x2", item));
    try {
      seeds.push_back({std::stod(item.substr(0, comma)), std::stod(item.substr(comma + 1))});
    } catch (const std::exception&) {
      throw Error(ErrorCode::ConfigError, fmt::format("seed '{}' is not numeric", item));
    }
  }
  if (seeds.empty()) throw Error(ErrorCode::ConfigError, "no seeds given");
  return seeds;
}

}  // namespace

int cmd_trace(const RunConfig& cfg, const std::string& seed_text, double t_max, double step,
              const std::string& sampler_kind) {
  validate(cfg);
  const auto seeds = parse_seeds(seed_text);
  if (sampler_kind != "slice" && sampler_kind != "bilinear") {
    throw Error(ErrorCode::ConfigError, fmt::format("unknown sampler '{}'", sampler_kind));
  }

  std::unique_ptr<FlowSampler> sampler;
  std::optional<IncomingProfile> profile;
  if (cfg.fixture) {
    const ExponentialNonShear fx;
    sampler = std::make_unique<AnalyticFlowSampler>(
        NozzleGeometry::strip(cfg.cutoff), [fx](double a, double b) { return fx.sample(a, b); }, cfg.fixture->x_min,
        cfg.fixture->x_max);
  } else {
    profile = build_profile(cfg);
    const VorticitySource src = VorticitySource::from_profile(*profile);
    const NozzleGeometry g = build_geometry(cfg);
    if (sampler_kind == "slice") {
      sampler = std::make_unique<SliceFlowSampler>(g, src, cfg.nz, cfg.tol.beta);
    } else {
      sampler = std::make_unique<BilinearFlowSampler>(g, run_solve(cfg).flow);
    }
  }

  TraceOptions opts;
  opts.t_max = t_max;
  opts.step = step;
  const std::filesystem::path dir = cfg.out_dir;
  json entries = json::array();
  std::size_t ok = 0;
  for (std::size_t k = 0; k < seeds.size(); ++k) {
    json e = {{"seed", {seeds[k].x1, seeds[k].x2}}};
    try {
      const PathTrace tr = trace_streamline(*sampler, seeds[k], opts);
      const std::string name = fmt::format("trace_{:03d}.csv", k);
      io::write_trace_csv(dir / name, tr);
      e["file"] = name;
      e["end"] = to_string(tr.end);
      e["points"] = tr.points.size();
      e["phi_drift"] = tr.phi_drift();
      e["omega_drift"] = tr.omega_drift();
      if (profile) e["upstream_height"] = profile->kappa(std::clamp(tr.phi_along.front(), 0.0, profile->flux()));
      ++ok;
    } catch (const Error& err) {
      e["error"] = {{"code", to_string(err.code())}, {"message", err.what()}};
    }
    entries.push_back(e);
  }
  io::write_json(dir / "trace_summary.json", {{"sampler", sampler_kind}, {"traces", entries}});
  fmt::print("traced {}/{} seeds into {}\n", ok, seeds.size(), dir.string());
  return ok > 0 ? kExitOk : kExitConfig;
}

int cmd_slice(const RunConfig& cfg, double y1) {
  validate(cfg);
  if (cfg.fixture) throw Error(ErrorCode::ConfigError, "slice needs a profile and geometry, not a fixture");
  const VorticitySource src = VorticitySource::from_profile(build_profile(cfg));
  const NozzleGeometry g = build_geometry(cfg);
  const double alpha = g.alpha(y1);
  const auto methods = solver_methods(cfg.solver);
  const std::filesystem::path dir = cfg.out_dir;

  json doc = {{"y1", y1}, {"alpha1", alpha}, {"c", src.c()}};
  json per = json::object();
  std::vector<SliceSolution> slices;
  for (SliceMethod m : methods) {
    SliceSolution sol;
    if (m == SliceMethod::Lagrange) {
      sol = invert_to_slice(build_lagrange_slice(alpha, src, cfg.nz, cfg.tol.beta), y1, cfg.ny2);
    } else if (m == SliceMethod::Picard) {
      PicardOptions po;
      po.n = cfg.ny2;
      po.tol = cfg.tol.picard;
      sol = picard_solve(alpha, src, po);
    } else {
      ShootingOptions so;
      so.n = cfg.ny2;
      so.tol = cfg.tol.shooting;
      sol = shooting_solve(alpha, src, so);
    }
    const SliceReport rep = check_slice(sol, src);
    const std::string name = methods.size() == 1 ? "slice.csv" : fmt::format("slice_{}.csv", to_string(m));
    io::write_slice_csv(dir / name, sol);
    json entry = {{"file", name},           {"gamma", rep.gamma},       {"residual", rep.residual},
                  {"passed", rep.passed()}, {"iterations", sol.stats.iterations}};
    if (m == SliceMethod::Lagrange) entry["beta"] = sol.beta;
    if (m == SliceMethod::Picard) entry["relax"] = sol.stats.relax;
    if (m == SliceMethod::Shooting) entry["initial_slope"] = sol.stats.initial_slope;
    per[to_string(m)] = entry;
    slices.push_back(std::move(sol));
  }
  doc["methods"] = per;
  if (slices.size() > 1) {
    double dev = 0.0;
    for (std::size_t k = 1; k < slices.size(); ++k) {
      for (std::size_t j = 0; j < slices[0].phi.size(); ++j) dev = std::max(dev, std::abs(slices[k].phi[j] - slices[0].phi[j]));
    }
    doc["max_deviation"] = dev;
  }
  io::write_json(dir / "slice.json", doc);
  fmt::print("wrote slice data for y1 = {} into {}\n", y1, dir.string());
  return kExitOk;
}

int cmd_farfield(const RunConfig& cfg) {
  validate(cfg);
  if (cfg.fixture) throw Error(ErrorCode::ConfigError, "farfield needs a profile and geometry, not a fixture");
  const IncomingProfile profile = build_profile(cfg);
  const VorticitySource src = VorticitySource::from_profile(profile);
  const NozzleGeometry g = build_geometry(cfg);
  const std::filesystem::path dir = cfg.out_dir;

  json doc = json::object();
  for (FarFieldSide side : {FarFieldSide::Upstream, FarFieldSide::Downstream}) {
    const FarFieldState st = farfield_state(src, g, side, cfg.nz);
    const bool up = side == FarFieldSide::Upstream;
    const double x1 = up ? -cfg.cutoff : cfg.cutoff;
    const std::string name = up ? "farfield_upstream.csv" : "farfield_downstream.csv";
    {
      std::string body = "y2,x2,phi,v1,v2\n";
      for (std::size_t j = 0; j <= cfg.ny2; ++j) {
        const double y2 = static_cast<double>(j) / static_cast<double>(cfg.ny2);
        body += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", y2, st.lower(x1) + y2 * st.height(),
                            st.phi(y2), st.v1(y2), st.v2(y2));
      }
      std::filesystem::create_directories(dir);
      std::ofstream(dir / name, std::ios::binary) << body;
    }
    const double flux = st.flux();
    json e = {{"file", name},        {"alpha1", st.alpha1()}, {"height", st.height()}, {"slope", st.slope()},
              {"beta", st.beta()},   {"flux", flux},          {"flux_mismatch", std::abs(flux - src.c()) / src.c()}};
    if (up) {
      double err = 0.0;
      for (std::size_t j = 0; j <= cfg.ny2; ++j) {
        const double y2 = static_cast<double>(j) / static_cast<double>(cfg.ny2);
        err = std::max(err, std::abs(st.v1(y2) - profile.velocity(y2)));
      }
      e["profile_recovery_err"] = err;
    }
    doc[up ? "upstream" : "downstream"] = e;
  }
  doc["c"] = src.c();
  io::write_json(dir / "farfield.json", doc);
  fmt::print("wrote far-field states into {}\n", dir.string());
  return kExitOk;
}

namespace {

void apply_thread_cap() {
  if (const char* env = std::getenv("HYDRONOZZLE_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && n > 0) omp_set_num_threads(static_cast<int>(std::min<long>(n, omp_get_max_threads())));
  }
}

void report_error(std::string_view code, const std::string& message, int exit_code, const std::string& out_dir) {
  const json doc = {{"error", {{"code", std::string(code)}, {"message", message}, {"exit_code", exit_code}}}};
  std::cerr << doc.dump() << '\n';
  if (!out_dir.empty()) {
    try {
      io::write_json(std::filesystem::path(out_dir) / "error.json", doc);
    } catch (...) {
    }
  }
}

}  // namespace

int run_cli(int argc, char** argv) {
  apply_thread_cap();

  CLI::App app{"Steady hydrostatic Euler flow in infinite nozzles"};
  app.require_subcommand(1);

  std::string config_path, out_dir, solver, grid;
  std::optional<double> cutoff;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "run configuration (INI)")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--solver", solver, "lagrange | picard | shooting | all");
    sub->add_option("--grid", grid, "NY1xNY2");
    sub->add_option("--cutoff", cutoff, "truncation abscissa X");
  };

  auto* solve = app.add_subcommand("solve", "assemble and reconstruct the flow");
  common(solve);
  auto* verify = app.add_subcommand("verify", "run the invariant suite");
  common(verify);
  std::string from;
  verify->add_option("--from", from, "directory with field.csv and summary.json from a prior solve");
  auto* trace = app.add_subcommand("trace", "trace streamlines from seeds");
  common(trace);
  std::string seeds, sampler = "slice";
  double t_max = 100.0, step = 0.05;
  trace->add_option("--seeds", seeds, "x1,x2;x1,x2;...")->required();
  trace->add_option("--t-max", t_max, "integration time limit");
  trace->add_option("--step", step, "RK4 time step");
  trace->add_option("--sampler", sampler, "slice | bilinear");
  auto* slice = app.add_subcommand("slice", "solve one vertical slice");
  common(slice);
  double y1 = 0.0;
  slice->add_option("--y1", y1, "slice abscissa");
  auto* farfield = app.add_subcommand("farfield", "upstream and downstream limit states");
  common(farfield);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("ConfigError", e.what(), kExitConfig, "");
    return kExitConfig;
  }

  RunConfig cfg;
  try {
    cfg = load_config(config_path);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (!solver.empty()) cfg.solver = solver;
    if (cutoff) cfg.cutoff = *cutoff;
    if (!grid.empty()) {
      const auto x = grid.find_first_of("xX");
      try {
        if (x == std::string::npos) throw std::invalid_argument(grid);
        std::size_t u1 = 0, u2 = 0;
        const std::string a = grid.substr(0, x), b = grid.substr(x + 1);
        const long n1 = std::stol(a, &u1), n2 = std::stol(b, &u2);
        if (u1 != a.size() || u2 != b.size() || n1 < 0 || n2 < 0) throw std::invalid_argument(grid);
        cfg.ny1 = static_cast<std::size_t>(n1);
        cfg.ny2 = static_cast<std::size_t>(n2);
      } catch (const std::exception&) {
        throw Error(ErrorCode::ConfigError, fmt::format("--grid '{}' is not NY1xNY2", grid));
      }
    }

    if (solve->parsed()) return cmd_solve(cfg);
    if (verify->parsed()) {
      return cmd_verify(cfg, from.empty() ? std::nullopt : std::optional<std::filesystem::path>(from));
    }
    if (trace->parsed()) return cmd_trace(cfg, seeds, t_max, step, sampler);
    if (slice->parsed()) return cmd_slice(cfg, y1);
    if (farfield->parsed()) return cmd_farfield(cfg);
  } catch (const Error& e) {
    const int code = exit_code_for(e.code());
    report_error(to_string(e.code()), e.what(), code, out_dir.empty() ? cfg.out_dir : out_dir);
    return code;
  } catch (const std::exception& e) {
    report_error("Internal", e.what(), kExitSolver, out_dir.empty() ? cfg.out_dir : out_dir);
    return kExitSolver;
  }
  return kExitConfig;
}

}  // namespace hydronozzle
