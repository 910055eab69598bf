#pragma once

#include <chrono>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"

namespace aqm::lab {

enum ExitCode : int { kPass = 0, kCheckFailure = 1, kConfigError = 2 };

namespace detail {

// Raw flag values; each one overrides the config file only when given.
struct FlagValues {
  std::string command, config_path, rep, H, E, out, format, trajectories, max_spin;
  double a = 0, mass = 0, kappa = 0, charge = 0, tol = 0, h = 0, h_outer = 0, ds = 0;
  std::uint64_t seed = 0;
  int n_draws = 0, points = 0, order = 0, steps = 0;
  bool counterterm = false, null_momentum = false;
};

inline void add_flags(CLI::App& app, FlagValues& f) {
  app.add_option("command", f.command, "verb to run")->check(CLI::IsMember(verbs()));
  app.add_option("--config", f.config_path, "JSON file with defaults; flags override it");
  app.add_option("--a", f.a, "length scale a");
  app.add_option("--mass", f.mass, "mass m (sets a for verify-dirac and spectrum)");
  app.add_option("--rep", f.rep, "irrep labels u,v, e.g. 0,1/2");
  app.add_option("--H", f.H, "magnetic field x,y,z");
  app.add_option("--E", f.E, "electric field x,y,z");
  app.add_option("--kappa", f.kappa, "gyromagnetic constant");
  app.add_option("--charge", f.charge, "charge e");
  app.add_option("--seed", f.seed, "RNG seed for every draw");
  app.add_option("--n-draws", f.n_draws, "random draws for the identity checks");
  app.add_option("-N,--points", f.points, "sample points (curvature, reps) or seeds (trace)");
  app.add_option("--tol", f.tol, "headline tolerance of the verb");
  app.add_option("--h", f.h, "inner finite-difference step");
  app.add_option("--h-outer", f.h_outer, "outer finite-difference step");
  app.add_option("--order", f.order, "finite-difference order: 2, 4, 6 or 8");
  app.add_flag("--counterterm", f.counterterm, "subtract the field-quadratic scalar in the top spinor operator");
  app.add_option("--out", f.out, "write the report here instead of stdout");
  app.add_option("--format", f.format, "json or csv");
  app.add_option("--steps", f.steps, "trace: integration steps");
  app.add_option("--ds", f.ds, "trace: proper-time step");
  app.add_flag("--null-momentum", f.null_momentum, "trace: light-like bundle momentum");
  app.add_option("--trajectories", f.trajectories, "trace: directory for per-seed CSV files");
  app.add_option("--max-spin", f.max_spin, "spectrum: largest spin label");
}

inline json read_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file '" + path + "'");
  try {
    return json::parse(is);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

inline RunConfig merge(const CLI::App& app, const FlagValues& f) {
  RunConfig c;
  if (!f.config_path.empty()) apply_json(c, read_config_file(f.config_path));
  auto given = [&](const char* name) { return app.count(name) > 0; };
  if (given("command")) c.command = f.command;
  if (given("--a")) c.a = f.a;
  if (given("--mass")) c.mass = f.mass;
  if (given("--rep")) c.rep = parse_rep(f.rep);
  if (given("--H")) c.H = parse_vec3(f.H, "--H");
  if (given("--E")) c.E = parse_vec3(f.E, "--E");
  if (given("--kappa")) c.kappa = f.kappa;
  if (given("--charge")) c.charge = f.charge;
  if (given("--seed")) c.seed = f.seed;
  if (given("--n-draws")) c.n_draws = f.n_draws;
  if (given("--points")) c.points = f.points;
  if (given("--tol")) c.tol = f.tol;
  if (given("--h")) c.h = f.h;
  if (given("--h-outer")) c.h_outer = f.h_outer;
  if (given("--order")) c.order = f.order;
  if (given("--counterterm")) c.counterterm = f.counterterm;
  if (given("--out")) c.out = f.out;
  if (given("--format")) c.format = f.format;
  if (given("--steps")) c.steps = f.steps;
  if (given("--ds")) c.ds = f.ds;
  if (given("--null-momentum")) c.null_momentum = f.null_momentum;
  if (given("--trajectories")) c.trajectories = f.trajectories;
  if (given("--max-spin")) c.max_two_spin = parse_two_spin(f.max_spin);
  if (c.command.empty()) throw ConfigError("no command given");
  return c;
}

inline void emit(const RunConfig& cfg, const Report& rep, std::ostream& os) {
  if (cfg.format == "json") {
    os << to_json(rep).dump(2) << '\n';
  } else if (cfg.command == "spectrum") {
    write_spectrum_csv(spectrum_rows(cfg), os);
  } else {
    write_checks_csv(rep, os);
  }
}

}  // namespace detail

// Parses arguments (program name excluded), runs one verb and writes its
// report. Returns the process exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"aqm-lab: numerical checks of the affine relativistic top"};
  app.set_help_flag("--help", "print usage and exit");
  detail::FlagValues flags;
  detail::add_flags(app, flags);
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "aqm-lab: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    const RunConfig cfg = detail::merge(app, flags);
    validate(cfg);
    const auto start = std::chrono::steady_clock::now();
    Report rep = run_command(cfg);
    rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (cfg.out.empty()) {
      detail::emit(cfg, rep, out);
    } else {
      std::ofstream os(cfg.out);
      if (!os) throw ConfigError("cannot write '" + cfg.out + "'");
      detail::emit(cfg, rep, os);
    }
    err << (rep.pass() ? "PASS " : "FAIL ") << cfg.command << '\n';
    for (const Check& c : rep.checks)
      if (!c.pass) err << "  failed: " << c.name << " = " << format_double(c.value) << '\n';
    return rep.pass() ? kPass : kCheckFailure;
  } catch (const ConfigError& e) {
    err << "aqm-lab: config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DomainError& e) {
    err << "aqm-lab: invalid input: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "aqm-lab: " << e.what() << '\n';
    return kCheckFailure;
  }
}

}  // namespace aqm::lab
