#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <string>

#include "json.hpp"
#include "nlbc/config.hpp"
#include "nlbc/presets.hpp"
#include "nlbc/run.hpp"

namespace nlbc {

/// Primitive velocity field of the initial condition without bump or noise.
inline std::array<double, 2> base_velocity(const InitialConfig& in, double x, double y) {
  return {in.velocity[0] + in.strain * (x - in.center[0]),
          in.velocity[1] + in.strain * (y - in.center[1])};
}

/// System variables from primitive (density or phi, velocity, pressure).
inline PVec from_primitive(System s, double rho_or_phi, double u, double v, double p) {
  PVec U(s == System::CEE ? 4 : 3);
  switch (s) {
    case System::IEE:
    case System::INSE: U << u, v, p; break;
    case System::SWE: {
      const double r = std::sqrt(rho_or_phi);
      U << rho_or_phi, r * u, r * v;
      break;
    }
    case System::CEE: {
      const double r = std::sqrt(rho_or_phi);
      U << r, r * u, r * v, std::sqrt(p);
      break;
    }
  }
  return U;
}

/// The unperturbed initial state; boundary data of kind `reference` is derived from it.
inline PVec reference_state(const RunConfig& c, double x, double y) {
  const auto vel = base_velocity(c.initial, x, y);
  const double scalar = c.system == System::SWE ? c.initial.phi : c.initial.density;
  return from_primitive(c.system, scalar, vel[0], vel[1], c.initial.pressure);
}

inline StateField initial_state(const RunConfig& c, const Grid& grid) {
  const auto& in = c.initial;
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> noise(-1.0, 1.0);
  const int n = c.system == System::CEE ? 4 : 3;
  StateField U(grid, n);
  for (std::size_t k = 0; k < U.nodes(); ++k) {
    const auto x = grid.position(k);
    const double dx = x[0] - in.bump_center[0], dy = x[1] - in.bump_center[1];
    const double g = in.bump_amplitude * std::exp(-(dx * dx + dy * dy) / (in.bump_width * in.bump_width));
    auto vel = base_velocity(in, x[0], x[1]);
    vel[0] += g;
    vel[1] += 0.5 * g;
    const double scalar = (c.system == System::SWE ? in.phi : in.density) * (1.0 + g);
    const double p = c.system == System::CEE ? in.pressure * (1.0 + g) : in.pressure + g;
    PVec u = from_primitive(c.system, scalar, vel[0], vel[1], p);
    if (in.noise != 0.0)
      for (int i = 0; i < n; ++i) u(i) += in.noise * noise(rng);
    U.set(k, u);
  }
  return U;
}

inline BoundarySpec boundary_from_config(const RunConfig& c, FaceId id, const FaceConfig& fc) {
  BoundarySpec b;
  if (!fc.preset.empty()) {
    b = preset_bc(fc.preset, id);
  } else {
    b.face = id;
    b.variant = *fc.variant;
    b.name = "explicit";
    for (const auto& r : fc.regimes) {
      unsigned mask = 0;
      for (int i : r.minus) mask |= 1u << i;
      b.regimes[mask] = Regime{r.R, r.S, {}};
    }
  }
  b.mode = fc.mode;
  b.data.kind = fc.data.kind;
  b.data.constant = fc.data.value;
  if (fc.data.kind == BoundaryData::Kind::Reference) {
    const RunConfig cc = c;
    b.data.state = [cc](double x, double y, double) { return reference_state(cc, x, y); };
  }
  return b;
}

inline SemiDiscreteSystem build_system(const RunConfig& c) {
  EquationSpec spec(c.system, c.params);
  OperatorSet ops(c.grid(), c.order);
  std::vector<BoundarySpec> bcs;
  for (const auto& [id, fc] : c.faces) bcs.push_back(boundary_from_config(c, id, fc));
  SemiDiscreteSystem sys(spec, ops, bcs);
  sys.rotation.realization = c.realization;
  return sys;
}

inline BoundMode bound_mode(const RunConfig& c, const EnergyReport& rep) {
  switch (c.check) {
    case CheckMode::Homogeneous: return BoundMode::Homogeneous;
    case CheckMode::Inhomogeneous: return BoundMode::Inhomogeneous;
    case CheckMode::Auto: break;
  }
  return rep.homogeneous ? BoundMode::Homogeneous : BoundMode::Inhomogeneous;
}

namespace exit_code {
constexpr int pass = 0;
constexpr int config_error = 1;
constexpr int bound_violation = 2;
constexpr int numerical_abort = 3;
constexpr int io_error = 4;
}  // namespace exit_code

struct ScenarioOutcome {
  int exit_code = exit_code::pass;
  EnergyReport report;
  BoundMode mode = BoundMode::Homogeneous;
  BoundVerdict verdict;
  double max_identity_residual = 0.0;
  std::string csv_path, json_path;
};

inline nlohmann::json summary_json(const RunConfig& c, const ScenarioOutcome& o) {
  nlohmann::json j;
  j["name"] = c.name;
  j["system"] = system_name(c.system);
  j["order"] = c.order;
  j["seed"] = c.seed;
  j["steps"] = o.report.steps;
  j["dt"] = o.report.dt;
  j["initial_energy"] = o.report.initial_energy;
  j["final_energy"] = o.report.samples.empty() ? o.report.initial_energy : o.report.samples.back().energy;
  j["samples"] = o.report.samples.size();
  j["bound"] = {{"mode", o.mode == BoundMode::Homogeneous ? "homogeneous" : "inhomogeneous"},
                {"pass", o.verdict.pass},
                {"max_violation", o.verdict.max_violation},
                {"at_time", o.verdict.at_time},
                {"tolerance", o.verdict.tolerance}};
  j["max_identity_residual"] = o.max_identity_residual;
  if (o.report.abort_message)
    j["abort"] = {{"message", *o.report.abort_message}, {"step", o.report.abort_step}};
  else
    j["abort"] = nullptr;
  j["exit_code"] = o.exit_code;
  return j;
}

/// Runs a configured scenario. Without an output directory nothing is written.
inline ScenarioOutcome run_scenario(const RunConfig& c, bool write_files = true) {
  ScenarioOutcome o;
  const SemiDiscreteSystem sys = build_system(c);
  TimeIntegrator integ;
  integ.cfl = c.cfl;
  integ.dt = c.dt;
  RunResult r = run(sys, initial_state(c, sys.ops.grid()), c.t_end, integ, c.cadence);
  o.report = std::move(r.report);
  o.mode = bound_mode(c, o.report);
  o.verdict = bound_check(o.report, o.mode);
  for (const auto& s : o.report.samples)
    if (std::isfinite(s.identity_residual))
      o.max_identity_residual = std::max(o.max_identity_residual, s.identity_residual);
  if (o.report.abort_message)
    o.exit_code = exit_code::numerical_abort;
  else if (!o.verdict.pass)
    o.exit_code = exit_code::bound_violation;

  if (write_files) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(c.output_dir, ec);
    const fs::path base = fs::path(c.output_dir) / c.name;
    o.csv_path = base.string() + ".csv";
    o.json_path = base.string() + ".json";
    std::ofstream csv(o.csv_path);
    o.report.write_csv(csv);
    std::ofstream js(o.json_path);
    js << summary_json(c, o).dump(2) << "\n";
    csv.close();
    js.close();
    if (ec || !csv || !js) o.exit_code = exit_code::io_error;
  }
  return o;
}

}  // namespace nlbc
