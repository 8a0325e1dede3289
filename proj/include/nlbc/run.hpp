#pragma once

#include <cmath>
#include <functional>
#include <optional>

#include "nlbc/diagnostics.hpp"
#include "nlbc/solver.hpp"

namespace nlbc {

struct TimeIntegrator {
  double cfl = 0.5;
  std::optional<double> dt;  // fixed step; otherwise stable_dt at t = 0
};

struct RunResult {
  StateField state;
  EnergyReport report;
};

/// Fills a field from a point sampler F(x, y).
inline StateField sample_field(const Grid& grid, int components,
                               const std::function<PVec(double, double)>& F) {
  StateField U(grid, components);
  for (std::size_t k = 0; k < U.nodes(); ++k) {
    const auto x = grid.position(k);
    U.set(k, F(x[0], x[1]));
  }
  return U;
}

/// Advances to t_end with RK4, sampling the monitors every `cadence` steps and at the end.
/// Errors during stepping are recorded in the report instead of propagating.
inline RunResult run(const SemiDiscreteSystem& sys, StateField U, double t_end,
                     const TimeIntegrator& integ, long cadence = 1) {
  if (t_end < 0.0) throw InvalidArgument("t_end must be non-negative");
  if (cadence < 1) throw InvalidArgument("monitor cadence must be at least 1");
  EnergyReport rep;
  rep.system = sys.spec.system();
  for (const auto& f : sys.ops.faces()) rep.faces.push_back(f.id);
  for (const auto& b : sys.boundaries)
    if (b.data.kind != BoundaryData::Kind::Zero) rep.homogeneous = false;

  impose_strong(sys, U, 0.0);
  rep.initial_energy = energy_norm(sys, U);
  if (t_end == 0.0) return {std::move(U), std::move(rep)};

  double dt = integ.dt ? *integ.dt : stable_dt(sys, U, integ.cfl);
  if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
  const long steps = static_cast<long>(std::ceil(t_end / dt - 1e-12));
  dt = t_end / static_cast<double>(steps);
  rep.dt = dt;

  double data_integral = 0.0;
  double t = 0.0;
  long step = 0;
  try {
    rep.samples.push_back(sample_state(sys, U, t, 0, 0.0));
    for (step = 1; step <= steps; ++step) {
      // Stage-wise RK4 with the data rate integrated by the same weights.
      std::array<double, 4> g{};
      int stage = 0;
      auto f = [&](const Mat& V, double tt) {
        StateField s(U.grid(), U.components());
        s.values() = V;
        const RhsEvaluation ev = evaluate_rhs(sys, s, tt);
        double d = 0.0;
        for (const auto& fb : ev.faces) d += fb.data;
        g[static_cast<std::size_t>(stage++)] = 2.0 * d;
        return Mat(ev.dUdt);
      };
      auto post = [&](Mat& V, double tt) {
        if (!V.allFinite()) throw NumericalAbort("non-finite values", step);
        StateField s(U.grid(), U.components());
        s.values() = V;
        impose_strong(sys, s, tt);
        V = s.values();
      };
      U.values() = rk4_step(f, Mat(U.values()), t, dt, post);
      data_integral += dt / 6.0 * (g[0] + 2 * g[1] + 2 * g[2] + g[3]);
      t = step == steps ? t_end : static_cast<double>(step) * dt;
      if (!U.all_finite()) throw NumericalAbort("non-finite values", step);
      if (step % cadence == 0 || step == steps)
        rep.samples.push_back(sample_state(sys, U, t, step, data_integral));
    }
    rep.steps = steps;
  } catch (const NumericalAbort& e) {
    rep.abort_message = e.what();
    rep.abort_step = e.step();
    rep.steps = step;
  } catch (const Error& e) {
    rep.abort_message = e.what();
    rep.abort_step = step;
    rep.steps = step;
  }
  return {std::move(U), std::move(rep)};
}

}  // namespace nlbc
