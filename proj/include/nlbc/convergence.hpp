#pragma once

// Grid-refinement studies against manufactured solutions of the frozen-coefficient problem.

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nlbc/presets.hpp"
#include "nlbc/run.hpp"

namespace nlbc {

/// Exact solution with the derivatives needed to build the source term.
struct Manufactured {
  SpaceTimeFunction U, U_t, U_x, U_y, U_xx, U_yy;
};

struct ConvergenceScenario {
  std::string name;
  EquationSpec spec{System::IEE};
  PVec frozen;                      // constant coefficient state V
  Manufactured exact;
  std::array<std::string, 4> presets;  // west, east, south, north
  double t_end = 0.25;
  double dt_per_h = 0.1;  // dt = dt_per_h * h unless the diffusive limit is smaller
};

struct ConvergenceRow {
  int order = 2;
  int nodes = 0;
  double h = 0.0;
  double error = 0.0;
  double ratio = std::nan("");  // previous error / this error
  double rate = std::nan("");   // log(ratio) / log(h_prev / h)
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  bool monotone = true;  // errors decrease with h for every order

  /// Rate between the two finest grids of an order.
  double final_rate(int order) const {
    double r = std::nan("");
    for (const auto& row : rows)
      if (row.order == order && std::isfinite(row.rate)) r = row.rate;
    return r;
  }
};

/// P U_t + (A_i + A_i^T) U_{x_i} - eps P (U_xx + U_yy) evaluated on the exact solution.
inline SpaceTimeFunction manufactured_forcing(const ConvergenceScenario& sc) {
  const FluxMatrices f = flux_matrices(sc.spec, sc.frozen);
  const PMat Pe = sc.spec.evolved_norm();
  const PMat P = sc.spec.norm_matrix();
  const PMat B1 = f.A[0] + f.A[0].transpose();
  const PMat B2 = f.A[1] + f.A[1].transpose();
  const double eps = sc.spec.viscous() ? sc.spec.params().epsilon : 0.0;
  const Manufactured ex = sc.exact;
  const PMat C = f.C;
  return [=](double x, double y, double t) -> PVec {
    PVec F = Pe * ex.U_t(x, y, t) + B1 * ex.U_x(x, y, t) + B2 * ex.U_y(x, y, t) +
             C * ex.U(x, y, t);
    if (eps != 0.0) F -= eps * P * (ex.U_xx(x, y, t) + ex.U_yy(x, y, t));
    return F;
  };
}

/// Error ||U - U_exact|| in the evolved norm at t_end on an N x N grid.
inline double manufactured_error(const ConvergenceScenario& sc, int order, int N) {
  const OperatorSet ops(Grid::rectangle(N, N), order);
  std::vector<BoundarySpec> bcs;
  const std::array<FaceId, 4> ids{FaceId::West, FaceId::East, FaceId::South, FaceId::North};
  for (int i = 0; i < 4; ++i) {
    BoundarySpec b = preset_bc(sc.presets[static_cast<std::size_t>(i)], ids[static_cast<std::size_t>(i)]);
    b.data.kind = BoundaryData::Kind::Reference;
    b.data.state = sc.exact.U;
    const Manufactured ex = sc.exact;
    b.data.gradient = [ex](double x, double y, double t) {
      return std::array<PVec, 2>{ex.U_x(x, y, t), ex.U_y(x, y, t)};
    };
    bcs.push_back(std::move(b));
  }
  SemiDiscreteSystem sys(sc.spec, ops, bcs);
  const PVec V = sc.frozen;
  sys.frozen = [V](double, double, double) { return V; };
  sys.forcing = manufactured_forcing(sc);

  const auto exact_at = [&](double t) {
    return sample_field(ops.grid(), sc.spec.components(),
                        [&](double x, double y) { return sc.exact.U(x, y, t); });
  };
  const StateField U0 = exact_at(0.0);
  TimeIntegrator integ;
  integ.dt = std::min(sc.dt_per_h * ops.grid().min_spacing(), stable_dt(sys, U0, 0.5));
  RunResult r = run(sys, U0, sc.t_end, integ, 1L << 30);
  if (r.report.abort_message) throw NumericalAbort(*r.report.abort_message, r.report.abort_step);
  StateField diff = r.state;
  diff.values() -= exact_at(sc.t_end).values();
  return std::sqrt(energy_norm(sc.spec, ops, diff));
}

inline ConvergenceTable convergence_study(const ConvergenceScenario& sc,
                                          const std::vector<int>& orders,
                                          const std::vector<int>& resolutions) {
  ConvergenceTable table;
  for (int order : orders) {
    std::optional<ConvergenceRow> prev;
    for (int N : resolutions) {
      ConvergenceRow row;
      row.order = order;
      row.nodes = N;
      row.h = 1.0 / (N - 1);
      row.error = manufactured_error(sc, order, N);
      if (prev) {
        row.ratio = prev->error / row.error;
        if (prev->nodes != N) row.rate = std::log(row.ratio) / std::log(prev->h / row.h);
        if (N > prev->nodes && !(row.error < prev->error)) table.monotone = false;
      }
      table.rows.push_back(row);
      prev = row;
    }
  }
  return table;
}

/// Frozen-coefficient IEE with V = (1, 1/2, 0), kappa = 1 and a smooth travelling wave.
inline ConvergenceScenario iee_frozen_scenario() {
  ConvergenceScenario sc;
  sc.name = "iee-frozen";
  EquationParams p;
  p.kappa = 1.0;
  sc.spec = EquationSpec(System::IEE, p);
  sc.frozen = PVec(3);
  sc.frozen << 1.0, 0.5, 0.0;
  const double k = 2.0 * M_PI;
  // u = sin(k(x+y) - t), v = cos(k(x - y) - t), p = sin(k x) cos(k y - t) / 2
  sc.exact.U = [k](double x, double y, double t) {
    PVec u(3);
    u << std::sin(k * (x + y) - t), std::cos(k * (x - y) - t), 0.5 * std::sin(k * x) * std::cos(k * y - t);
    return u;
  };
  sc.exact.U_t = [k](double x, double y, double t) {
    PVec u(3);
    u << -std::cos(k * (x + y) - t), std::sin(k * (x - y) - t), 0.5 * std::sin(k * x) * std::sin(k * y - t);
    return u;
  };
  sc.exact.U_x = [k](double x, double y, double t) {
    PVec u(3);
    u << k * std::cos(k * (x + y) - t), -k * std::sin(k * (x - y) - t), 0.5 * k * std::cos(k * x) * std::cos(k * y - t);
    return u;
  };
  sc.exact.U_y = [k](double x, double y, double t) {
    PVec u(3);
    u << k * std::cos(k * (x + y) - t), k * std::sin(k * (x - y) - t), -0.5 * k * std::sin(k * x) * std::sin(k * y - t);
    return u;
  };
  sc.exact.U_xx = [](double, double, double) { return PVec(PVec::Zero(3)); };
  sc.exact.U_yy = sc.exact.U_xx;
  sc.presets = {"iee-dirichlet-inflow", "iee-pressure-outflow", "iee-dirichlet-inflow",
                "iee-pressure-outflow"};
  return sc;
}

/// Frozen INSE with V = (1, 1/2, 0): u = exp(-eps pi^2 t) sin(pi (y - t/2)), v = p = 0 solves
/// the linear problem without a source, so the forcing reduces to round-off.
inline ConvergenceScenario inse_decay_scenario(double epsilon = 0.05) {
  ConvergenceScenario sc;
  sc.name = "inse-decay";
  EquationParams p;
  p.kappa = 1.0;
  p.epsilon = epsilon;
  sc.spec = EquationSpec(System::INSE, p);
  sc.frozen = PVec(3);
  sc.frozen << 1.0, 0.5, 0.0;
  const double pi = M_PI;
  auto mode = [=](double y, double t, int dy) {
    const double a = std::exp(-epsilon * pi * pi * t);
    const double s = pi * (y - 0.5 * t);
    switch (dy) {
      case 0: return a * std::sin(s);
      case 1: return a * pi * std::cos(s);
      default: return -a * pi * pi * std::sin(s);
    }
  };
  auto vec = [](double u) {
    PVec r = PVec::Zero(3);
    r(0) = u;
    return r;
  };
  sc.exact.U = [=](double, double y, double t) { return vec(mode(y, t, 0)); };
  sc.exact.U_t = [=](double, double y, double t) {
    return vec(-epsilon * pi * pi * mode(y, t, 0) - 0.5 * mode(y, t, 1));
  };
  sc.exact.U_x = [](double, double, double) { return PVec(PVec::Zero(3)); };
  sc.exact.U_xx = sc.exact.U_x;
  sc.exact.U_y = [=](double, double y, double t) { return vec(mode(y, t, 1)); };
  sc.exact.U_yy = [=](double, double y, double t) { return vec(mode(y, t, 2)); };
  sc.presets = {"inse-velocity-inflow", "inse-stress-pressure-outflow", "inse-velocity-inflow",
                "inse-stress-pressure-outflow"};
  return sc;
}

}  // namespace nlbc
