#include <gtest/gtest.h>

#include <cmath>

#include "nlbc/presets.hpp"
#include "nlbc/run.hpp"
#include "nlbc/verify.hpp"

using namespace nlbc;

namespace {

PVec vec(std::initializer_list<double> v) {
  PVec x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double a : v) x(i++) = a;
  return x;
}

// Uniform IEE flow entering through west and south, leaving through east and north, with
// reference data equal to the flow itself.
SemiDiscreteSystem uniform_iee(const PVec& state, int N = 11, int order = 2, EquationParams p = {}) {
  std::vector<BoundarySpec> bcs;
  for (auto [id, name] : {std::pair{FaceId::West, "iee-dirichlet-inflow"}, {FaceId::South, "iee-dirichlet-inflow"},
                          {FaceId::East, "iee-pressure-outflow"}, {FaceId::North, "iee-pressure-outflow"}}) {
    BoundarySpec b = preset_bc(name, id);
    b.data.kind = BoundaryData::Kind::Reference;
    b.data.state = [state](double, double, double) { return state; };
    bcs.push_back(b);
  }
  return SemiDiscreteSystem(EquationSpec(System::IEE, p), OperatorSet(Grid::rectangle(N, N), order), bcs);
}

StateField constant_field(const Grid& g, const PVec& u) {
  StateField U(g, static_cast<int>(u.size()));
  for (std::size_t k = 0; k < U.nodes(); ++k) U.set(k, u);
  return U;
}

}  // namespace

TEST(Rhs, ConstantStateWithMatchingDataIsSteady) {
  const PVec u = vec({1.0, 0.5, 0.2});
  for (int order : {2, 4}) {
    const auto sys = uniform_iee(u, 13, order);
    const StateField U = constant_field(sys.ops.grid(), u);
    const RhsEvaluation ev = evaluate_rhs(sys, U, 0.0);
    EXPECT_LT(ev.rhs.cwiseAbs().maxCoeff(), 1e-13) << order;
    EXPECT_LT(ev.lifting.cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(Rhs, SatContributionMatchesLifting) {
  const auto sys = uniform_iee(vec({1.0, 0.5, 0.2}));
  Sampler s(4);
  StateField U = detail::perturbed(sys, vec({1.0, 0.5, 0.2}), s, 0.1);
  const StateField sat = sat_contribution(sys, U, 0.0);
  const RhsEvaluation ev = evaluate_rhs(sys, U, 0.0);
  double pair = 0.0, faces = 0.0;
  for (std::size_t k = 0; k < U.nodes(); ++k)
    pair += sys.ops.volume_weights()(static_cast<Eigen::Index>(k)) *
            U.at(k).dot(ev.lifting.row(static_cast<Eigen::Index>(k)).transpose());
  for (const auto& f : ev.faces) faces += f.sat;
  EXPECT_NEAR(pair, faces, 1e-12 * (1.0 + std::abs(faces)));
  EXPECT_GT(sat.values().cwiseAbs().maxCoeff(), 0.0);
}

TEST(Rk4, ZeroStepIsIdentity) {
  const auto sys = uniform_iee(vec({1.0, 0.5, 0.2}));
  Sampler s(2);
  const StateField U = detail::perturbed(sys, vec({1.0, 0.5, 0.2}), s, 0.1);
  const StateField V = rk4_step(sys, U, 0.0, 0.0);
  EXPECT_EQ((V.values() - U.values()).cwiseAbs().maxCoeff(), 0.0);
}

// Local error against exp(A dt) u0 shrinks like dt^5.
TEST(Rk4, FifthOrderLocalErrorOnLinearSystem) {
  Mat A(3, 3);
  A << -1.0, 2.0, 0.0, -2.0, -0.5, 1.0, 0.0, -1.0, -0.2;
  const Vec u0 = vec({1.0, -0.5, 0.25});
  auto exact = [&](double t) {
    Vec term = u0, sum = u0;
    for (int k = 1; k < 40; ++k) {
      term = (t / k) * (A * term);
      sum += term;
    }
    return sum;
  };
  auto f = [&](const Vec& u, double) { return Vec(A * u); };
  auto err = [&](double dt) { return (rk4_step(f, u0, 0.0, dt) - exact(dt)).norm(); };
  const double ratio = err(0.1) / err(0.05);
  EXPECT_NEAR(std::log2(ratio), 5.0, 0.2);
}

TEST(StableDt, ScalesWithCfl) {
  // One-dimensional IEE, u_n = 1 at both ends, h = 0.1.
  std::vector<BoundarySpec> bcs{preset_bc("iee-dirichlet-inflow", FaceId::West),
                                preset_bc("iee-pressure-outflow", FaceId::East)};
  const SemiDiscreteSystem sys(EquationSpec(System::IEE), OperatorSet(Grid::line(11), 2), bcs);
  const StateField U = constant_field(sys.ops.grid(), vec({1.0, 0.0, 0.0}));
  const double a = stable_dt(sys, U, 0.5), b = stable_dt(sys, U, 1.0);
  EXPECT_NEAR(b, 2.0 * a, 1e-15);
  // Never above the bare limit cfl h / max|lambda| = 0.05.
  EXPECT_LE(a, 0.05);
  EXPECT_GT(a, 0.0);
  EXPECT_THROW(stable_dt(sys, U, 0.0), InvalidArgument);
}

TEST(StableDt, ViscousLimitDominatesForLargeEpsilon) {
  auto make = [](double eps) {
    EquationParams p;
    p.epsilon = eps;
    std::vector<BoundarySpec> bcs;
    for (auto [id, name] : {std::pair{FaceId::West, "inse-velocity-inflow"}, {FaceId::South, "inse-velocity-inflow"},
                            {FaceId::East, "inse-stress-pressure-outflow"}, {FaceId::North, "inse-stress-pressure-outflow"}})
      bcs.push_back(preset_bc(name, id));
    return SemiDiscreteSystem(EquationSpec(System::INSE, p), OperatorSet(Grid::rectangle(11, 11), 2), bcs);
  };
  const PVec u = vec({1.0, 0.5, 0.0});
  auto dt = [&](double eps) {
    const auto sys = make(eps);
    return stable_dt(sys, constant_field(sys.ops.grid(), u), 0.5);
  };
  double prev = dt(0.0);
  for (double eps : {0.01, 0.1, 1.0, 10.0}) {
    const double d = dt(eps);
    EXPECT_LT(d, prev) << eps;
    prev = d;
  }
  EXPECT_NEAR(dt(1000.0) / dt(10000.0), 10.0, 0.05);
}

TEST(Run, ZeroEndTimeGivesEmptySeries) {
  const PVec u = vec({1.0, 0.5, 0.2});
  const auto sys = uniform_iee(u);
  const RunResult r = run(sys, constant_field(sys.ops.grid(), u), 0.0, TimeIntegrator{});
  EXPECT_TRUE(r.report.samples.empty());
  EXPECT_EQ(r.report.steps, 0);
  EXPECT_GT(r.report.initial_energy, 0.0);
  EXPECT_THROW(run(sys, constant_field(sys.ops.grid(), u), -1.0, TimeIntegrator{}), InvalidArgument);
}

TEST(Run, UniformFlowKeepsEnergy) {
  const PVec u = vec({1.0, 0.5, 0.2});
  const auto sys = uniform_iee(u);
  TimeIntegrator integ;
  integ.dt = 0.005;
  const RunResult r = run(sys, constant_field(sys.ops.grid(), u), 0.5, integ, 10);
  ASSERT_FALSE(r.report.abort_message);
  EXPECT_EQ(r.report.steps, 100);
  for (const auto& s : r.report.samples)
    EXPECT_NEAR(s.energy, r.report.initial_energy, 1e-11 * r.report.initial_energy);
}

TEST(Run, DissipativeOutflowDecaysEnergy) {
  EquationParams p;
  p.kappa = 1.0;
  const PVec u = vec({1.0, 0.5, 0.0});
  std::vector<BoundarySpec> bcs;
  for (auto [id, name] : {std::pair{FaceId::West, "iee-dirichlet-inflow"}, {FaceId::South, "iee-dirichlet-inflow"},
                          {FaceId::East, "iee-pressure-outflow"}, {FaceId::North, "iee-pressure-outflow"}})
    bcs.push_back(preset_bc(name, id));
  SemiDiscreteSystem sys(EquationSpec(System::IEE, p), OperatorSet(Grid::rectangle(15, 15), 2), bcs);
  const PVec V = u;
  sys.frozen = [V](double, double, double) { return V; };
  Sampler s(8);
  const StateField U0 = detail::perturbed(sys, PVec::Zero(3), s, 0.5);
  const RunResult r = run(sys, U0, 0.3, TimeIntegrator{}, 1);
  ASSERT_FALSE(r.report.abort_message);
  for (std::size_t i = 1; i < r.report.samples.size(); ++i)
    EXPECT_LE(r.report.samples[i].energy, r.report.samples[i - 1].energy * (1.0 + 1e-12));
  EXPECT_LT(r.report.samples.back().energy, r.report.initial_energy);
}

TEST(Run, StrongImpositionHoldsAfterEachStep) {
  const PVec u = vec({1.0, 0.5, 0.2});
  auto sys = uniform_iee(u);
  for (auto& b : sys.boundaries) b.mode = Imposition::Strong;
  Sampler s(6);
  TimeIntegrator integ;
  integ.dt = 0.01;
  const RunResult r = run(sys, detail::perturbed(sys, u, s, 0.05), 0.05, integ);
  ASSERT_FALSE(r.report.abort_message);
  // The north-east corner carries two pressure conditions on one unknown and is skipped.
  const std::size_t ne = sys.ops.grid().index(10, 10);
  for (const auto& face : sys.ops.faces()) {
    const auto& bc = sys.boundary(face.id);
    for (std::size_t k : face.nodes) {
      if (k == ne) continue;
      BoundaryPoint pt;
      pt.U = r.state.at(k);
      pt.normal = face.normal;
      const auto x = sys.ops.grid().position(k);
      EXPECT_LT(evaluate_condition(sys.spec, bc, pt, x[0], x[1], 0.05).residual.norm(), 1e-12)
          << face_name(face.id) << " (" << x[0] << ", " << x[1] << ")";
    }
  }
}
