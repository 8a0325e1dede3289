#include <gtest/gtest.h>

#include <cmath>

#include "nlbc/presets.hpp"
#include "nlbc/verify.hpp"

using namespace nlbc;

namespace {

PVec vec(std::initializer_list<double> v) {
  PVec x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double a : v) x(i++) = a;
  return x;
}

Mat mat(int r, int c, std::initializer_list<double> v) {
  Mat m(r, c);
  Eigen::Index i = 0;
  for (double a : v) m(i / c, i % c) = a, ++i;
  return m;
}

BoundaryPoint point(const PVec& U, std::array<double, 2> n = {1.0, 0.0}) {
  BoundaryPoint pt;
  pt.U = U;
  pt.normal = n;
  return pt;
}

BoundarySpec with_constant(BoundarySpec bc, const Vec& g) {
  bc.data.kind = BoundaryData::Kind::Constant;
  bc.data.constant = g;
  return bc;
}

}  // namespace

TEST(Admissibility, CheckR) {
  EXPECT_EQ(check_R(mat(2, 1, {1, 0})).verdict, Verdict::SemiDefinite);
  EXPECT_EQ(check_R(mat(2, 1, {-1, 0})).verdict, Verdict::SemiDefinite);
  EXPECT_EQ(check_R(mat(2, 1, {0, 0})).verdict, Verdict::Strict);
  const auto bad = check_R(mat(1, 1, {1.5}));
  EXPECT_EQ(bad.verdict, Verdict::Violated);
  EXPECT_NEAR(bad.min_eigenvalue, -1.25, 1e-15);
  EXPECT_EQ(bad.witness.size(), 1);
  EXPECT_EQ(check_R(Mat::Zero(0, 0)).verdict, Verdict::Strict);
}

TEST(Admissibility, CheckS) {
  const Mat R = Mat::Zero(2, 1);
  EXPECT_EQ(check_S(R, Mat::Identity(2, 2)).verdict, Verdict::SemiDefinite);
  EXPECT_EQ(check_S(R, 0.5 * Mat::Identity(2, 2)).verdict, Verdict::Strict);
  const auto v = check_S(mat(1, 1, {0.5}), mat(1, 1, {1.0}));
  EXPECT_EQ(v.verdict, Verdict::Violated);
  EXPECT_NEAR(v.min_eigenvalue, -1.0 / 3.0, 1e-14);
  EXPECT_THROW(check_S(mat(1, 1, {1.0}), mat(1, 1, {0.5})), InvalidArgument);
}

TEST(Admissibility, SigmaMatrix) {
  EXPECT_NEAR(sigma_matrix(vec({-4.0}))(0, 0), 2.0, 1e-15);
  const auto r = boundary_rotation(EquationSpec(System::IEE), point(vec({-1, 0.3, 0.2})), Variant::IeeCharacteristic);
  const auto s = characteristic_split(r);
  EXPECT_LT((sigma_matrix(s.lambda_minus) - Mat::Identity(2, 2)).norm(), 1e-15);
  EXPECT_THROW(sigma_matrix(vec({1.0})), InvalidArgument);
}

// Boundary terms bounded by -G^T G whenever R and S pass their checks.
TEST(Admissibility, BoundaryTermsBoundedByData) {
  Sampler s(21);
  for (int i = 0; i < 500; ++i) {
    const int m = s.integer(1, 3), p = s.integer(0, 3);
    Mat R = s.matrix(m, p);
    if (p > 0) R *= s.uniform(0.0, 0.99) / std::max(1e-12, R.operatorNorm());
    const Mat S = detail::admissible_S(R, s.matrix(m, m) + 2.0 * Mat::Identity(m, m), s.uniform(0.1, 1.0));
    ASSERT_NE(check_S(R, S).verdict, Verdict::Violated);
    Vec lm(m), lp(p);
    for (int k = 0; k < m; ++k) lm(k) = -s.uniform(0.1, 3.0);
    for (int k = 0; k < p; ++k) lp(k) = s.uniform(0.1, 3.0);
    const Vec Wm = 3.0 * s.matrix(m, 1), Wp = 3.0 * s.matrix(p, 1), G = 3.0 * s.matrix(m, 1);
    const double g2 = G.squaredNorm();
    const double strong = strong_boundary_term(R, S, lm, lp, Wp, G);
    const double weak = weak_boundary_term(R, S, lm, lp, Wm, Wp, G);
    EXPECT_GE(strong + g2, -1e-12 * (1.0 + g2 + Wp.squaredNorm()));
    EXPECT_GE(weak + g2, -1e-12 * (1.0 + g2 + Wp.squaredNorm() + Wm.squaredNorm()));
  }
}

TEST(Presets, CoefficientMatrices) {
  const auto iee = preset_bc("iee-dirichlet-inflow");
  EXPECT_EQ(iee.regimes.at(3).R, mat(2, 1, {-1, 0}));
  EXPECT_EQ(check_R(iee.regimes.at(3).R).verdict, Verdict::SemiDefinite);
  EXPECT_EQ(preset_bc("iee-pressure-outflow").regimes.at(4).R, Mat::Zero(1, 2));
  EXPECT_EQ(preset_bc("swe-dirichlet-inflow").regimes.at(6).R, mat(2, 1, {1, 0}));
  EXPECT_EQ(preset_bc("inse-velocity-inflow").regimes.at(3).R, Mat::Identity(2, 2));
  EXPECT_EQ(preset_bc("inse-stress-pressure-outflow").regimes.at(12).R, Mat::Zero(2, 2));
  for (const auto& name : preset_names()) EXPECT_NO_THROW(preset_bc(name).validate()) << name;
  EXPECT_THROW(preset_bc("nope"), InvalidArgument);
}

// R_2^2 = 4 (phi_4/phi_2)^2 (gamma-1) / (2 (2-gamma) |Psi|) gives 1 - R^T R = -1/|Psi|
// wherever M_n^2 < root.
TEST(Presets, CeeDirichletViolatesCheckR) {
  const double g = 1.4;
  for (double mach : {0.2, 0.5, 0.8}) {
    PVec r = vec({1.0, -mach * std::sqrt(g), 0.1, 1.0});
    const double psi = psi_factor(g, r(1) / (std::sqrt(g) * r(3)));
    Mat R = Mat::Zero(3, 1);
    R(1, 0) = cee_dirichlet_R2(g, r);
    const auto rep = check_R(R);
    EXPECT_EQ(rep.verdict, Verdict::Violated);
    EXPECT_NEAR(rep.min_eigenvalue, -1.0 / std::abs(psi), 1e-12);
  }
}

TEST(Presets, RegimeChangeIsReported) {
  const EquationSpec spec(System::IEE);
  const auto bc = preset_bc("iee-dirichlet-inflow");
  EXPECT_THROW(evaluate_condition(spec, bc, point(vec({1.0, 0.0, 0.0})), 0, 0, 0), RegimeChange);
}

TEST(Condition, IeeOutflowOperator) {
  const EquationSpec spec(System::IEE);
  for (double un : {0.5, 2.0}) {
    const Mat L = boundary_operator(spec, preset_bc("iee-pressure-outflow"), point(vec({un, 0.3, 0.7})));
    ASSERT_EQ(L.rows(), 1);
    EXPECT_NEAR(L(0, 0), 0.0, 1e-15);
    EXPECT_NEAR(L(0, 1), 0.0, 1e-15);
    EXPECT_NEAR(L(0, 2), 1.0 / std::sqrt(2.0 * un), 1e-15);
  }
}

TEST(Condition, StrongIeeOutflowSetsPressure) {
  const EquationSpec spec(System::IEE);
  const double un = 0.8, target = 1.7;
  const Vec G = vec({target / std::sqrt(2.0 * un)});
  const auto bc = with_constant(preset_bc("iee-pressure-outflow", FaceId::East), G);
  const BoundaryPoint q = strong_impose(spec, bc, point(vec({un, -0.2, 0.1})), 1, 0.5, 0);
  EXPECT_NEAR(q.U(2), target, 1e-13);
  EXPECT_EQ(q.U(0), un);
  EXPECT_NEAR(evaluate_condition(spec, bc, q, 1, 0.5, 0).residual.norm(), 0.0, 1e-13);
}

TEST(Condition, LiftingPairsWithStateToSatTerm) {
  Sampler s(9);
  for (const std::string name : {"iee-dirichlet-inflow", "swe-characteristic-inflow", "swe-dirichlet-inflow",
                                 "cee-characteristic-inflow", "iee-pressure-outflow", "swe-characteristic-outflow"}) {
    const auto bc0 = preset_bc(name);
    const System sys = variant_system(bc0.variant);
    const EquationSpec spec(sys);
    const int dir = name.find("inflow") != std::string::npos ? -1 : 1;
    for (int i = 0; i < 50; ++i) {
      BoundaryPoint pt;
      pt.normal = s.normal();
      pt.U = s.state(sys, pt.normal, dir);
      PointCondition pc;
      try {
        pc = evaluate_condition(spec, bc0, pt, 0, 0, 0);
      } catch (const RegimeChange&) {
        continue;
      }
      const auto bc = with_constant(bc0, s.matrix(pc.split.conditions(), 1));
      pc = evaluate_condition(spec, bc, pt, 0, 0, 0);
      const double sat = pc.sat_term();
      EXPECT_NEAR(pt.U.dot(pc.lifting()), sat, 1e-11 * (1.0 + std::abs(sat))) << name;
      const Mat L = boundary_operator(spec, bc, pt);
      EXPECT_LT((pc.S * (L * pt.U - pc.G) - pc.residual).norm(), 1e-11 * (1.0 + pc.residual.norm())) << name;
    }
  }
}

TEST(Condition, SatVanishesOnSatisfiedState) {
  Sampler s(13);
  for (const std::string name : {"iee-dirichlet-inflow", "swe-characteristic-inflow", "cee-characteristic-inflow",
                                 "iee-pressure-outflow"}) {
    const auto bc0 = preset_bc(name);
    const System sys = variant_system(bc0.variant);
    const EquationSpec spec(sys);
    const int dir = name.find("inflow") != std::string::npos ? -1 : 1;
    int done = 0;
    for (int i = 0; i < 200 && done < 30; ++i) {
      BoundaryPoint pt;
      pt.normal = s.normal();
      pt.U = s.state(sys, pt.normal, dir);
      BoundarySpec bc = bc0;
      bc.data.kind = BoundaryData::Kind::Reference;
      const PVec ref = s.state(sys, pt.normal, dir);
      bc.data.state = [ref](double, double, double) { return ref; };
      try {
        const BoundaryPoint q = strong_impose(spec, bc, pt, 0, 0, 0);
        const PointCondition pc = evaluate_condition(spec, bc, q, 0, 0, 0);
        EXPECT_LT(pc.residual.norm(), 1e-11 * (1.0 + pc.G.norm())) << name;
        EXPECT_LT(pc.lifting().norm(), 1e-10 * (1.0 + pc.G.norm())) << name;
        ++done;
      } catch (const Error&) {
      }
    }
    EXPECT_GT(done, 0) << name;
  }
}
