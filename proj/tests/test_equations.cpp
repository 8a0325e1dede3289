#include <gtest/gtest.h>

#include <cmath>

#include "nlbc/quadratic_field.hpp"
#include "nlbc/rotation.hpp"
#include "nlbc/verify.hpp"

using namespace nlbc;

namespace {

PVec vec(std::initializer_list<double> v) {
  PVec x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double a : v) x(i++) = a;
  return x;
}

BoundaryPoint point(const PVec& U, std::array<double, 2> n = {1.0, 0.0}) {
  BoundaryPoint pt;
  pt.U = U;
  pt.normal = n;
  return pt;
}

}  // namespace

TEST(FluxMatrices, SweSymmetricForOneFifth) {
  const EquationSpec spec(System::SWE);
  const auto f = flux_matrices(spec, vec({2.0, 0.7, -0.3}));
  EXPECT_LT((f.A[0] - f.A[0].transpose()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((f.A[1] - f.A[1].transpose()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(FluxMatrices, CoriolisIsSkew) {
  EquationParams p;
  p.coriolis = 0.8;
  const auto f = flux_matrices(EquationSpec(System::SWE, p), vec({1.5, 0.2, 0.1}));
  EXPECT_EQ((f.C + f.C.transpose()).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_NE(f.C.cwiseAbs().maxCoeff(), 0.0);
}

TEST(FluxMatrices, CeeEntries) {
  const auto f = flux_matrices(EquationSpec(System::CEE), vec({1.0, -0.5, 0.2, 1.0}));
  EXPECT_NEAR(f.A[0](0, 0), -0.25, 1e-15);
  EXPECT_NEAR(f.A[0](3, 1), 0.4, 1e-15);
  EXPECT_NEAR(f.A[1](3, 2), 0.4, 1e-15);
}

TEST(FluxMatrices, InadmissibleStatesThrow) {
  EXPECT_THROW(flux_matrices(EquationSpec(System::SWE), vec({-1.0, 0.0, 0.0})), InadmissibleState);
  EXPECT_THROW(flux_matrices(EquationSpec(System::CEE), vec({1.0, 0.0, 0.0, 0.0})), InadmissibleState);
  EquationParams p;
  p.gamma = 1.0;
  EXPECT_THROW(EquationSpec(System::CEE, p), InvalidArgument);
}

TEST(ViscousFlux, IsNormTimesGradient) {
  EquationParams p;
  p.epsilon = 0.1;
  const EquationSpec spec(System::INSE, p);
  const auto f = viscous_flux(spec, vec({1, 0, 0}), vec({0, 0, 5}));
  EXPECT_EQ(f.D[0], vec({1, 0, 0}));
  EXPECT_EQ(f.D[1], vec({0, 0, 0}));
  EXPECT_THROW(viscous_flux(EquationSpec(System::IEE), vec({1, 0, 0}), vec({0, 0, 0})), InvalidArgument);
}

TEST(Rotation, IeeCharacteristicExample) {
  const EquationSpec spec(System::IEE);
  const auto r = boundary_rotation(spec, point(vec({2, 3, 1})), Variant::IeeCharacteristic);
  EXPECT_LT((r.W - vec({2.5, 3, 1})).norm(), 1e-15);
  EXPECT_LT((r.lambda - vec({2, 2, -0.5})).norm(), 1e-15);
  EXPECT_NEAR(r.diagonal_form(), 30.0, 1e-13);
  EXPECT_NEAR(r.quadratic_form(), 30.0, 1e-13);
}

TEST(Rotation, SweCharacteristicExample) {
  const EquationSpec spec(System::SWE);
  for (auto real : {Realization::Catalog, Realization::Gradient}) {
    RotationOptions opt;
    opt.realization = real;
    const auto r = boundary_rotation(spec, point(vec({4, -1, 2})), Variant::SweCharacteristic, opt);
    EXPECT_LT((r.W - vec({16, 17, -2})).norm(), 1e-13);
    EXPECT_NEAR(r.diagonal_form(), -9.25, 1e-13);
    EXPECT_NEAR(r.quadratic_form(), -9.25, 1e-13);
  }
}

TEST(Rotation, CeeCharacteristicExample) {
  const EquationSpec spec(System::CEE);
  const PVec Phi = vec({1.0, -0.5, 0.2, 1.0});
  const double mach = -0.5 / std::sqrt(1.4);
  EXPECT_NEAR(psi_factor(1.4, mach), -13.0 / 3.0, 1e-12);
  const auto r = boundary_rotation(spec, point(Phi), Variant::CeeCharacteristic);
  EXPECT_NEAR(r.diagonal_form(), -1.229, 1e-12);
  EXPECT_NEAR(r.quadratic_form(), -1.229, 1e-12);
  const auto c = boundary_rotation(spec, point(Phi), Variant::CeeContracted);
  EXPECT_NEAR(c.diagonal_form(), -1.229, 1e-12);
}

// Components summed by hand give 15.21 + 3.24 - 8.41 - 0.04 = 10.00.
TEST(Rotation, InseExtendedExample) {
  EquationParams p;
  p.epsilon = 0.01;
  const EquationSpec spec(System::INSE, p);
  BoundaryPoint pt = point(vec({1, 2, 3}));
  pt.shear = {0.1, 0.2};
  const auto r = boundary_rotation(spec, pt, Variant::InseExtended);
  EXPECT_LT((r.W - vec({3.9, 1.8, 2.9, -0.2})).norm(), 1e-14);
  EXPECT_LT((r.lambda - vec({1, 1, -1, -1})).norm(), 1e-15);
  EXPECT_NEAR(r.diagonal_form(), 10.0, 1e-13);
  const PVec u = pt.U;
  const double direct = u.dot(detail::iee_tilde_A(1.0) * u) - 2.0 * (u(0) * 0.1 + u(1) * 0.2);
  EXPECT_NEAR(direct, 10.0, 1e-13);
  EXPECT_NEAR(r.quadratic_form(), direct, 1e-13);
}

TEST(Rotation, DegenerateNormalVelocityThrows) {
  const EquationSpec spec(System::IEE);
  EXPECT_THROW(boundary_rotation(spec, point(vec({0, 1, 1})), Variant::IeeCharacteristic), DegenerateRotation);
  EXPECT_THROW(boundary_rotation(spec, point(vec({1, 1, 1})), Variant::SweCharacteristic), InvalidArgument);
}

TEST(Rotation, RandomStatesSatisfyIdentities) {
  Sampler s(11);
  for (Variant v : {Variant::IeeCharacteristic, Variant::SwePrimitive, Variant::SweCharacteristic,
                    Variant::CeeCharacteristic, Variant::CeeContracted, Variant::InseExtended}) {
    const System sys = variant_system(v);
    EquationParams p;
    p.epsilon = sys == System::INSE ? 0.02 : 0.0;
    const EquationSpec spec(sys, p);
    for (auto real : {Realization::Catalog, Realization::Gradient}) {
      RotationOptions opt;
      opt.realization = real;
      for (int i = 0; i < 200; ++i) {
        BoundaryPoint pt;
        pt.normal = s.normal();
        pt.U = s.state(sys, pt.normal);
        if (sys == System::INSE) pt.shear = {s.uniform(-1, 1), s.uniform(-1, 1)};
        const auto r = boundary_rotation(spec, pt, v, opt);
        const double q = r.quadratic_form();
        const double tol = 1e-12 * (1.0 + std::abs(q) + r.W.squaredNorm() * r.lambda.cwiseAbs().maxCoeff());
        EXPECT_NEAR(r.diagonal_form(), q, tol) << variant_name(v);
        const auto f = flux_matrices(spec, pt.U);
        double flux = pt.U.dot((pt.normal[0] * f.A[0] + pt.normal[1] * f.A[1]) * pt.U);
        if (v == Variant::InseExtended) flux -= r.scale * 2.0 * (r.rotated(0) * pt.shear[0] + r.rotated(1) * pt.shear[1]);
        EXPECT_NEAR(flux, r.scale * q, tol) << variant_name(v);
        Eigen::VectorXd ext(r.M.cols());
        ext.head(pt.U.size()) = pt.U;
        if (v == Variant::InseExtended) ext.tail(2) << pt.shear[0], pt.shear[1];
        EXPECT_LT((r.M * ext - r.W).norm(), 1e-12 * (1.0 + r.W.norm())) << variant_name(v);
      }
    }
  }
}

TEST(Rotation, SweFormIndependentOfSplitParameters) {
  Sampler s(3);
  for (int i = 0; i < 100; ++i) {
    const std::array<double, 2> n = s.normal();
    const PVec U = s.state(System::SWE, n);
    EquationParams a, b;
    b.alpha = 0.05;
    b.beta = 0.4;
    const auto fa = flux_matrices(EquationSpec(System::SWE, a), U);
    const auto fb = flux_matrices(EquationSpec(System::SWE, b), U);
    const double qa = U.dot((n[0] * fa.A[0] + n[1] * fa.A[1]) * U);
    const double qb = U.dot((n[0] * fb.A[0] + n[1] * fb.A[1]) * U);
    EXPECT_NEAR(qa, qb, 1e-12 * (1.0 + std::abs(qa)));
  }
}

TEST(CharacteristicSplit, CountsNegativeEntries) {
  const EquationSpec spec(System::IEE);
  const auto r = boundary_rotation(spec, point(vec({-1, 0.3, 0.5})), Variant::IeeCharacteristic);
  const auto s = characteristic_split(r);
  EXPECT_EQ(s.conditions(), 2);
  EXPECT_EQ(s.minus, (std::vector<int>{0, 1}));
  EXPECT_EQ(s.mask, 3u);

  const auto z = characteristic_split(vec({1.0, 1.0}), vec({0.0, 2.0}));
  EXPECT_EQ(z.conditions(), 0);
  EXPECT_EQ(z.plus, (std::vector<int>{0, 1}));
}

TEST(Psi, KnownValueAndRoot) {
  EXPECT_NEAR(psi_factor(1.4, 0.5), 1.0 - 0.8 / 0.21, 1e-12);
  EXPECT_NEAR(psi_factor(1.4, 0.5), -2.80952, 1e-5);
  const double m2 = psi_root_mach_squared(1.4);
  EXPECT_NEAR(m2, 0.8 / 0.84, 1e-15);
  EXPECT_NEAR(psi_factor(1.4, std::sqrt(m2)), 0.0, 1e-14);
  EXPECT_LT(psi_factor(1.4, 0.9 * std::sqrt(m2)), 0.0);
  EXPECT_GT(psi_factor(1.4, 1.1 * std::sqrt(m2)), 0.0);
  EXPECT_THROW(psi_factor(1.4, 0.0), InvalidArgument);
}

// With gamma = sqrt 2 the root sits exactly at |M_n| = 1.
TEST(Psi, ExactZeroAtSqrtTwo) {
  const QSqrt2 g = QSqrt2::sqrt2();
  const QSqrt2 psi = psi_factor(g, QSqrt2(1));
  EXPECT_EQ(psi, QSqrt2(0));
  EXPECT_NE(psi_factor(g, QSqrt2(2)), QSqrt2(0));
}

TEST(Entropy, DensityIsHalfTheNormAndFluxMatchesForm) {
  Sampler s(5);
  const OperatorSet ops(Grid::rectangle(6, 5), 2);
  for (System sys : {System::IEE, System::SWE, System::CEE}) {
    const EquationSpec spec(sys);
    StateField U(ops.grid(), spec.components());
    for (std::size_t k = 0; k < U.nodes(); ++k) U.set(k, s.state(sys, {1.0, 0.0}));
    const auto e = entropy_functionals(spec, U);
    for (std::size_t k = 0; k < U.nodes(); ++k) {
      const PVec u = U.at(k);
      EXPECT_NEAR(e.density(static_cast<Eigen::Index>(k)), 0.5 * u.dot(spec.norm_matrix() * u), 1e-14);
      const auto f = flux_matrices(spec, u);
      EXPECT_NEAR(e.flux[1](static_cast<Eigen::Index>(k)), u.dot(f.A[1] * u), 1e-14);
    }
  }
}
