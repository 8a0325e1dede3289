#pragma once

// Semi-discrete SBP-SAT scheme
//
//   P U_t + D_i A_i U + A_i^T D_i U + C U + L_D = eps D_i (P D_i U) + F
//
// and explicit Runge-Kutta time stepping with strong injection.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nlbc/boundary.hpp"
#include "nlbc/equations.hpp"
#include "nlbc/errors.hpp"
#include "nlbc/field.hpp"
#include "nlbc/rotation.hpp"
#include "nlbc/sbp.hpp"

namespace nlbc {

using SpaceTimeFunction = std::function<PVec(double, double, double)>;

struct SemiDiscreteSystem {
  EquationSpec spec;
  OperatorSet ops;
  std::vector<BoundarySpec> boundaries;  // one per face
  RotationOptions rotation{};
  double split_tolerance = 1e-10;
  /// Frozen coefficient state V(x, y, t); empty for the nonlinear problem V = U.
  SpaceTimeFunction frozen;
  /// Source term added to the right-hand side.
  SpaceTimeFunction forcing;

  SemiDiscreteSystem(EquationSpec s, OperatorSet o, std::vector<BoundarySpec> b)
      : spec(std::move(s)), ops(std::move(o)), boundaries(std::move(b)) {
    validate();
  }

  const BoundarySpec& boundary(FaceId id) const {
    for (const auto& b : boundaries)
      if (b.face == id) return b;
    throw InvalidArgument(std::string("no boundary condition for the ") + face_name(id) + " face");
  }

  void validate() const {
    for (const auto& f : ops.faces()) {
      int count = 0;
      for (const auto& b : boundaries) count += b.face == f.id;
      if (count != 1)
        throw InvalidArgument(std::string("the ") + face_name(f.id) +
                              " face needs exactly one boundary condition");
    }
    for (const auto& b : boundaries) {
      if (!variant_compatible(b.variant, spec.system()))
        throw InvalidArgument(std::string(face_name(b.face)) + " face: variant " +
                              variant_name(b.variant) + " does not apply to " +
                              system_name(spec.system()));
      b.validate();
    }
  }

  bool has_strong_faces() const {
    for (const auto& b : boundaries)
      if (b.mode == Imposition::Strong) return true;
    return false;
  }
};

/// Per-face boundary sums at one instant (each already multiplied by ds and summed).
struct FaceBalance {
  FaceId face = FaceId::West;
  double boundary = 0.0;  // sum of W^T Lambda W ds
  double sat = 0.0;       // sum of 2 (W^-)^T Sigma residual ds
  double data = 0.0;      // sum of G^T G ds
  double entropy_flux = 0.0;  // sum of Psi . n ds
};

struct RhsEvaluation {
  Mat dUdt;          // N x n
  Mat rhs;           // P dUdt, the weighted right-hand side
  Mat lifting;       // L_D, N x n
  std::vector<FaceBalance> faces;
  double viscous_dissipation = 0.0;  // eps sum_i ||D_i U||^2_P
  double forcing_work = 0.0;         // <U, F>
};

namespace detail {

inline BoundaryPoint boundary_point(const SemiDiscreteSystem& sys, const StateField& U,
                                    const std::array<Mat, 2>* grads, std::size_t k,
                                    const Face& face, double t) {
  BoundaryPoint pt;
  pt.U = U.at(k);
  pt.normal = face.normal;
  if (sys.frozen) {
    const auto x = sys.ops.grid().position(k);
    pt.V = sys.frozen(x[0], x[1], t);
  }
  if (grads && sys.spec.viscous()) {
    const auto& g = *grads;
    const PVec ux = g[0].row(static_cast<Eigen::Index>(k)).transpose();
    const PVec uy = g[1].row(static_cast<Eigen::Index>(k)).transpose();
    pt.shear = viscous_flux(sys.spec, ux, uy).boundary_shear(face.normal);
  }
  return pt;
}

inline Mat derivative_columns(const OperatorSet& ops, int d, const Mat& U) {
  Mat out(U.rows(), U.cols());
  for (Eigen::Index c = 0; c < U.cols(); ++c) out.col(c) = ops.derivative(d, U.col(c));
  return out;
}

/// Adds Z with <U, Z> = ds epsilon (s_n F_n + s_tau F_tau) at node k, where F is the rotated
/// SBP normal derivative of the velocity; Z lives on the grid line through k.
inline void add_shear_lifting(const SemiDiscreteSystem& sys, const Face& face, std::size_t k,
                              double ds, const Vec& s, Mat& lifting) {
  const auto& ops = sys.ops;
  const auto& n = face.normal;
  const double eps = sys.spec.params().epsilon;
  const int d = face.axis;
  const double nd = n[static_cast<std::size_t>(d)];
  const double cu = s(0) * n[0] - s(1) * n[1];
  const double cv = s(0) * n[1] + s(1) * n[0];
  const auto [iu, iv] = sys.spec.velocity_components();
  const Grid& g = ops.grid();
  const std::size_t nx = static_cast<std::size_t>(g.nodes(0));
  const std::size_t i = k % nx, j = k / nx;
  const Mat& D = ops.axis(d).D;
  const Eigen::Index row = static_cast<Eigen::Index>(d == 0 ? i : j);
  const Vec& w = ops.volume_weights();
  for (Eigen::Index m = 0; m < D.cols(); ++m) {
    const double c = D(row, m);
    if (c == 0.0) continue;
    const std::size_t kk = d == 0 ? g.index(static_cast<int>(m), static_cast<int>(j))
                                  : g.index(static_cast<int>(i), static_cast<int>(m));
    const double f = ds * eps * nd * c / w(static_cast<Eigen::Index>(kk));
    lifting(static_cast<Eigen::Index>(kk), iu) += f * cu;
    lifting(static_cast<Eigen::Index>(kk), iv) += f * cv;
  }
}

}  // namespace detail

/// Full right-hand side with boundary bookkeeping.
inline RhsEvaluation evaluate_rhs(const SemiDiscreteSystem& sys, const StateField& U, double t) {
  const auto& spec = sys.spec;
  const auto& ops = sys.ops;
  const int n = spec.components();
  const auto N = static_cast<Eigen::Index>(U.nodes());
  const int dim = ops.dimension();
  if (U.components() != n) throw InvalidArgument("state field has the wrong component count");
  if (!U.all_finite()) throw InadmissibleState("non-finite values in the state field");

  std::array<Mat, 2> grads;
  for (int d = 0; d < dim; ++d) grads[d] = detail::derivative_columns(ops, d, U.values());

  std::array<Mat, 2> AU{Mat::Zero(N, n), Mat::Zero(N, n)};
  Mat volume = Mat::Zero(N, n);
  for (Eigen::Index k = 0; k < N; ++k) {
    const auto x = ops.grid().position(static_cast<std::size_t>(k));
    const PVec u = U.at(static_cast<std::size_t>(k));
    const PVec V = sys.frozen ? sys.frozen(x[0], x[1], t) : u;
    const FluxMatrices f = flux_matrices(spec, V);
    PVec acc = f.C * u;
    for (int d = 0; d < dim; ++d) {
      AU[d].row(k) = (f.A[d] * u).transpose();
      acc += f.A[d].transpose() * PVec(grads[d].row(k).transpose());
    }
    volume.row(k) = acc.transpose();
  }
  for (int d = 0; d < dim; ++d) volume += detail::derivative_columns(ops, d, AU[d]);

  RhsEvaluation ev;
  ev.rhs = -volume;
  const Vec& w = ops.volume_weights();

  if (spec.viscous()) {
    const double eps = spec.params().epsilon;
    const Vec P = spec.norm_matrix().diagonal();
    for (int d = 0; d < dim; ++d) {
      const Mat flux = grads[d] * P.asDiagonal();
      ev.rhs += eps * detail::derivative_columns(ops, d, flux);
      ev.viscous_dissipation +=
          eps * (w.asDiagonal() * (grads[d].cwiseProduct(flux))).sum();
    }
  }

  if (sys.forcing) {
    Mat F(N, n);
    for (Eigen::Index k = 0; k < N; ++k) {
      const auto x = ops.grid().position(static_cast<std::size_t>(k));
      F.row(k) = sys.forcing(x[0], x[1], t).transpose();
    }
    ev.rhs += F;
    ev.forcing_work = (w.asDiagonal() * U.values().cwiseProduct(F)).sum();
  }

  ev.lifting = Mat::Zero(N, n);
  for (const auto& face : ops.faces()) {
    const BoundarySpec& bc = sys.boundary(face.id);
    FaceBalance fb;
    fb.face = face.id;
    for (std::size_t m = 0; m < face.nodes.size(); ++m) {
      const std::size_t k = face.nodes[m];
      const double ds = face.weights(static_cast<Eigen::Index>(m));
      const auto x = ops.grid().position(k);
      const BoundaryPoint pt = detail::boundary_point(sys, U, &grads, k, face, t);
      // Entropy flux Psi . n with Psi_i = U^T A_i U.
      {
        const FluxMatrices f = flux_matrices(spec, pt.coefficient());
        const PVec u = pt.U;
        fb.entropy_flux += ds * (face.normal[0] * u.dot(f.A[0] * u) +
                                 (dim > 1 ? face.normal[1] * u.dot(f.A[1] * u) : 0.0));
        if (spec.viscous()) {
          const PVec r = normal_rotation(spec, face.normal) * u;
          fb.entropy_flux -= ds * (r(0) * pt.shear[0] + r(1) * pt.shear[1]);
        }
      }
      const PointCondition pc =
          evaluate_condition(spec, bc, pt, x[0], x[1], t, sys.rotation, sys.split_tolerance);
      fb.boundary += ds * pc.boundary_term();
      fb.data += ds * pc.data_term();
      if (bc.mode == Imposition::Weak) {
        fb.sat += ds * pc.sat_term();
        const Vec L = pc.lifting();
        ev.lifting.row(static_cast<Eigen::Index>(k)) +=
            (ds / w(static_cast<Eigen::Index>(k))) * L.head(n).transpose();
        if (L.size() > n) detail::add_shear_lifting(sys, face, k, ds, L.tail(2), ev.lifting);
      }
    }
    ev.faces.push_back(fb);
  }
  ev.rhs -= ev.lifting;

  const Vec Pinv = spec.evolved_norm().diagonal().cwiseInverse();
  ev.dUdt = ev.rhs * Pinv.asDiagonal();
  return ev;
}

inline StateField semi_discrete_rhs(const SemiDiscreteSystem& sys, const StateField& U, double t) {
  StateField out(U.grid(), U.components());
  out.values() = evaluate_rhs(sys, U, t).dUdt;
  return out;
}

/// The SAT vector L_D of the weak faces.
inline StateField sat_contribution(const SemiDiscreteSystem& sys, const StateField& U, double t) {
  StateField out(U.grid(), U.components());
  out.values() = evaluate_rhs(sys, U, t).lifting;
  return out;
}

/// Overwrites the boundary values of strong faces so that the condition holds exactly.
/// Nodes shared by two strong faces are swept again until both conditions hold.
inline void impose_strong(const SemiDiscreteSystem& sys, StateField& U, double t) {
  if (!sys.has_strong_faces()) return;
  std::array<Mat, 2> grads;
  const bool visc = sys.spec.viscous();
  auto impose_at = [&](const Face& face, const BoundarySpec& bc, std::size_t k) {
    const auto x = sys.ops.grid().position(k);
    const BoundaryPoint pt = detail::boundary_point(sys, U, visc ? &grads : nullptr, k, face, t);
    const BoundaryRotation rot = boundary_rotation(sys.spec, pt, bc.variant, sys.rotation);
    const auto split = characteristic_split(rot, sys.split_tolerance);
    for (int idx : imposed_unknowns(bc.variant, split, sys.spec.components()))
      if (idx >= sys.spec.components())
        throw InvalidArgument(std::string(face_name(face.id)) +
                              " face: strong imposition of a condition on the viscous flux is "
                              "not supported; use weak mode");
    U.set(k, strong_impose(sys.spec, bc, pt, x[0], x[1], t, sys.rotation).U);
  };

  std::map<std::size_t, std::vector<const Face*>> owners;
  for (const auto& face : sys.ops.faces()) {
    const BoundarySpec& bc = sys.boundary(face.id);
    if (bc.mode != Imposition::Strong) continue;
    if (visc)
      for (int d = 0; d < sys.ops.dimension(); ++d)
        grads[d] = detail::derivative_columns(sys.ops, d, U.values());
    for (std::size_t k : face.nodes) {
      impose_at(face, bc, k);
      owners[k].push_back(&face);
    }
  }
  for (const auto& [k, faces] : owners) {
    if (faces.size() < 2) continue;
    for (int sweep = 0; sweep < 10; ++sweep) {
      const PVec before = U.at(k);
      for (const Face* f : faces) impose_at(*f, sys.boundary(f->id), k);
      if ((U.at(k) - before).norm() <= 1e-15 * (1.0 + before.norm())) break;
    }
  }
}

/// Classical four-stage Runge-Kutta step. `f(U, t)` returns dU/dt; `post(U, t)` is
/// applied to every stage value and to the result (strong injection).
template <typename State, typename Rhs, typename Post>
State rk4_step(const Rhs& f, const State& U, double t, double dt, const Post& post) {
  State k1 = f(U, t);
  State s = U + (0.5 * dt) * k1;
  post(s, t + 0.5 * dt);
  State k2 = f(s, t + 0.5 * dt);
  s = U + (0.5 * dt) * k2;
  post(s, t + 0.5 * dt);
  State k3 = f(s, t + 0.5 * dt);
  s = U + dt * k3;
  post(s, t + dt);
  State k4 = f(s, t + dt);
  State out = U + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  post(out, t + dt);
  return out;
}

template <typename State, typename Rhs>
State rk4_step(const Rhs& f, const State& U, double t, double dt) {
  return rk4_step(f, U, t, dt, [](State&, double) {});
}

inline StateField rk4_step(const SemiDiscreteSystem& sys, const StateField& U, double t,
                           double dt) {
  auto f = [&](const Mat& V, double tt) {
    StateField s(U.grid(), U.components());
    s.values() = V;
    return Mat(evaluate_rhs(sys, s, tt).dUdt);
  };
  auto post = [&](Mat& V, double tt) {
    StateField s(U.grid(), U.components());
    s.values() = V;
    impose_strong(sys, s, tt);
    V = s.values();
  };
  StateField out(U.grid(), U.components());
  out.values() = rk4_step(f, U.values(), t, dt, post);
  if (!out.all_finite()) throw NumericalAbort("non-finite values after a Runge-Kutta step", 0);
  return out;
}

/// dt = cfl * h_min / rho, with rho the largest of the advective spectral radius
/// rho(P^{-1} A_i), the catalog |lambda| and the penalty stiffness at boundary nodes, plus
/// the viscous term 2 eps h sum_d ||D_d||_inf^2 (at least 2 eps / h).
inline double stable_dt(const SemiDiscreteSystem& sys, const StateField& U, double cfl,
                        double t = 0.0) {
  if (!(cfl > 0.0)) throw InvalidArgument("cfl must be positive");
  const auto& spec = sys.spec;
  const auto& ops = sys.ops;
  const double h = ops.grid().min_spacing();
  const Vec Pis = spec.evolved_norm().diagonal().cwiseInverse().cwiseSqrt();
  double rho = 0.0;
  for (std::size_t k = 0; k < U.nodes(); ++k) {
    const auto x = ops.grid().position(k);
    const PVec V = sys.frozen ? sys.frozen(x[0], x[1], t) : U.at(k);
    const FluxMatrices f = flux_matrices(spec, V);
    for (int d = 0; d < ops.dimension(); ++d) {
      // The linearized skew-symmetric split acts as (A + A^T) d/dx.
      const Mat B = Pis.asDiagonal() * Mat(f.A[d] + f.A[d].transpose()) * Pis.asDiagonal();
      rho = std::max(rho, Eigen::SelfAdjointEigenSolver<Mat>(B).eigenvalues().cwiseAbs().maxCoeff());
    }
  }
  const Vec& w = ops.volume_weights();
  for (const auto& face : ops.faces()) {
    const BoundarySpec& bc = sys.boundary(face.id);
    for (std::size_t i = 0; i < face.nodes.size(); ++i) {
      const std::size_t k = face.nodes[i];
      const BoundaryPoint pt = detail::boundary_point(sys, U, nullptr, k, face, t);
      const BoundaryRotation rot = boundary_rotation(spec, pt, bc.variant, sys.rotation);
      rho = std::max(rho, rot.lambda.cwiseAbs().maxCoeff());
      if (bc.mode != Imposition::Weak) continue;
      // Penalty stiffness 2 (M^-)^T |Lambda^-| M^- ds / w_k, measured in the evolved norm.
      const CharacteristicSplit split = characteristic_split(rot, sys.split_tolerance);
      if (split.conditions() == 0) continue;
      const RMat Mm = detail::gather_rows(rot.M, split.minus);
      const Vec lam = detail::gather(rot.lambda_eff(), split.minus).cwiseAbs();
      const Mat Mc = Mat(Mm).leftCols(spec.components()) * Pis.asDiagonal();
      const Mat J = 2.0 * face.weights[i] / w(static_cast<Eigen::Index>(k)) *
                    Mc.transpose() * lam.asDiagonal() * Mc;
      rho = std::max(rho, h * Eigen::SelfAdjointEigenSolver<Mat>(J).eigenvalues().maxCoeff());
    }
  }
  if (spec.viscous()) {
    // The wide second derivative D_i D_i, with its boundary rows, dominates 2 eps / h.
    double dd = 0.0;
    for (int d = 0; d < ops.dimension(); ++d) {
      const double nrm = ops.axis(d).D.cwiseAbs().rowwise().sum().maxCoeff();
      dd += nrm * nrm;
    }
    rho += 2.0 * spec.params().epsilon * std::max(1.0 / h, h * dd);
  }
  if (!(rho > 0.0))
    throw InvalidArgument("stable_dt: zero wave speed and no viscosity; configure a fixed dt");
  return cfl * h / rho;
}

}  // namespace nlbc
