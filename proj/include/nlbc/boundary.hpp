#pragma once

// The general nonlinear boundary condition
//
//   sqrt|Lambda^-| W^- = R sqrt(Lambda^+) W^+ + S G
//
// with admissibility checks on R and S, the penalty Sigma = sqrt|Lambda^-|,
// strong imposition and the point lifting term used by the SAT.

#include <Eigen/Dense>

#include <bit>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include "nlbc/equations.hpp"
#include "nlbc/errors.hpp"
#include "nlbc/rotation.hpp"
#include "nlbc/sbp.hpp"

namespace nlbc {

enum class Imposition { Weak, Strong };

enum class Verdict { Strict, SemiDefinite, Violated };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Strict: return "strict";
    case Verdict::SemiDefinite: return "semi-definite";
    case Verdict::Violated: return "violated";
  }
  return "?";
}

struct AdmissibilityReport {
  std::string matrix;
  Mat test;
  double min_eigenvalue = 0.0;
  Verdict verdict = Verdict::Strict;
  Vec witness;  // eigenvector of the smallest eigenvalue when violated
};

namespace detail {

inline AdmissibilityReport classify(std::string name, Mat test, double tol) {
  AdmissibilityReport rep;
  rep.matrix = std::move(name);
  if (test.size() == 0) {
    rep.test = test;
    rep.min_eigenvalue = 0.0;
    rep.verdict = Verdict::Strict;
    return rep;
  }
  const Mat sym = 0.5 * (test + test.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(sym);
  rep.test = sym;
  rep.min_eigenvalue = es.eigenvalues()(0);
  if (rep.min_eigenvalue > tol)
    rep.verdict = Verdict::Strict;
  else if (rep.min_eigenvalue >= -tol)
    rep.verdict = Verdict::SemiDefinite;
  else {
    rep.verdict = Verdict::Violated;
    rep.witness = es.eigenvectors().col(0);
  }
  return rep;
}

}  // namespace detail

/// Verdict on I - R^T R (homogeneous strong and weak conditions).
inline AdmissibilityReport check_R(const Mat& R, double tol = 1e-12) {
  const Mat I = Mat::Identity(R.cols(), R.cols());
  return detail::classify("I - R^T R", I - R.transpose() * R, tol);
}

/// Verdict on I - S^T S - (R^T S)^T (I - R^T R)^{-1} (R^T S); requires a strict R.
inline AdmissibilityReport check_S(const Mat& R, const Mat& S, double tol = 1e-12) {
  if (S.rows() != S.cols() || R.rows() != S.rows())
    throw InvalidArgument("check_S: S must be square with as many rows as R");
  const auto r = check_R(R, tol);
  if (r.verdict != Verdict::Strict)
    throw InvalidArgument(std::string("check_S: R is not strictly admissible (") +
                          verdict_name(r.verdict) +
                          "), so only homogeneous data can be bounded");
  const Mat I = Mat::Identity(S.cols(), S.cols());
  Mat test = I - S.transpose() * S;
  if (R.cols() > 0) {
    const Mat RS = R.transpose() * S;
    const Mat K = Mat::Identity(R.cols(), R.cols()) - R.transpose() * R;
    test -= RS.transpose() * K.ldlt().solve(RS);
  }
  return detail::classify("I - S^T S - (R^T S)^T (I - R^T R)^{-1} R^T S", test, tol);
}

/// Sigma = sqrt|Lambda^-|.
inline Mat sigma_matrix(const Vec& lambda_minus) {
  if ((lambda_minus.array() > 0.0).any())
    throw InvalidArgument("sigma_matrix: Lambda^- must be nonpositive");
  return lambda_minus.cwiseAbs().cwiseSqrt().asDiagonal();
}

/// Boundary term W^T Lambda W after strong imposition of the condition.
inline double strong_boundary_term(const Mat& R, const Mat& S, const Vec& lambda_minus,
                                   const Vec& lambda_plus, const Vec& W_plus, const Vec& G) {
  const Vec sp = lambda_plus.cwiseSqrt();
  const Vec rhs = R * sp.cwiseProduct(W_plus) + S * G;
  const Vec W_minus = rhs.cwiseQuotient(lambda_minus.cwiseAbs().cwiseSqrt());
  return W_plus.dot(lambda_plus.cwiseProduct(W_plus)) +
         W_minus.dot(lambda_minus.cwiseProduct(W_minus));
}

/// Boundary term plus the penalty contribution 2 (W^-)^T Sigma (residual) for weak imposition.
inline double weak_boundary_term(const Mat& R, const Mat& S, const Vec& lambda_minus,
                                 const Vec& lambda_plus, const Vec& W_minus, const Vec& W_plus,
                                 const Vec& G) {
  const Vec sm = lambda_minus.cwiseAbs().cwiseSqrt();
  const Vec sp = lambda_plus.cwiseSqrt();
  const Vec res = sm.cwiseProduct(W_minus) - R * sp.cwiseProduct(W_plus) - S * G;
  return W_plus.dot(lambda_plus.cwiseProduct(W_plus)) +
         W_minus.dot(lambda_minus.cwiseProduct(W_minus)) + 2.0 * W_minus.dot(sm.cwiseProduct(res));
}

/// R and S for one sign pattern of Lambda. R may depend on the boundary state.
struct Regime {
  Mat R;
  Mat S;
  std::function<Mat(const EquationSpec&, const BoundaryRotation&)> state_R;

  Mat R_at(const EquationSpec& spec, const BoundaryRotation& rot) const {
    return state_R ? state_R(spec, rot) : R;
  }
};

/// Boundary data G. `Reference` derives G from a reference state through the
/// condition itself, so that the reference state satisfies it exactly.
struct BoundaryData {
  enum class Kind { Zero, Constant, Reference };
  Kind kind = Kind::Zero;
  Vec constant;
  std::function<PVec(double, double, double)> state;
  /// Optional reference gradient (U_x, U_y), used for the INSE shear.
  std::function<std::array<PVec, 2>(double, double, double)> gradient;
};

struct BoundarySpec {
  FaceId face = FaceId::West;
  Variant variant = Variant::IeeCharacteristic;
  Imposition mode = Imposition::Weak;
  std::map<unsigned, Regime> regimes;  // keyed by the bit mask of negative entries of Lambda
  BoundaryData data;
  std::string name;

  const Regime& regime(unsigned mask, int width) const {
    auto it = regimes.find(mask);
    if (it == regimes.end())
      throw RegimeChange(std::string(face_name(face)) + " face (" + variant_name(variant) +
                         "): no R/S given for the sign pattern " + mask_string(mask, width) +
                         " of Lambda");
    return it->second;
  }

  void validate() const {
    for (const auto& [mask, reg] : regimes) {
      const int m = std::popcount(mask);
      if (reg.S.rows() != m || reg.S.cols() != m)
        throw InvalidArgument("S must be square of the regime's condition count");
      if (!reg.state_R && reg.R.rows() != m)
        throw InvalidArgument("R row count must equal the regime's condition count");
      if (m > 0 && std::abs(reg.S.determinant()) < 1e-14)
        throw InvalidArgument("S must be nonsingular");
    }
  }
};

namespace detail {

inline PVec gather(const PVec& x, const std::vector<int>& idx) {
  PVec y(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) y(static_cast<Eigen::Index>(k)) = x(idx[k]);
  return y;
}

template <typename Matrix>
Matrix gather_rows(const Matrix& A, const std::vector<int>& idx) {
  Matrix B(static_cast<Eigen::Index>(idx.size()), A.cols());
  for (std::size_t k = 0; k < idx.size(); ++k) B.row(static_cast<Eigen::Index>(k)) = A.row(idx[k]);
  return B;
}

}  // namespace detail

/// Everything the boundary condition yields at one node.
struct PointCondition {
  BoundaryRotation rot;
  CharacteristicSplit split;
  Mat R, S;
  Vec sqrt_minus;  // sqrt|Lambda^-|, i.e. Sigma
  Vec sqrt_plus;
  Vec G;
  Vec residual;  // sqrt|Lambda^-| W^- - R sqrt(Lambda^+) W^+ - S G

  /// W^T Lambda W, equal to U^T (n_i A_i) U at the node.
  double boundary_term() const { return rot.scale * rot.diagonal_form(); }
  double sat_term() const {
    return 2.0 * Vec(split.W_minus).dot(sqrt_minus.cwiseProduct(residual));
  }
  double data_term() const { return G.squaredNorm(); }
  /// Point lifting 2 (I^- M)^T Sigma residual in Cartesian variables. For the INSE the two
  /// trailing entries weight epsilon (F_n, F_tau) and act through the normal derivative.
  Vec lifting() const {
    const RMat Mm = detail::gather_rows(rot.M, split.minus);
    return 2.0 * Mat(Mm).transpose() * sqrt_minus.cwiseProduct(residual);
  }
};

/// sqrt|Lambda^-| W^- - R sqrt(Lambda^+) W^+ for a rotation, using the given index split.
inline Vec condition_form(const BoundaryRotation& rot, const CharacteristicSplit& split,
                          const Mat& R) {
  const PVec lam = rot.lambda_eff();
  const Vec sm = detail::gather(lam, split.minus).cwiseAbs().cwiseSqrt();
  const Vec sp = detail::gather(lam, split.plus).cwiseAbs().cwiseSqrt();
  const Vec Wm = detail::gather(rot.W, split.minus);
  const Vec Wp = detail::gather(rot.W, split.plus);
  return sm.cwiseProduct(Wm) - R * sp.cwiseProduct(Wp);
}

/// G at a node for the node's index split.
inline Vec data_vector(const EquationSpec& spec, const BoundarySpec& bc, const BoundaryPoint& pt,
                       const CharacteristicSplit& split, const Regime& reg, double x, double y,
                       double t, const RotationOptions& opt = {}) {
  const int m = split.conditions();
  switch (bc.data.kind) {
    case BoundaryData::Kind::Zero: return Vec::Zero(m);
    case BoundaryData::Kind::Constant:
      if (bc.data.constant.size() != m)
        throw InvalidArgument(std::string(face_name(bc.face)) +
                              " face: constant data has the wrong length for this regime");
      return bc.data.constant;
    case BoundaryData::Kind::Reference: {
      if (m == 0) return Vec::Zero(0);
      BoundaryPoint ref = pt;
      ref.U = bc.data.state(x, y, t);
      ref.shear = {0.0, 0.0};
      if (bc.data.gradient && bc.variant == Variant::InseExtended) {
        const auto g = bc.data.gradient(x, y, t);
        ref.shear = viscous_flux(spec, g[0], g[1]).boundary_shear(pt.normal);
      }
      const BoundaryRotation rr = boundary_rotation(spec, ref, bc.variant, opt);
      const Vec f = condition_form(rr, split, reg.R_at(spec, rr));
      return reg.S.partialPivLu().solve(f);
    }
  }
  return Vec::Zero(m);
}

inline PointCondition evaluate_condition(const EquationSpec& spec, const BoundarySpec& bc,
                                         const BoundaryPoint& pt, double x, double y, double t,
                                         const RotationOptions& opt = {},
                                         double split_tolerance = 1e-10) {
  PointCondition pc;
  pc.rot = boundary_rotation(spec, pt, bc.variant, opt);
  pc.split = characteristic_split(pc.rot, split_tolerance);
  const int width = static_cast<int>(pc.rot.lambda.size());
  const Regime& reg = bc.regime(pc.split.mask, width);
  pc.R = reg.R_at(spec, pc.rot);
  pc.S = reg.S;
  const PVec lam = pc.rot.lambda_eff();
  pc.sqrt_minus = detail::gather(lam, pc.split.minus).cwiseAbs().cwiseSqrt();
  pc.sqrt_plus = detail::gather(lam, pc.split.plus).cwiseAbs().cwiseSqrt();
  pc.G = data_vector(spec, bc, pt, pc.split, reg, x, y, t, opt);
  pc.residual = condition_form(pc.rot, pc.split, pc.R) - pc.S * pc.G;
  return pc;
}

/// L = S^{-1} (I^- - R I^+) sqrt|Lambda| M in Cartesian variables, so that L U - G = S^{-1} residual.
inline Mat boundary_operator(const EquationSpec& spec, const BoundarySpec& bc,
                             const BoundaryPoint& pt, const RotationOptions& opt = {}) {
  const BoundaryRotation rot = boundary_rotation(spec, pt, bc.variant, opt);
  const CharacteristicSplit split = characteristic_split(rot);
  const Regime& reg = bc.regime(split.mask, static_cast<int>(rot.lambda.size()));
  const PVec root = rot.lambda_eff().cwiseAbs().cwiseSqrt();
  const Mat scaled = root.asDiagonal() * Mat(rot.M);
  const Mat Mm = detail::gather_rows(scaled, split.minus);
  const Mat Mp = detail::gather_rows(scaled, split.plus);
  const Mat R = reg.R_at(spec, rot);
  return reg.S.partialPivLu().solve(Mm - R * Mp);
}

/// Indices into the extended point vector (rotated state, then the two shear
/// components) that strong imposition solves for: one per negative entry of Lambda.
inline std::vector<int> imposed_unknowns(Variant v, const CharacteristicSplit& split, int n) {
  std::vector<int> out;
  for (int i : split.minus) out.push_back(v == Variant::InseExtended && i == 3 ? n + 1 : i);
  return out;
}

/// Returns a state whose characteristic split satisfies the condition exactly.
///
/// The imposed unknowns (see imposed_unknowns) are found by Newton's method with
/// all other rotated components held fixed; the regime must not change.
inline BoundaryPoint strong_impose(const EquationSpec& spec, const BoundarySpec& bc,
                                   const BoundaryPoint& pt, double x, double y, double t,
                                   const RotationOptions& opt = {}) {
  const PointCondition pc0 = evaluate_condition(spec, bc, pt, x, y, t, opt);
  const int m = pc0.split.conditions();
  if (m == 0) return pt;
  const int n = spec.components();
  const std::vector<int> unk = imposed_unknowns(bc.variant, pc0.split, n);
  const PMat Rot = normal_rotation(spec, pt.normal);
  const Vec SG = pc0.S * pc0.G;

  Vec z(n + 2);
  z.head(n) = Rot * pt.U;
  z(n) = pt.shear[0];
  z(n + 1) = pt.shear[1];

  auto point_of = [&](const Vec& zz) {
    BoundaryPoint q = pt;
    q.U = Rot.transpose() * PVec(zz.head(n));
    q.shear = {zz(n), zz(n + 1)};
    return q;
  };
  // Residual with the node's sign pattern; throws if the pattern changes.
  auto residual = [&](const Vec& zz) -> Vec {
    const BoundaryPoint q = point_of(zz);
    const BoundaryRotation rot = boundary_rotation(spec, q, bc.variant, opt);
    const CharacteristicSplit s = characteristic_split(rot);
    if (s.mask != pc0.split.mask)
      throw RegimeChange("strong imposition: sign pattern of Lambda changed during the solve");
    const Regime& reg = bc.regime(s.mask, static_cast<int>(rot.lambda.size()));
    return condition_form(rot, s, reg.R_at(spec, rot)) - SG;
  };
  auto safe_residual = [&](const Vec& zz, Vec& out) {
    try {
      out = residual(zz);
      return out.allFinite();
    } catch (const Error&) {
      return false;
    }
  };

  Vec r = pc0.residual;
  const double scale = 1.0 + SG.norm() + (pc0.residual + SG).norm();
  for (int it = 0; it < 80 && r.norm() > 1e-15 * scale; ++it) {
    Mat J(m, m);
    for (int c = 0; c < m; ++c) {
      const int k = unk[static_cast<std::size_t>(c)];
      const double h = 1e-6 * std::max(1.0, std::abs(z(k)));
      Vec zp = z, zm = z, rp, rm;
      zp(k) += h;
      zm(k) -= h;
      const bool okp = safe_residual(zp, rp), okm = safe_residual(zm, rm);
      if (okp && okm)
        J.col(c) = (rp - rm) / (2 * h);
      else if (okp)
        J.col(c) = (rp - r) / h;
      else if (okm)
        J.col(c) = (r - rm) / h;
      else
        throw InadmissibleState("strong imposition: no admissible state near the boundary value");
    }
    const Vec step = J.fullPivLu().solve(-r);
    double a = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls, a *= 0.5) {
      Vec zt = z;
      for (int c = 0; c < m; ++c) zt(unk[static_cast<std::size_t>(c)]) += a * step(c);
      Vec rt;
      if (safe_residual(zt, rt) && rt.norm() < r.norm()) {
        z = zt;
        r = rt;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  if (!(r.norm() <= 1e-12 * scale))
    throw InadmissibleState(std::string("strong imposition on the ") + face_name(bc.face) +
                            " face: the condition cannot be met by a nearby state (residual " +
                            std::to_string(r.norm()) + ")");
  return point_of(z);
}

}  // namespace nlbc
