#pragma once

// Boundary-term rotations: at a boundary point the integrand U^T (n_i A_i) U is
// rewritten as W^T Lambda W with solution-dependent "characteristic" variables
// W = T^{-1}(U) U_rotated. Each catalog variant fixes one such rewriting.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "nlbc/equations.hpp"
#include "nlbc/errors.hpp"

namespace nlbc {

enum class Variant {
  IeeCharacteristic,
  IeeVelocitySqrtPressure,  // experimental: W = (u_n, u_tau, sqrt p)
  SwePrimitive,
  SweCharacteristic,
  CeeCharacteristic,
  CeeContracted,
  InseExtended,
};

inline const char* variant_name(Variant v) {
  switch (v) {
    case Variant::IeeCharacteristic: return "iee-char";
    case Variant::IeeVelocitySqrtPressure: return "iee-sqrtp";
    case Variant::SwePrimitive: return "swe-primitive";
    case Variant::SweCharacteristic: return "swe-char";
    case Variant::CeeCharacteristic: return "cee-char";
    case Variant::CeeContracted: return "cee-contracted";
    case Variant::InseExtended: return "inse-extended";
  }
  return "?";
}

inline std::optional<Variant> parse_variant(const std::string& s) {
  for (Variant v : {Variant::IeeCharacteristic, Variant::IeeVelocitySqrtPressure,
                    Variant::SwePrimitive, Variant::SweCharacteristic, Variant::CeeCharacteristic,
                    Variant::CeeContracted, Variant::InseExtended})
    if (s == variant_name(v)) return v;
  return std::nullopt;
}

inline System variant_system(Variant v) {
  switch (v) {
    case Variant::IeeCharacteristic:
    case Variant::IeeVelocitySqrtPressure: return System::IEE;
    case Variant::SwePrimitive:
    case Variant::SweCharacteristic: return System::SWE;
    case Variant::CeeCharacteristic:
    case Variant::CeeContracted: return System::CEE;
    case Variant::InseExtended: return System::INSE;
  }
  return System::IEE;
}

inline bool variant_compatible(Variant v, System s) {
  const System vs = variant_system(v);
  // The inviscid IEE rotations also serve the INSE when epsilon = 0 effects are ignored.
  return vs == s || (s == System::INSE && vs == System::IEE);
}

/// Variants whose change of variables is linear in U for a frozen coefficient state V.
inline bool variant_supports_frozen(Variant v) {
  return v == Variant::IeeCharacteristic || v == Variant::InseExtended;
}

/// Number of entries of W (the INSE extended system carries four).
inline int variant_width(Variant v, int components) {
  return v == Variant::InseExtended ? 4 : components;
}

/// How the solution-dependent T^{-1}(U) with T^{-1}(U) U_rotated = W is realized.
/// `Catalog` uses the rows listed with each variant. `Gradient` takes row i as
/// grad(f_i) / (k sqrt|lambda_i|) with f_i = sqrt|lambda_i| W_i homogeneous of
/// degree k in U (SWE-char: k = 5/4, CEE-char: k = 1). Both satisfy
/// T^{-1} U = W; with `Gradient` the linearized penalty is symmetric positive
/// semi-definite, which keeps corners where two penalized faces meet stable.
enum class Realization { Catalog, Gradient };

struct RotationOptions {
  double degenerate_threshold = 1e-8;
  Realization realization = Realization::Gradient;
};

/// Data available at one boundary node.
struct BoundaryPoint {
  PVec U;                               // Cartesian state
  std::array<double, 2> normal{1.0, 0.0};
  std::optional<PVec> V;                // frozen coefficient state; empty means V = U
  std::array<double, 2> shear{0.0, 0.0};  // epsilon (F_n, F_tau), INSE only

  const PVec& coefficient() const { return V ? *V : U; }
};

/// Orthogonal map taking the Cartesian velocity pair to (normal, tangential).
inline PMat normal_rotation(const EquationSpec& spec, const std::array<double, 2>& n) {
  const int m = spec.components();
  PMat Rot = PMat::Identity(m, m);
  const auto [a, b] = spec.velocity_components();
  Rot(a, a) = n[0];
  Rot(a, b) = n[1];
  Rot(b, a) = -n[1];
  Rot(b, b) = n[0];
  return Rot;
}

/// Rotation matrices; the INSE acts on the extended vector (U, epsilon F_n, epsilon F_tau).
using RMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 6>;

struct BoundaryRotation {
  Variant variant = Variant::IeeCharacteristic;
  PVec rotated;   // state with (normal, tangential) velocity components
  PMat tilde_A;   // symmetric; rotated^T tilde_A rotated is the boundary integrand
  RMat T_inv;     // T_inv * rotated == W (rotated extended by the shear for the INSE)
  RMat M;         // M * U == W for the Cartesian state (extended likewise)
  PVec W;
  PVec lambda;    // diagonal of Lambda
  /// U^T (n_i A_i) U (minus the viscous part for the INSE) = scale * W^T Lambda W.
  double scale = 1.0;
  std::array<double, 2> shear{0.0, 0.0};

  PVec lambda_eff() const { return scale * lambda; }
  double diagonal_form() const { return W.dot(lambda.cwiseProduct(W)); }
  /// The boundary integrand evaluated directly from tilde_A and the shear.
  double quadratic_form() const {
    double q = rotated.dot(tilde_A * rotated);
    if (variant == Variant::InseExtended) q -= 2.0 * (rotated(0) * shear[0] + rotated(1) * shear[1]);
    return q;
  }
};

namespace detail {

inline void require_nondegenerate(double value, double threshold, Variant v, const char* what) {
  if (!(std::abs(value) >= threshold))
    throw DegenerateRotation(std::string(variant_name(v)) + ": degenerate " + what + " (|" +
                             what + "| = " + std::to_string(std::abs(value)) + " < " +
                             std::to_string(threshold) + ")");
}

inline PMat iee_tilde_A(double vn) {
  PMat A(3, 3);
  A << vn, 0, 1, 0, vn, 0, 1, 0, 0;
  return A;
}

inline PMat cee_tilde_A(double gamma, const PVec& r) {
  const double un = r(1) / r(0);
  const double c = (gamma - 1) * r(3) / r(0);
  PMat A = PMat::Zero(4, 4);
  A(0, 0) = un;
  A(1, 1) = A(2, 2) = 0.5 * (gamma - 1) * un;
  A(1, 3) = A(3, 1) = c;
  A(3, 3) = (2 - gamma) * un;
  return A;
}

}  // namespace detail

inline BoundaryRotation boundary_rotation(const EquationSpec& spec, const BoundaryPoint& pt,
                                          Variant variant, const RotationOptions& opt = {}) {
  if (!variant_compatible(variant, spec.system()))
    throw InvalidArgument(std::string("variant ") + variant_name(variant) +
                          " does not apply to system " + system_name(spec.system()));
  if (pt.V && !variant_supports_frozen(variant))
    throw InvalidArgument(std::string("variant ") + variant_name(variant) +
                          " is nonlinear in U and needs V = U");
  require_admissible(spec, pt.U);

  const double thr = opt.degenerate_threshold;
  const PMat Rot = normal_rotation(spec, pt.normal);
  BoundaryRotation b;
  b.variant = variant;
  b.rotated = Rot * pt.U;
  b.shear = pt.shear;
  const PVec Vr = Rot * pt.coefficient();
  const PVec& r = b.rotated;
  const int n = spec.components();

  switch (variant) {
    case Variant::IeeCharacteristic: {
      const double vn = Vr(0);
      detail::require_nondegenerate(vn, thr, variant, "u_n");
      b.T_inv = PMat::Identity(3, 3);
      b.T_inv(0, 2) = 1.0 / vn;
      b.lambda = PVec(3);
      b.lambda << vn, vn, -1.0 / vn;
      b.tilde_A = detail::iee_tilde_A(vn);
      b.scale = 0.5;
      break;
    }
    case Variant::IeeVelocitySqrtPressure: {
      if (!(r(2) > 0.0))
        throw DegenerateRotation("iee-sqrtp: pressure must be positive for W_3 = sqrt(p)");
      b.T_inv = PMat::Identity(3, 3);
      b.T_inv(2, 2) = 1.0 / std::sqrt(r(2));
      b.lambda = PVec(3);
      b.lambda << r(0), r(0), 2 * r(0);
      b.tilde_A = detail::iee_tilde_A(r(0));
      b.scale = 0.5;
      break;
    }
    case Variant::SwePrimitive: {
      const double un = r(1) / std::sqrt(r(0));
      b.T_inv = PMat::Identity(3, 3);
      b.lambda = PVec(3);
      b.lambda << un, 0.5 * un, 0.5 * un;
      b.tilde_A = b.lambda.asDiagonal();
      b.scale = 1.0;
      break;
    }
    case Variant::SweCharacteristic: {
      detail::require_nondegenerate(r(1), thr, variant, "U_n");
      const double un = r(1) / std::sqrt(r(0));
      b.T_inv = PMat::Zero(3, 3);
      b.T_inv << r(0), 0, 0, r(0), r(1), 0, 0, 0, r(1);
      if (opt.realization == Realization::Gradient) {
        PMat dW(3, 3);
        dW << 2 * r(0), 0, 0, 2 * r(0), 2 * r(1), 0, 0, r(2), r(1);
        PVec W = b.T_inv * r;
        Eigen::RowVector3d dlogS(-0.25 / r(0), -0.5 / r(1), 0.0);
        for (int i = 0; i < 3; ++i) b.T_inv.row(i) = (dW.row(i) + W(i) * dlogS) / 1.25;
      }
      const double d = 1.0 / (2.0 * r(1) * std::sqrt(r(0)));
      b.lambda = PVec(3);
      b.lambda << -d, d, d;
      PVec diag(3);
      diag << un, 0.5 * un, 0.5 * un;
      b.tilde_A = diag.asDiagonal();
      b.scale = 1.0;
      break;
    }
    case Variant::CeeCharacteristic: {
      const double g = spec.params().gamma;
      const double un = r(1) / r(0);
      detail::require_nondegenerate(un, thr, variant, "u_n");
      const double mach = r(1) / (std::sqrt(g) * r(3));
      const double psi = psi_factor(g, mach);
      b.T_inv = PMat::Identity(4, 4);
      b.T_inv(1, 3) = 2.0 * r(3) / r(1);
      if (opt.realization == Realization::Gradient) {
        const PVec W = b.T_inv * r;
        PMat dW = PMat::Identity(4, 4);
        dW(1, 1) = 1.0 - 2.0 * r(3) * r(3) / (r(1) * r(1));
        dW(1, 3) = 4.0 * r(3) / r(1);
        const double K = 2 * (g - 1) / (2 - g);  // Psi = 1 - K phi_4^2 / phi_2^2
        Eigen::RowVector4d dlog_un(-1.0 / r(0), 1.0 / r(1), 0.0, 0.0);
        Eigen::RowVector4d dpsi(0.0, 2 * K * r(3) * r(3) / (r(1) * r(1) * r(1)), 0.0,
                                -2 * K * r(3) / (r(1) * r(1)));
        if (psi == 0.0) throw DegenerateRotation("cee-char: Psi(M_n) = 0");
        for (int i = 0; i < 4; ++i) {
          Eigen::RowVector4d dlogS = 0.5 * dlog_un;
          if (i == 3) dlogS += 0.5 * dpsi / psi;
          b.T_inv.row(i) = dW.row(i) + W(i) * dlogS;
        }
      }
      b.lambda = PVec(4);
      b.lambda << un, 0.5 * (g - 1) * un, 0.5 * (g - 1) * un, (2 - g) * un * psi;
      b.tilde_A = detail::cee_tilde_A(g, r);
      b.scale = 0.5;
      break;
    }
    case Variant::CeeContracted: {
      const double g = spec.params().gamma;
      const double un = r(1) / r(0);
      b.T_inv = PMat::Identity(4, 4);
      b.lambda = PVec(4);
      b.lambda << un, 0.5 * (g - 1) * un, 0.5 * (g - 1) * un, g * un;
      b.tilde_A = detail::cee_tilde_A(g, r);
      b.scale = 0.5;
      break;
    }
    case Variant::InseExtended: {
      const double vn = Vr(0);
      detail::require_nondegenerate(vn, thr, variant, "u_n");
      b.T_inv = RMat::Zero(4, 5);
      b.T_inv << vn, 0, 1, -1, 0, 0, vn, 0, 0, -1, 0, 0, 1, -1, 0, 0, 0, 0, 0, -1;
      b.lambda = PVec(4);
      b.lambda << 1.0 / vn, 1.0 / vn, -1.0 / vn, -1.0 / vn;
      b.tilde_A = detail::iee_tilde_A(vn);
      b.scale = 0.5;
      break;
    }
  }
  (void)n;
  if (variant == Variant::InseExtended) {
    const Eigen::Matrix<double, 5, 1> ext(r(0), r(1), r(2), pt.shear[0], pt.shear[1]);
    b.W = b.T_inv * ext;
    b.M = b.T_inv;
    b.M.leftCols(3) = b.T_inv.leftCols(3) * Rot;
  } else {
    b.W = b.T_inv * r;
    b.M = b.T_inv * Rot;
  }
  return b;
}

/// The extended INSE rotation from the viscous flux at the boundary node.
inline BoundaryRotation extended_rotation_viscous(const EquationSpec& spec, const PVec& U,
                                                  const ViscousFlux& flux,
                                                  const std::array<double, 2>& normal,
                                                  const RotationOptions& opt = {}) {
  BoundaryPoint pt;
  pt.U = U;
  pt.normal = normal;
  pt.shear = flux.boundary_shear(normal);
  return boundary_rotation(spec, pt, Variant::InseExtended, opt);
}

/// Partition of Lambda into strictly negative (incoming) and remaining entries.
struct CharacteristicSplit {
  std::vector<int> minus;
  std::vector<int> plus;
  unsigned mask = 0;  // bit i set iff index i is in `minus`
  PVec W_minus, lambda_minus, W_plus, lambda_plus;

  int conditions() const { return static_cast<int>(minus.size()); }
};

/// Entries with |lambda| below `relative_tolerance * max|lambda|` count as outgoing.
inline CharacteristicSplit characteristic_split(const PVec& W, const PVec& lambda,
                                                double relative_tolerance = 1e-10) {
  CharacteristicSplit s;
  const double cut = relative_tolerance * lambda.cwiseAbs().maxCoeff();
  for (int i = 0; i < lambda.size(); ++i) {
    if (lambda(i) < 0.0 && std::abs(lambda(i)) >= cut && lambda(i) != 0.0) {
      s.minus.push_back(i);
      s.mask |= 1u << i;
    } else {
      s.plus.push_back(i);
    }
  }
  auto gather = [](const PVec& x, const std::vector<int>& idx) {
    PVec y(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) y(static_cast<Eigen::Index>(k)) = x(idx[k]);
    return y;
  };
  s.W_minus = gather(W, s.minus);
  s.lambda_minus = gather(lambda, s.minus);
  s.W_plus = gather(W, s.plus);
  s.lambda_plus = gather(lambda, s.plus);
  return s;
}

inline CharacteristicSplit characteristic_split(const BoundaryRotation& rot,
                                                double relative_tolerance = 1e-10) {
  return characteristic_split(rot.W, rot.lambda, relative_tolerance);
}

inline std::string mask_string(unsigned mask, int width) {
  std::string s = "{";
  bool first = true;
  for (int i = 0; i < width; ++i) {
    if (mask & (1u << i)) {
      if (!first) s += ",";
      s += std::to_string(i);
      first = false;
    }
  }
  return s + "}";
}

}  // namespace nlbc
