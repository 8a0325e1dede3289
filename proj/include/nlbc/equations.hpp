#pragma once

// Skew-symmetric flux matrices, norm matrices and viscous fluxes for the
// incompressible Euler (IEE), shallow water (SWE), compressible Euler (CEE)
// and incompressible Navier-Stokes (INSE) systems, written in the form
//
//   P U_t + (A_i U)_{x_i} + A_i^T U_{x_i} + C U = eps (D_i)_{x_i}.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <string>

#include "nlbc/errors.hpp"
#include "nlbc/field.hpp"
#include "nlbc/sbp.hpp"

namespace nlbc {

enum class System { IEE, SWE, CEE, INSE };

inline const char* system_name(System s) {
  switch (s) {
    case System::IEE: return "iee";
    case System::SWE: return "swe";
    case System::CEE: return "cee";
    case System::INSE: return "inse";
  }
  return "?";
}

struct EquationParams {
  double gamma = 1.4;     // CEE ratio of specific heats, > 1
  double epsilon = 0.0;   // INSE non-dimensional viscosity
  double coriolis = 0.0;  // SWE Coriolis parameter f
  double alpha = 0.2;     // SWE split parameters
  double beta = 0.2;
  double kappa = 1e-2;    // IEE/INSE artificial-compressibility relaxation of the pressure row
};

class EquationSpec {
 public:
  EquationSpec(System system, EquationParams params = {}) : system_(system), p_(params) {
    if (system_ == System::CEE && !(p_.gamma > 1.0))
      throw InvalidArgument("gamma>1 required for the compressible Euler system");
    if (system_ == System::CEE && !(p_.gamma < 2.0))
      throw InvalidArgument("gamma<2 required for the skew-symmetric compressible form");
    if (p_.epsilon < 0.0) throw InvalidArgument("epsilon must be non-negative");
    if (!(p_.kappa > 0.0)) throw InvalidArgument("kappa must be positive");
  }

  System system() const { return system_; }
  const EquationParams& params() const { return p_; }
  int components() const { return system_ == System::CEE ? 4 : 3; }
  bool viscous() const { return system_ == System::INSE && p_.epsilon > 0.0; }

  /// Indices of the two velocity-carrying components.
  std::array<int, 2> velocity_components() const {
    return system_ == System::IEE || system_ == System::INSE ? std::array<int, 2>{0, 1}
                                                             : std::array<int, 2>{1, 2};
  }

  /// The energy (semi-)norm matrix of the continuous problem.
  PMat norm_matrix() const {
    PMat P = PMat::Identity(components(), components());
    switch (system_) {
      case System::IEE:
      case System::INSE: P(2, 2) = 0.0; break;
      case System::SWE: break;
      case System::CEE:
        P(1, 1) = P(2, 2) = 0.5 * (p_.gamma - 1.0);
        break;
    }
    return P;
  }

  /// Norm matrix of the evolved system: the singular pressure row is relaxed to kappa.
  PMat evolved_norm() const {
    PMat P = norm_matrix();
    if (system_ == System::IEE || system_ == System::INSE) P(2, 2) = p_.kappa;
    return P;
  }

 private:
  System system_;
  EquationParams p_;
};

/// Throws InadmissibleState if `U` violates the positivity requirements of its system.
inline void require_admissible(const EquationSpec& spec, const PVec& U) {
  for (Eigen::Index i = 0; i < U.size(); ++i)
    if (!std::isfinite(U(i))) throw InadmissibleState("non-finite state component");
  if (spec.system() == System::SWE && !(U(0) > 0.0))
    throw InadmissibleState("shallow water geopotential must be positive");
  if (spec.system() == System::CEE && !(U(0) > 0.0))
    throw InadmissibleState("compressible Euler sqrt(rho) must be positive");
  if (spec.system() == System::CEE && !(U(3) > 0.0))
    throw InadmissibleState("compressible Euler sqrt(p) must be positive");
}

struct FluxMatrices {
  std::array<PMat, 2> A;
  PMat C;
};

/// A_1, A_2 and C evaluated at the coefficient state V (V = U for the nonlinear problem).
inline FluxMatrices flux_matrices(const EquationSpec& spec, const PVec& V) {
  require_admissible(spec, V);
  const int n = spec.components();
  FluxMatrices f;
  f.A[0] = PMat::Zero(n, n);
  f.A[1] = PMat::Zero(n, n);
  f.C = PMat::Zero(n, n);
  const auto& p = spec.params();
  switch (spec.system()) {
    case System::IEE:
    case System::INSE: {
      // Symmetric split matrices, halved to the A_i convention.
      const double u = V(0), v = V(1);
      f.A[0] << 0.5 * u, 0, 0.5, 0, 0.5 * u, 0, 0.5, 0, 0;
      f.A[1] << 0.5 * v, 0, 0, 0, 0.5 * v, 0.5, 0, 0.5, 0;
      break;
    }
    case System::SWE: {
      const double s = std::sqrt(V(0));
      const double u = V(1) / s, v = V(2) / s;
      const double a = p.alpha, b = p.beta;
      f.A[0] << a * u, (1 - 3 * a) * s, 0, 2 * a * s, 0.5 * u, 0, 0, 0, 0.5 * u;
      f.A[1] << b * v, 0, (1 - 3 * b) * s, 0, 0.5 * v, 0, 2 * b * s, 0, 0.5 * v;
      f.C << 0, 0, 0, 0, 0, -p.coriolis, 0, p.coriolis, 0;
      break;
    }
    case System::CEE: {
      const double g = p.gamma;
      const double u = V(1) / V(0), v = V(2) / V(0);
      const double c = 2 * (g - 1) * V(3) / V(0);
      f.A[0] << u, 0, 0, 0, 0, 0.5 * (g - 1) * u, 0, 0, 0, 0, 0.5 * (g - 1) * u, 0, 0, c, 0,
          (2 - g) * u;
      f.A[1] << v, 0, 0, 0, 0, 0.5 * (g - 1) * v, 0, 0, 0, 0, 0.5 * (g - 1) * v, 0, 0, 0, c,
          (2 - g) * v;
      f.A[0] *= 0.5;
      f.A[1] *= 0.5;
      break;
    }
  }
  return f;
}

/// Viscous fluxes D_i = P U_{x_i} of the INSE; `epsilon` multiplies them in the equations.
struct ViscousFlux {
  std::array<PVec, 2> D;
  double epsilon = 0.0;

  PVec scaled(int i) const { return epsilon * D[i]; }
  /// Rotated boundary shear (F_n, F_tau) of n_i D_i, scaled by epsilon.
  std::array<double, 2> boundary_shear(const std::array<double, 2>& n) const {
    const PVec F = n[0] * D[0] + n[1] * D[1];
    return {epsilon * (n[0] * F(0) + n[1] * F(1)), epsilon * (-n[1] * F(0) + n[0] * F(1))};
  }
};

inline ViscousFlux viscous_flux(const EquationSpec& spec, const PVec& Ux, const PVec& Uy) {
  if (spec.system() != System::INSE)
    throw InvalidArgument("viscous fluxes are defined for the INSE only");
  const PMat P = spec.norm_matrix();
  ViscousFlux f;
  f.D[0] = P * Ux;
  f.D[1] = P * Uy;
  f.epsilon = spec.params().epsilon;
  return f;
}

/// Psi(M_n) = 1 - 2(gamma-1) / (gamma (2-gamma) M_n^2).
///
/// Generic in the scalar so exact number types can be used to check the sign switch.
template <typename T>
T psi_factor(const T& gamma, const T& mach) {
  if (mach == T(0)) throw InvalidArgument("psi_factor: normal Mach number must be nonzero");
  const T one(1), two(2);
  return one - two * (gamma - one) / (gamma * (two - gamma) * mach * mach);
}

/// Squared normal Mach number at which Psi changes sign.
inline double psi_root_mach_squared(double gamma) {
  return 2.0 * (gamma - 1.0) / (gamma * (2.0 - gamma));
}

/// Sound speed of the CEE in the square-root variables: c^2 = gamma phi_4^2 / phi_1^2.
inline double cee_sound_speed(double gamma, const PVec& Phi) {
  return std::sqrt(gamma) * Phi(3) / Phi(0);
}

/// Pointwise entropy Phi = U^T P U / 2 and entropy fluxes Psi_i = U^T A_i U.
struct EntropyFields {
  Vec density;
  std::array<Vec, 2> flux;
};

inline EntropyFields entropy_functionals(const EquationSpec& spec, const StateField& U) {
  const auto N = static_cast<Eigen::Index>(U.nodes());
  EntropyFields e{Vec::Zero(N), {Vec::Zero(N), Vec::Zero(N)}};
  const PMat P = spec.norm_matrix();
  for (Eigen::Index k = 0; k < N; ++k) {
    const PVec u = U.at(static_cast<std::size_t>(k));
    e.density(k) = 0.5 * u.dot(P * u);
    if (u.isZero(0.0)) continue;
    const auto f = flux_matrices(spec, u);
    e.flux[0](k) = u.dot(f.A[0] * u);
    e.flux[1](k) = u.dot(f.A[1] * u);
  }
  return e;
}

}  // namespace nlbc
