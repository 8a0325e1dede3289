#pragma once

// Energy and entropy monitors, the semi-discrete energy-rate identity and the
// energy bounds for homogeneous and inhomogeneous data.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "nlbc/solver.hpp"

namespace nlbc {

enum class NormKind { Evolved, Continuous };

/// ||U||^2 in the P (x) P_Omega norm. `Evolved` uses the kappa-relaxed P of the solver.
inline double energy_norm(const EquationSpec& spec, const OperatorSet& ops, const StateField& U,
                          NormKind kind = NormKind::Evolved) {
  const Vec P = (kind == NormKind::Evolved ? spec.evolved_norm() : spec.norm_matrix()).diagonal();
  const Vec& w = ops.volume_weights();
  return (w.asDiagonal() * (U.values().cwiseAbs2() * P)).sum();
}

inline double energy_norm(const SemiDiscreteSystem& sys, const StateField& U) {
  return energy_norm(sys.spec, sys.ops, U);
}

/// Terms of 1/2 dE/dt + sum_j [W^T Lambda W + 2 (W^-)^T Sigma r]_j ds_j + eps ||DU||^2 - <U,F> = 0.
struct EnergyRate {
  double half_rate = 0.0;  // <U, P U_t> from the analytic right-hand side
  double boundary = 0.0;
  double sat = 0.0;
  double viscous = 0.0;
  double forcing = 0.0;
  double data = 0.0;  // sum_j [G^T G]_j ds_j
  double entropy_flux = 0.0;
  std::vector<FaceBalance> faces;

  double residual() const { return half_rate + boundary + sat + viscous - forcing; }
  double relative_residual() const { return std::abs(residual()) / (1.0 + std::abs(boundary + sat)); }
};

inline EnergyRate energy_rate(const SemiDiscreteSystem& sys, const StateField& U, double t) {
  const RhsEvaluation ev = evaluate_rhs(sys, U, t);
  const Vec& w = sys.ops.volume_weights();
  EnergyRate r;
  r.half_rate = (w.asDiagonal() * U.values().cwiseProduct(ev.rhs)).sum();
  for (const auto& f : ev.faces) {
    r.boundary += f.boundary;
    r.sat += f.sat;
    r.data += f.data;
    r.entropy_flux += f.entropy_flux;
  }
  r.viscous = ev.viscous_dissipation;
  r.forcing = ev.forcing_work;
  r.faces = ev.faces;
  return r;
}

/// |1/2 dE/dt + boundary sum| / (1 + |boundary sum|); zero for every admissible state.
inline double energy_rate_identity(const SemiDiscreteSystem& sys, const StateField& U, double t) {
  for (const auto& b : sys.boundaries)
    if (b.mode != Imposition::Weak)
      throw InvalidArgument("energy_rate_identity applies to weakly imposed conditions only");
  return energy_rate(sys, U, t).relative_residual();
}

/// |d/dt int Phi + oint Psi.n ds + SAT| relative to the flux, with Phi = U^T P U / 2 in the
/// evolved norm. The SAT is included because it is part of the discrete surface flux.
inline double entropy_balance(const SemiDiscreteSystem& sys, const StateField& U, double t) {
  const EnergyRate r = energy_rate(sys, U, t);
  const double res = r.half_rate + r.entropy_flux + r.sat + r.viscous - r.forcing;
  return std::abs(res) / (1.0 + std::abs(r.entropy_flux) + std::abs(r.sat));
}

/// ||u_x + v_y||_{P_Omega} for the IEE and INSE; zero for other systems.
inline double divergence_norm(const SemiDiscreteSystem& sys, const StateField& U) {
  if (sys.spec.system() != System::IEE && sys.spec.system() != System::INSE) return 0.0;
  if (sys.ops.dimension() < 2) return std::sqrt(inner_product(sys.ops, sys.ops.derivative(0, U.component(0)), sys.ops.derivative(0, U.component(0))));
  const Vec div = sys.ops.derivative(0, U.component(0)) + sys.ops.derivative(1, U.component(1));
  return std::sqrt(inner_product(sys.ops, div, div));
}

struct EnergySample {
  double t = 0.0;
  long step = 0;
  double energy = 0.0;
  std::array<double, 4> boundary{};
  std::array<double, 4> sat{};
  double identity_residual = 0.0;
  double data_integral = 0.0;  // 2 int sum G^T G ds dt
  double divergence = 0.0;
  double entropy_flux = 0.0;
};

struct EnergyReport {
  System system = System::IEE;
  std::vector<FaceId> faces;
  std::vector<EnergySample> samples;
  double initial_energy = 0.0;
  long steps = 0;
  double dt = 0.0;
  bool homogeneous = true;
  std::optional<std::string> abort_message;
  long abort_step = -1;

  std::vector<std::string> header() const {
    std::vector<std::string> h{"t", "step", "energy"};
    for (FaceId f : faces) h.push_back(std::string("boundary_") + face_name(f));
    for (FaceId f : faces) h.push_back(std::string("sat_") + face_name(f));
    for (const char* s : {"identity_residual", "data_integral", "divergence", "entropy_flux"})
      h.push_back(s);
    return h;
  }

  void write_csv(std::ostream& os) const {
    const auto h = header();
    for (std::size_t i = 0; i < h.size(); ++i) os << (i ? "," : "") << h[i];
    os << "\n";
    char buf[64];
    auto num = [&](double v) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      return std::string(buf);
    };
    for (const auto& s : samples) {
      os << num(s.t) << "," << s.step << "," << num(s.energy);
      for (std::size_t i = 0; i < faces.size(); ++i) os << "," << num(s.boundary[i]);
      for (std::size_t i = 0; i < faces.size(); ++i) os << "," << num(s.sat[i]);
      os << "," << num(s.identity_residual) << "," << num(s.data_integral) << ","
         << num(s.divergence) << "," << num(s.entropy_flux) << "\n";
    }
  }
};

inline EnergySample sample_state(const SemiDiscreteSystem& sys, const StateField& U, double t,
                                 long step, double data_integral) {
  EnergySample s;
  s.t = t;
  s.step = step;
  s.energy = energy_norm(sys, U);
  const EnergyRate r = energy_rate(sys, U, t);
  for (std::size_t i = 0; i < r.faces.size() && i < 4; ++i) {
    s.boundary[i] = r.faces[i].boundary;
    s.sat[i] = r.faces[i].sat;
  }
  // The identity holds for weak faces only; strong faces report their plain boundary term.
  s.identity_residual = sys.has_strong_faces() ? std::nan("") : r.relative_residual();
  s.data_integral = data_integral;
  s.divergence = divergence_norm(sys, U);
  s.entropy_flux = r.entropy_flux;
  return s;
}

enum class BoundMode { Homogeneous, Inhomogeneous };

struct BoundVerdict {
  bool pass = true;
  double max_violation = 0.0;  // largest excess over the bound, tolerance subtracted
  double at_time = 0.0;
  double tolerance = 0.0;
};

/// Homogeneous: energy non-increasing between samples up to 1e-10 ||F||^2 per step.
/// Inhomogeneous: E(t) <= ||F||^2 + 2 int sum G^T G ds dt up to 1e-10 ||F||^2 (1 + steps).
inline BoundVerdict bound_check(const EnergyReport& rep, BoundMode mode,
                                double relative_slack = 1e-10) {
  BoundVerdict v;
  const double E0 = rep.initial_energy;
  const double unit = relative_slack * std::max(E0, 1e-300);
  v.max_violation = -std::numeric_limits<double>::infinity();
  if (rep.samples.empty()) {
    v.max_violation = 0.0;
    return v;
  }
  for (std::size_t i = 0; i < rep.samples.size(); ++i) {
    const auto& s = rep.samples[i];
    double excess;
    if (mode == BoundMode::Homogeneous) {
      if (i == 0) {
        excess = s.energy - E0 - unit;
      } else {
        const auto& p = rep.samples[i - 1];
        excess = s.energy - p.energy - unit * static_cast<double>(std::max(1L, s.step - p.step));
      }
    } else {
      excess = s.energy - E0 - s.data_integral - unit * (1.0 + static_cast<double>(s.step));
    }
    if (excess > v.max_violation) {
      v.max_violation = excess;
      v.at_time = s.t;
    }
  }
  v.tolerance = unit;
  v.pass = v.max_violation <= 0.0;
  return v;
}

}  // namespace nlbc
