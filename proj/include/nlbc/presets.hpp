#pragma once

#include <string>
#include <vector>

#include "nlbc/boundary.hpp"

namespace nlbc {

namespace detail {

inline Mat col(std::initializer_list<double> v) {
  Mat m(static_cast<Eigen::Index>(v.size()), 1);
  Eigen::Index i = 0;
  for (double x : v) m(i++, 0) = x;
  return m;
}

inline unsigned bits(std::initializer_list<int> idx) {
  unsigned m = 0;
  for (int i : idx) m |= 1u << i;
  return m;
}

}  // namespace detail

/// Signed R_2 of the CEE Dirichlet inflow condition on (phi_1, phi_2, phi_3).
inline double cee_dirichlet_R2(double gamma, const PVec& Phi_rotated) {
  const PVec& r = Phi_rotated;
  const double mach = r(1) / (std::sqrt(gamma) * r(3));
  const double psi = psi_factor(gamma, mach);
  return 2.0 * r(3) / r(1) * std::sqrt((gamma - 1) / (2 * (2 - gamma) * std::abs(psi)));
}

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{
      "iee-dirichlet-inflow",      "iee-pressure-outflow",
      "swe-dirichlet-inflow",      "swe-characteristic-inflow",
      "swe-characteristic-outflow", "swe-free-outflow",
      "cee-characteristic-inflow", "cee-characteristic-outflow",
      "cee-dirichlet-inflow",      "cee-free-outflow",
      "inse-velocity-inflow",      "inse-stress-pressure-outflow",
  };
  return names;
}

/// Boundary conditions of the worked examples, with zero data.
inline BoundarySpec preset_bc(const std::string& name, FaceId face = FaceId::West) {
  using detail::bits;
  BoundarySpec bc;
  bc.face = face;
  bc.name = name;
  if (name == "iee-dirichlet-inflow") {
    // Velocities; R_1 = -1 cancels the pressure since u_n < 0.
    bc.variant = Variant::IeeCharacteristic;
    bc.regimes[bits({0, 1})] = {detail::col({-1.0, 0.0}), Mat::Identity(2, 2), {}};
  } else if (name == "iee-pressure-outflow") {
    bc.variant = Variant::IeeCharacteristic;
    bc.regimes[bits({2})] = {Mat::Zero(1, 2), Mat::Identity(1, 1), {}};
  } else if (name == "swe-dirichlet-inflow") {
    bc.variant = Variant::SweCharacteristic;
    bc.regimes[bits({1, 2})] = {detail::col({1.0, 0.0}), Mat::Identity(2, 2), {}};
  } else if (name == "swe-characteristic-inflow") {
    bc.variant = Variant::SweCharacteristic;
    bc.regimes[bits({1, 2})] = {Mat::Zero(2, 1), Mat::Identity(2, 2), {}};
  } else if (name == "swe-characteristic-outflow") {
    bc.variant = Variant::SweCharacteristic;
    bc.regimes[bits({0})] = {Mat::Zero(1, 2), Mat::Identity(1, 1), {}};
  } else if (name == "swe-free-outflow") {
    bc.variant = Variant::SwePrimitive;
    bc.regimes[0] = {Mat::Zero(0, 3), Mat::Zero(0, 0), {}};
  } else if (name == "cee-characteristic-inflow") {
    bc.variant = Variant::CeeCharacteristic;
    bc.regimes[bits({0, 1, 2})] = {Mat::Zero(3, 1), Mat::Identity(3, 3), {}};
    bc.regimes[bits({0, 1, 2, 3})] = {Mat::Zero(4, 0), Mat::Identity(4, 4), {}};
  } else if (name == "cee-dirichlet-inflow") {
    // Removes phi_4 from the phi_2 condition; I - R^T R = -1/|Psi| < 0.
    bc.variant = Variant::CeeCharacteristic;
    Regime reg;
    reg.R = Mat::Zero(3, 1);
    reg.S = Mat::Identity(3, 3);
    reg.state_R = [](const EquationSpec& spec, const BoundaryRotation& rot) {
      Mat R = Mat::Zero(3, 1);
      R(1, 0) = cee_dirichlet_R2(spec.params().gamma, rot.rotated);
      return R;
    };
    bc.regimes[bits({0, 1, 2})] = reg;
  } else if (name == "cee-characteristic-outflow") {
    bc.variant = Variant::CeeCharacteristic;
    bc.regimes[bits({3})] = {Mat::Zero(1, 3), Mat::Identity(1, 1), {}};
    bc.regimes[0] = {Mat::Zero(0, 4), Mat::Zero(0, 0), {}};
  } else if (name == "cee-free-outflow") {
    bc.variant = Variant::CeeContracted;
    bc.regimes[0] = {Mat::Zero(0, 4), Mat::Zero(0, 0), {}};
  } else if (name == "inse-velocity-inflow") {
    bc.variant = Variant::InseExtended;
    bc.regimes[bits({0, 1})] = {Mat::Identity(2, 2), Mat::Identity(2, 2), {}};
  } else if (name == "inse-stress-pressure-outflow") {
    bc.variant = Variant::InseExtended;
    bc.regimes[bits({2, 3})] = {Mat::Zero(2, 2), Mat::Identity(2, 2), {}};
  } else {
    throw InvalidArgument("unknown boundary preset '" + name + "'");
  }
  return bc;
}

}  // namespace nlbc
