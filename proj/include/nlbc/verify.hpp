#pragma once

// Seeded property suites behind `nlbc verify`. Each check reports the observed value
// next to its threshold so the output doubles as a residual table.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "nlbc/convergence.hpp"
#include "nlbc/quadratic_field.hpp"
#include "nlbc/scenario.hpp"

namespace nlbc {

struct CheckResult {
  std::string suite;
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::string detail;
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  int draws = 1000;
};

/// Random admissible states, normals and boundary-condition matrices.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng_); }
  std::mt19937_64& engine() { return rng_; }

  std::array<double, 2> normal() {
    const double a = uniform(0.0, 2.0 * M_PI);
    return {std::cos(a), std::sin(a)};
  }

  Mat matrix(int rows, int cols) {
    Mat M(rows, cols);
    for (Eigen::Index i = 0; i < M.size(); ++i) M.data()[i] = uniform(-1.0, 1.0);
    return M;
  }

  /// A state of `sys` whose normal velocity against `n` has the sign of `direction`
  /// (0 for either) and magnitude at least 0.05, away from the CEE Psi switch.
  PVec state(System sys, const std::array<double, 2>& n, int direction = 0) {
    for (;;) {
      const double u = uniform(-1.5, 1.5), v = uniform(-1.5, 1.5);
      const double un = u * n[0] + v * n[1];
      if (std::abs(un) < 0.05 || (direction != 0 && un * direction < 0.0)) continue;
      switch (sys) {
        case System::IEE:
        case System::INSE: return from_primitive(sys, 1.0, u, v, uniform(-1.0, 1.0));
        case System::SWE: return from_primitive(sys, uniform(0.5, 2.0), u, v, 0.0);
        case System::CEE: {
          const double rho = uniform(0.5, 2.0), p = uniform(0.5, 2.0);
          const double mach2 = un * un * rho / (1.4 * p);
          if (std::abs(mach2 - psi_root_mach_squared(1.4)) < 0.02) continue;
          return from_primitive(sys, rho, u, v, p);
        }
      }
    }
  }

 private:
  std::mt19937_64 rng_;
};

inline double normal_velocity(System sys, const PVec& U, const std::array<double, 2>& n) {
  switch (sys) {
    case System::IEE:
    case System::INSE: return U(0) * n[0] + U(1) * n[1];
    case System::SWE: return (U(1) * n[0] + U(2) * n[1]) / std::sqrt(U(0));
    case System::CEE: return (U(1) * n[0] + U(2) * n[1]) / U(0);
  }
  return 0.0;
}

namespace detail {

inline CheckResult check(std::string suite, std::string name, double value, double threshold,
                         bool pass, std::string detail = {}) {
  return {std::move(suite), std::move(name), value, threshold, pass, std::move(detail)};
}

inline CheckResult below(std::string suite, std::string name, double value, double threshold) {
  return check(std::move(suite), std::move(name), value, threshold, value < threshold);
}

/// Scale R so that ||R||_2 = rho.
inline Mat with_norm(const Mat& R, double rho) {
  if (R.size() == 0) return R;
  const double s = Eigen::JacobiSVD<Mat>(R).singularValues()(0);
  return s > 0.0 ? Mat(R * (rho / s)) : R;
}

/// Scale S into the admissible set of check_S for a strictly contractive R; `fraction`
/// in (0, 1] picks how close to the boundary of that set it lands.
inline Mat admissible_S(const Mat& R, const Mat& S0, double fraction) {
  const Eigen::Index m = S0.rows();
  Mat K = Mat::Identity(m, m);
  if (R.cols() > 0) {
    const Mat I = Mat::Identity(R.cols(), R.cols());
    K += R * (I - R.transpose() * R).inverse() * R.transpose();
  }
  const double top = Eigen::SelfAdjointEigenSolver<Mat>(S0.transpose() * K * S0).eigenvalues().maxCoeff();
  return S0 * (std::sqrt(fraction / top));
}

inline double max_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

}  // namespace detail

/// Q + Q^T - E^T P N E for orders 2, 4, 6 on grids of 11 to 101 nodes, and the
/// commutation of the volume quadrature with node-wise block coefficients.
inline std::vector<CheckResult> verify_sbp(const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  for (int order : {2, 4, 6}) {
    double worst = 0.0;
    for (int N : {11, 16, 21, 37, 51, 101}) {
      if (N < minimum_nodes(order)) continue;
      const OperatorSet ops(Grid::rectangle(N, N), order);
      worst = std::max(worst, detail::max_of(sbp_identity_residual(ops)));
    }
    out.push_back(detail::below("sbp", "identity order " + std::to_string(order), worst, 1e-14));
  }
  // (P_Omega x I) blkdiag(A_k) == blkdiag(A_k) (P_Omega x I) entrywise.
  Sampler s(opt.seed);
  const OperatorSet ops(Grid::rectangle(9, 8), 4);
  const Vec& w = ops.volume_weights();
  const int m = 4;
  double diff = 0.0;
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    const Mat A = s.matrix(m, m);
    const Mat left = w(k) * A;
    Mat right = A;
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j) right(i, j) = A(i, j) * w(k);
    diff = std::max(diff, (left - right).cwiseAbs().maxCoeff());
  }
  out.push_back(detail::check("sbp", "quadrature commutes with block coefficients", diff, 0.0,
                              diff == 0.0));
  return out;
}

/// Boundary forms: U^T A~ U against W^T Lambda W per variant, the flux form against the
/// rotated form, M U = W, the CEE dual form and the SWE alpha/beta independence.
inline std::vector<CheckResult> verify_rotations(const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  Sampler s(opt.seed);
  const std::vector<Variant> variants{Variant::IeeCharacteristic, Variant::SwePrimitive,
                                      Variant::SweCharacteristic, Variant::CeeCharacteristic,
                                      Variant::CeeContracted, Variant::InseExtended};
  for (Variant v : variants) {
    const System sys = variant_system(v);
    EquationParams p;
    p.epsilon = sys == System::INSE ? 0.01 : 0.0;
    const EquationSpec spec(sys, p);
    double diag = 0.0, flux = 0.0, mu = 0.0;
    for (int i = 0; i < opt.draws; ++i) {
      BoundaryPoint pt;
      pt.normal = s.normal();
      pt.U = s.state(sys, pt.normal);
      if (v == Variant::InseExtended) pt.shear = {s.uniform(-1, 1), s.uniform(-1, 1)};
      for (Realization r : {Realization::Catalog, Realization::Gradient}) {
        RotationOptions ro;
        ro.realization = r;
        const BoundaryRotation b = boundary_rotation(spec, pt, v, ro);
        const double q = b.quadratic_form();
        diag = std::max(diag, std::abs(q - b.diagonal_form()) / (1.0 + std::abs(q)));
        // The Cartesian boundary integrand U^T (n_i A_i) U, doubled by the skew split.
        const FluxMatrices f = flux_matrices(spec, pt.U);
        double qf = pt.U.dot((pt.normal[0] * f.A[0] + pt.normal[1] * f.A[1]) * pt.U);
        if (v == Variant::InseExtended) qf -= b.scale * 2.0 * (b.rotated(0) * pt.shear[0] + b.rotated(1) * pt.shear[1]);
        flux = std::max(flux, std::abs(qf - b.scale * q) / (1.0 + std::abs(qf)));
        Vec ext = pt.U;
        if (v == Variant::InseExtended) {
          ext.conservativeResize(5);
          ext(3) = pt.shear[0];
          ext(4) = pt.shear[1];
        }
        mu = std::max(mu, (Mat(b.M) * ext - Vec(b.W)).norm() / (1.0 + b.W.norm()));
      }
    }
    const std::string name = variant_name(v);
    out.push_back(detail::below("rotations", name + ": U^T A~ U = W^T Lambda W", diag, 1e-12));
    out.push_back(detail::below("rotations", name + ": flux form = rotated form", flux, 1e-12));
    out.push_back(detail::below("rotations", name + ": M U = W", mu, 1e-12));
  }

  {
    const EquationSpec spec(System::CEE);
    double dual = 0.0;
    for (int i = 0; i < opt.draws; ++i) {
      BoundaryPoint pt;
      pt.normal = s.normal();
      pt.U = s.state(System::CEE, pt.normal);
      const BoundaryRotation a = boundary_rotation(spec, pt, Variant::CeeCharacteristic);
      const BoundaryRotation b = boundary_rotation(spec, pt, Variant::CeeContracted);
      const double qa = a.diagonal_form(), qb = b.diagonal_form();
      dual = std::max(dual, std::abs(qa - qb) / (1.0 + std::abs(qa)));
    }
    out.push_back(detail::below("rotations", "cee dual forms agree", dual, 1e-12));
  }
  {
    double spread = 0.0;
    for (int i = 0; i < opt.draws; ++i) {
      BoundaryPoint pt;
      pt.normal = s.normal();
      pt.U = s.state(System::SWE, pt.normal);
      EquationParams p0, p1;
      p1.alpha = s.uniform(-2.0, 2.0);
      p1.beta = s.uniform(-2.0, 2.0);
      const FluxMatrices f0 = flux_matrices(EquationSpec(System::SWE, p0), pt.U);
      const FluxMatrices f1 = flux_matrices(EquationSpec(System::SWE, p1), pt.U);
      const double q0 = pt.U.dot((pt.normal[0] * f0.A[0] + pt.normal[1] * f0.A[1]) * pt.U);
      const double q1 = pt.U.dot((pt.normal[0] * f1.A[0] + pt.normal[1] * f1.A[1]) * pt.U);
      for (Variant v : {Variant::SwePrimitive, Variant::SweCharacteristic}) {
        const double q = boundary_rotation(EquationSpec(System::SWE, p1), pt, v).diagonal_form();
        spread = std::max(spread, std::abs(q - q0) / (1.0 + std::abs(q0)));
      }
      spread = std::max(spread, std::abs(q1 - q0) / (1.0 + std::abs(q0)));
    }
    out.push_back(detail::below("rotations", "swe boundary form independent of alpha, beta", spread, 1e-12));
  }
  return out;
}

/// The sign switch of the CEE boundary eigenvalue.
inline std::vector<CheckResult> verify_psi(const VerifyOptions&) {
  std::vector<CheckResult> out;
  const QSqrt2 exact = psi_factor<QSqrt2>(QSqrt2::sqrt2(), QSqrt2(1));
  out.push_back(detail::check("psi", "Psi(sqrt 2, 1) == 0 in Q(sqrt 2)", std::abs(exact.to_double()), 0.0,
                              exact == QSqrt2(0)));
  const double root = psi_root_mach_squared(1.4);
  out.push_back(detail::below("psi", "root of Psi(1.4, .) at 0.8/0.84", std::abs(root - 0.8 / 0.84), 1e-14));
  const double at_root = psi_factor(1.4, std::sqrt(root));
  out.push_back(detail::below("psi", "Psi(1.4, sqrt(root))", std::abs(at_root), 1e-14));
  const bool switches = psi_factor(1.4, 0.9 * std::sqrt(root)) < 0.0 && psi_factor(1.4, 1.1 * std::sqrt(root)) > 0.0;
  out.push_back(detail::check("psi", "Psi changes sign at the root", switches ? 0.0 : 1.0, 0.0, switches));
  return out;
}

/// The four cases of the boundary-term lemma on random admissible draws, and the
/// rejection of the CEE Dirichlet inflow condition.
inline std::vector<CheckResult> verify_lemma4(const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  Sampler s(opt.seed);
  std::array<double, 4> worst{0.0, 0.0, 0.0, 0.0};  // most negative normalized slack
  int admissible = 0;
  for (int i = 0; i < opt.draws; ++i) {
    const int m = s.integer(1, 3), p = s.integer(0, 3);
    Vec lm(m), lp(p);
    for (int k = 0; k < m; ++k) lm(k) = -std::exp(s.uniform(-3.0, 3.0));
    for (int k = 0; k < p; ++k) lp(k) = std::exp(s.uniform(-3.0, 3.0));
    Vec Wm(m), Wp(p), G(m);
    for (int k = 0; k < m; ++k) Wm(k) = s.uniform(-3.0, 3.0), G(k) = s.uniform(-3.0, 3.0);
    for (int k = 0; k < p; ++k) Wp(k) = s.uniform(-3.0, 3.0);
    // Homogeneous cases allow ||R|| = 1, the inhomogeneous ones need it strictly below.
    const Mat R_hom = detail::with_norm(s.matrix(m, p), i % 4 == 0 ? 1.0 : s.uniform(0.0, 1.0));
    const Mat R_inh = detail::with_norm(s.matrix(m, p), s.uniform(0.0, 0.99));
    const Mat S = detail::admissible_S(R_inh, s.matrix(m, m) + 2.0 * Mat::Identity(m, m),
                                       i % 4 == 1 ? 1.0 : s.uniform(0.05, 1.0));
    const Mat S_hom = Mat::Identity(m, m);
    if (check_R(R_hom).verdict == Verdict::Violated || check_S(R_inh, S).verdict == Verdict::Violated)
      continue;
    ++admissible;
    const Vec zero = Vec::Zero(m);
    const double size = 1.0 + Wm.squaredNorm() * lm.cwiseAbs().maxCoeff() +
                        (p ? Wp.squaredNorm() * lp.maxCoeff() : 0.0) + G.squaredNorm();
    const std::array<double, 4> slack{
        strong_boundary_term(R_hom, S_hom, lm, lp, Wp, zero),
        strong_boundary_term(R_inh, S, lm, lp, Wp, G) + G.squaredNorm(),
        weak_boundary_term(R_hom, S_hom, lm, lp, Wm, Wp, zero),
        weak_boundary_term(R_inh, S, lm, lp, Wm, Wp, G) + G.squaredNorm()};
    for (int c = 0; c < 4; ++c) worst[static_cast<std::size_t>(c)] = std::min(worst[static_cast<std::size_t>(c)], slack[static_cast<std::size_t>(c)] / size);
  }
  const std::array<const char*, 4> names{"strong homogeneous: W^T Lambda W >= 0",
                                         "strong inhomogeneous: W^T Lambda W >= -G^T G",
                                         "weak homogeneous: boundary + SAT >= 0",
                                         "weak inhomogeneous: boundary + SAT >= -G^T G"};
  for (int c = 0; c < 4; ++c) {
    const double w = worst[static_cast<std::size_t>(c)];
    out.push_back(detail::check("lemma4", names[static_cast<std::size_t>(c)], w, -1e-12,
                                w >= -1e-12 && admissible >= opt.draws,
                                std::to_string(admissible) + " admissible draws"));
  }

  // CEE Dirichlet inflow at gamma = 1.4, M_n = 0.5: I - R^T R = -1/|Psi|.
  const EquationSpec spec(System::CEE);
  BoundaryPoint pt;
  pt.normal = {-1.0, 0.0};
  const double c = 1.0, un = 0.5 * c;
  pt.U = from_primitive(System::CEE, 1.0, un, 0.2, c * c / 1.4);
  const BoundarySpec bc = preset_bc("cee-dirichlet-inflow", FaceId::West);
  const BoundaryRotation rot = boundary_rotation(spec, pt, bc.variant);
  const CharacteristicSplit split = characteristic_split(rot);
  const Mat R = bc.regime(split.mask, 4).R_at(spec, rot);
  const AdmissibilityReport rep = check_R(R);
  const double expected = -1.0 / std::abs(psi_factor(1.4, 0.5));
  out.push_back(detail::check("lemma4", "cee-dirichlet-inflow rejected by check_R", rep.min_eigenvalue,
                              expected, rep.verdict == Verdict::Violated &&
                                            std::abs(rep.min_eigenvalue - expected) < 1e-10,
                              "expected " + std::to_string(expected)));
  return out;
}

namespace detail {

struct RateCase {
  System system;
  EquationParams params;
  std::string inflow, outflow;
  PVec base;
};

inline std::vector<RateCase> rate_cases() {
  EquationParams iee, inse, plain;
  iee.kappa = 1.0;
  inse.kappa = 1.0;
  inse.epsilon = 0.01;
  return {
      {System::IEE, iee, "iee-dirichlet-inflow", "iee-pressure-outflow",
       from_primitive(System::IEE, 1.0, 0.6, 0.4, 0.1)},
      {System::SWE, plain, "swe-characteristic-inflow", "swe-characteristic-outflow",
       from_primitive(System::SWE, 1.0, 0.6, 0.4, 0.0)},
      {System::CEE, plain, "cee-characteristic-inflow", "cee-characteristic-outflow",
       from_primitive(System::CEE, 1.0, 0.6, 0.4, 1.0)},
      {System::INSE, inse, "inse-velocity-inflow", "inse-stress-pressure-outflow",
       from_primitive(System::INSE, 1.0, 0.6, 0.4, 0.1)},
  };
}

/// Inflow presets on the west and south faces, outflow presets on the east and north.
inline SemiDiscreteSystem rate_system(const RateCase& c, bool inhomogeneous, int N = 11) {
  const EquationSpec spec(c.system, c.params);
  const OperatorSet ops(Grid::rectangle(N, N), 2);
  std::vector<BoundarySpec> bcs;
  for (FaceId f : {FaceId::West, FaceId::South}) bcs.push_back(preset_bc(c.inflow, f));
  for (FaceId f : {FaceId::East, FaceId::North}) bcs.push_back(preset_bc(c.outflow, f));
  if (inhomogeneous) {
    const PVec ref = c.base;
    for (auto& b : bcs) {
      b.data.kind = BoundaryData::Kind::Reference;
      b.data.state = [ref](double, double, double) { return ref; };
    }
  }
  return SemiDiscreteSystem(spec, ops, bcs);
}

inline StateField perturbed(const SemiDiscreteSystem& sys, const PVec& base, Sampler& s, double amp) {
  StateField U(sys.ops.grid(), sys.spec.components());
  for (std::size_t k = 0; k < U.nodes(); ++k) {
    PVec u = base;
    for (Eigen::Index i = 0; i < u.size(); ++i) u(i) += amp * s.uniform(-1.0, 1.0);
    U.set(k, u);
  }
  return U;
}

}  // namespace detail

/// The semi-discrete energy rate identity at 20 sampled times per system, with G = 0 and G != 0.
inline std::vector<CheckResult> verify_energy_rate(const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  Sampler s(opt.seed);
  for (const auto& c : detail::rate_cases()) {
    for (bool inh : {false, true}) {
      const SemiDiscreteSystem sys = detail::rate_system(c, inh);
      const StateField U0 = detail::perturbed(sys, c.base, s, 0.02);
      TimeIntegrator integ;
      integ.dt = 0.25 * stable_dt(sys, U0, 0.5);
      const RunResult r = run(sys, U0, 19 * *integ.dt, integ, 1);
      double worst = 0.0;
      for (const auto& smp : r.report.samples) worst = std::max(worst, smp.identity_residual);
      const bool ok = !r.report.abort_message && r.report.samples.size() == 20 && worst < 1e-11;
      out.push_back(detail::check("energy-rate",
                                  std::string(system_name(c.system)) + (inh ? " G!=0" : " G=0") +
                                      ", 20 samples",
                                  worst, 1e-11, ok,
                                  r.report.abort_message ? *r.report.abort_message : std::string{}));
      if (!inh) {
        const double eb = entropy_balance(sys, U0, 0.0);
        out.push_back(detail::below("energy-rate", std::string(system_name(c.system)) + " entropy balance",
                                    eb, 1e-10));
      }
    }
  }
  return out;
}

/// Scenario runs: energy non-increase with G = 0, the data bound with G != 0, and a
/// detected failure for the CEE Dirichlet inflow condition.
inline std::vector<CheckResult> verify_bounds(const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  auto radial = [&](const char* system, const char* preset, const char* params) {
    return std::string(R"({"name": "bounds", "system": ")") + system +
           R"(", "grid": {"nodes": 15}, "parameters": )" + params +
           R"(, "initial": {"density": 1, "phi": 1, "pressure": 1, "strain": 0.4, "noise": 0.01,
                "bump": {"amplitude": 0.05, "width": 0.15}},
              "boundaries": {"west": {"preset": ")" + preset + R"("}, "east": {"preset": ")" + preset +
           R"("}, "south": {"preset": ")" + preset + R"("}, "north": {"preset": ")" + preset +
           R"("}}, "time": {"t_end": 0.1}})";
  };
  auto converging = [](const char* preset, double t_end) {
    return std::string(R"({"name": "bounds", "system": "cee", "grid": {"nodes": 15},
              "initial": {"density": 1, "pressure": 1, "strain": -0.4},
              "boundaries": {"west": {"preset": ")") + preset + R"(", "data": {"kind": "reference"}},
                "east": {"preset": ")" + preset + R"(", "data": {"kind": "reference"}},
                "south": {"preset": ")" + preset + R"(", "data": {"kind": "reference"}},
                "north": {"preset": ")" + preset + R"(", "data": {"kind": "reference"}}},
              "time": {"t_end": )" + std::to_string(t_end) + "}}";
  };
  struct Case {
    std::string name, config;
    int expected_exit;
  };
  const std::vector<Case> cases{
      {"iee homogeneous outflow", radial("iee", "iee-pressure-outflow", R"({"kappa": 1})"), exit_code::pass},
      {"swe homogeneous outflow", radial("swe", "swe-free-outflow", "{}"), exit_code::pass},
      {"cee homogeneous outflow", radial("cee", "cee-free-outflow", "{}"), exit_code::pass},
      {"inse homogeneous outflow",
       radial("inse", "inse-stress-pressure-outflow", R"({"kappa": 1, "epsilon": 0.01})"), exit_code::pass},
      {"cee inhomogeneous characteristic inflow", converging("cee-characteristic-inflow", 0.1), exit_code::pass},
      {"cee dirichlet inflow detected", converging("cee-dirichlet-inflow", 0.04), exit_code::bound_violation},
  };
  for (const auto& c : cases) {
    RunConfig cfg = parse_config(c.config);
    cfg.seed = opt.seed;
    const ScenarioOutcome o = run_scenario(cfg, false);
    out.push_back(detail::check("bounds", c.name + " (exit " + std::to_string(c.expected_exit) + ")",
                                o.verdict.max_violation, 0.0, o.exit_code == c.expected_exit,
                                "exit " + std::to_string(o.exit_code) +
                                    (o.report.abort_message ? ": " + *o.report.abort_message : "")));
  }
  return out;
}

/// Strong imposition satisfies the condition exactly for every preset, and the penalty
/// vanishes on the imposed state.
inline std::vector<CheckResult> verify_roundtrip(const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  Sampler s(opt.seed);
  const int draws = std::max(1, opt.draws / 10);
  for (const auto& name : preset_names()) {
    const BoundarySpec base = preset_bc(name, FaceId::West);
    const System sys = variant_system(base.variant);
    EquationParams p;
    if (sys == System::INSE) p.epsilon = 0.01;
    const EquationSpec spec(sys, p);
    const int direction = name.find("inflow") != std::string::npos ? -1 : 1;
    double cond = 0.0, sat = 0.0;
    int tested = 0;
    for (int i = 0; i < draws * 20 && tested < draws; ++i) {
      BoundarySpec bc = base;
      BoundaryPoint pt;
      pt.normal = s.normal();
      pt.U = s.state(sys, pt.normal, direction);
      if (sys == System::INSE) pt.shear = {s.uniform(-1, 1), s.uniform(-1, 1)};
      const PVec ref = s.state(sys, pt.normal, direction);
      bc.data.kind = BoundaryData::Kind::Reference;
      bc.data.state = [ref](double, double, double) { return ref; };
      try {
        const PointCondition before = evaluate_condition(spec, bc, pt, 0, 0, 0);
        BoundaryPoint rp;
        rp.U = ref;
        rp.normal = pt.normal;
        const BoundaryRotation ref_rot = boundary_rotation(spec, rp, bc.variant);
        if (characteristic_split(ref_rot).mask != before.split.mask) continue;
        const BoundaryPoint q = strong_impose(spec, bc, pt, 0, 0, 0);
        const PointCondition after = evaluate_condition(spec, bc, q, 0, 0, 0);
        // Imposed states must stay in the sampled region |u_n| >= 0.05.
        if (after.split.mask != before.split.mask || std::abs(normal_velocity(sys, q.U, q.normal)) < 0.05)
          continue;
        const double scale = 1.0 + after.G.norm();
        cond = std::max(cond, after.residual.norm() / scale);
        sat = std::max(sat, after.lifting().norm() / scale);
        ++tested;
      } catch (const RegimeChange&) {
      } catch (const DegenerateRotation&) {
      } catch (const InadmissibleState&) {
      }
    }
    const bool enough = tested == draws;
    out.push_back(detail::check("roundtrip", name + ": condition residual", cond, 1e-12,
                                enough && cond < 1e-12, std::to_string(tested) + " states"));
    out.push_back(detail::check("roundtrip", name + ": SAT on imposed state", sat, 1e-12,
                                enough && sat < 1e-12));
  }
  return out;
}

/// Frozen-coefficient IEE: orders {2, 4} on {21, 41, 81} nodes reach rates {2, 3} within 0.25.
inline std::vector<CheckResult> verify_convergence(const VerifyOptions&) {
  std::vector<CheckResult> out;
  const ConvergenceTable t = convergence_study(iee_frozen_scenario(), {2, 4}, {21, 41, 81});
  for (const auto& [order, target] : {std::pair{2, 2.0}, std::pair{4, 3.0}}) {
    const double r = t.final_rate(order);
    out.push_back(detail::check("convergence", "iee frozen order " + std::to_string(order) + " rate",
                                r, target, std::abs(r - target) <= 0.25 && t.monotone,
                                "target " + std::to_string(target) + " +- 0.25"));
  }
  return out;
}

using SuiteFunction = std::function<std::vector<CheckResult>(const VerifyOptions&)>;

inline const std::vector<std::pair<std::string, SuiteFunction>>& verify_suites() {
  static const std::vector<std::pair<std::string, SuiteFunction>> suites{
      {"sbp", verify_sbp},
      {"rotations", verify_rotations},
      {"psi", verify_psi},
      {"lemma4", verify_lemma4},
      {"energy-rate", verify_energy_rate},
      {"bounds", verify_bounds},
      {"roundtrip", verify_roundtrip},
      {"convergence", verify_convergence},
  };
  return suites;
}

/// Runs one suite by name, or every suite for "all". Unknown names throw InvalidArgument.
inline std::vector<CheckResult> run_verify(const std::string& selector, const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  bool found = false;
  for (const auto& [name, fn] : verify_suites()) {
    if (selector != "all" && selector != name) continue;
    found = true;
    auto r = fn(opt);
    out.insert(out.end(), r.begin(), r.end());
  }
  if (!found) throw InvalidArgument("unknown verify selector '" + selector + "'");
  return out;
}

}  // namespace nlbc
