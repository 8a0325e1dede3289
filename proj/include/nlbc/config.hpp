#pragma once

// Run configuration: a JSON document parsed into RunConfig. Every key is checked; unknown keys
// and invalid values raise ConfigError naming the dotted path of the field.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "nlbc/boundary.hpp"
#include "nlbc/equations.hpp"
#include "nlbc/presets.hpp"
#include "nlbc/rotation.hpp"
#include "nlbc/sbp.hpp"

namespace nlbc {

struct RegimeConfig {
  std::vector<int> minus;  // indices of the negative entries of Lambda
  Mat R, S;
};

struct DataConfig {
  BoundaryData::Kind kind = BoundaryData::Kind::Zero;
  Vec value;
};

struct FaceConfig {
  std::string preset;  // empty for an explicit condition
  std::optional<Variant> variant;
  std::vector<RegimeConfig> regimes;
  Imposition mode = Imposition::Weak;
  DataConfig data;
};

/// Initial state in primitive variables: a base flow plus a linear strain about `center`,
/// an optional Gaussian bump and optional seeded noise.
struct InitialConfig {
  double density = 1.0;   // CEE
  double phi = 1.0;       // SWE geopotential
  double pressure = 0.0;  // IEE/INSE pressure over density, CEE pressure
  std::array<double, 2> velocity{0.0, 0.0};
  double strain = 0.0;  // velocity += strain * (x - xc, y - yc)
  std::array<double, 2> center{0.5, 0.5};
  double bump_amplitude = 0.0;
  double bump_width = 0.1;
  std::array<double, 2> bump_center{0.5, 0.5};
  double noise = 0.0;
};

enum class CheckMode { Auto, Homogeneous, Inhomogeneous };

struct RunConfig {
  std::string name = "run";
  System system = System::IEE;
  std::vector<Axis> axes{Axis{21, 0.0, 1.0}, Axis{21, 0.0, 1.0}};
  int order = 2;
  EquationParams params;
  InitialConfig initial;
  std::map<FaceId, FaceConfig> faces;
  double t_end = 0.1;
  double cfl = 0.5;
  std::optional<double> dt;
  long cadence = 1;
  Realization realization = Realization::Gradient;
  CheckMode check = CheckMode::Auto;
  std::string output_dir = ".";
  std::uint64_t seed = 1;

  Grid grid() const {
    if (axes.size() == 1) return Grid::line(axes[0].nodes, axes[0].left, axes[0].right);
    return Grid::rectangle(axes[0].nodes, axes[1].nodes, axes[0].left, axes[0].right,
                           axes[1].left, axes[1].right);
  }
};

namespace detail {

using json = nlohmann::json;

inline std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

inline void allow_keys(const json& j, const std::string& path, std::set<std::string> keys) {
  if (!j.is_object()) throw ConfigError(path.empty() ? "(root)" : path, "expected an object");
  for (const auto& [k, v] : j.items())
    if (!keys.count(k)) throw ConfigError(join(path, k), "unknown key");
}

inline double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  return j.get<double>();
}

inline long get_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.get<long>();
}

inline std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  return j.get<std::string>();
}

inline std::array<double, 2> get_pair(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(path, "expected [a, b]");
  return {get_number(j[0], path + "[0]"), get_number(j[1], path + "[1]")};
}

inline Mat get_matrix(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected a list of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) return Mat(0, 0);
  if (!j[0].is_array()) throw ConfigError(path + "[0]", "expected a row");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Mat M(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const std::string rp = path + "[" + std::to_string(r) + "]";
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw ConfigError(rp, "rows must have equal length");
    for (Eigen::Index c = 0; c < cols; ++c)
      M(r, c) = get_number(row[static_cast<std::size_t>(c)], rp + "[" + std::to_string(c) + "]");
  }
  return M;
}

inline std::optional<FaceId> parse_face(const std::string& s) {
  for (FaceId f : {FaceId::West, FaceId::East, FaceId::South, FaceId::North})
    if (s == face_name(f)) return f;
  return std::nullopt;
}

inline std::optional<System> parse_system(const std::string& s) {
  for (System sys : {System::IEE, System::SWE, System::CEE, System::INSE})
    if (s == system_name(sys)) return sys;
  return std::nullopt;
}

inline FaceConfig parse_face_config(const json& j, const std::string& path) {
  allow_keys(j, path, {"preset", "variant", "regimes", "mode", "data"});
  FaceConfig f;
  if (j.contains("preset")) {
    f.preset = get_string(j["preset"], join(path, "preset"));
    const auto& names = preset_names();
    if (std::find(names.begin(), names.end(), f.preset) == names.end())
      throw ConfigError(join(path, "preset"), "unknown preset '" + f.preset + "'");
    if (j.contains("variant") || j.contains("regimes"))
      throw ConfigError(path, "give either a preset or an explicit variant with regimes");
  } else {
    if (!j.contains("variant")) throw ConfigError(path, "a preset or a variant is required");
    const std::string v = get_string(j["variant"], join(path, "variant"));
    f.variant = parse_variant(v);
    if (!f.variant) throw ConfigError(join(path, "variant"), "unknown variant '" + v + "'");
    if (!j.contains("regimes") || !j["regimes"].is_array())
      throw ConfigError(join(path, "regimes"), "expected a list of regimes");
    for (std::size_t i = 0; i < j["regimes"].size(); ++i) {
      const std::string rp = join(path, "regimes") + "[" + std::to_string(i) + "]";
      const json& r = j["regimes"][i];
      allow_keys(r, rp, {"minus", "R", "S"});
      RegimeConfig rc;
      if (!r.contains("minus") || !r["minus"].is_array())
        throw ConfigError(join(rp, "minus"), "expected a list of indices");
      for (std::size_t k = 0; k < r["minus"].size(); ++k)
        rc.minus.push_back(static_cast<int>(
            get_integer(r["minus"][k], join(rp, "minus") + "[" + std::to_string(k) + "]")));
      const auto m = static_cast<Eigen::Index>(rc.minus.size());
      const int width = variant_width(*f.variant, EquationSpec(variant_system(*f.variant)).components());
      for (int idx : rc.minus)
        if (idx < 0 || idx >= width) throw ConfigError(join(rp, "minus"), "index out of range");
      rc.R = r.contains("R") ? get_matrix(r["R"], join(rp, "R")) : Mat::Zero(m, width - m);
      rc.S = r.contains("S") ? get_matrix(r["S"], join(rp, "S")) : Mat::Identity(m, m);
      if (m > 0 && (rc.R.rows() != m || rc.R.cols() != width - m))
        throw ConfigError(join(rp, "R"), "expected " + std::to_string(m) + " x " +
                                             std::to_string(width - m));
      if (rc.S.rows() != m || rc.S.cols() != m)
        throw ConfigError(join(rp, "S"), "expected " + std::to_string(m) + " x " + std::to_string(m));
      if (m > 0 && std::abs(rc.S.determinant()) < 1e-14)
        throw ConfigError(join(rp, "S"), "S must be invertible");
      if (m == 0) rc.R = Mat::Zero(0, width);
      f.regimes.push_back(std::move(rc));
    }
  }
  if (j.contains("mode")) {
    const std::string m = get_string(j["mode"], join(path, "mode"));
    if (m == "weak") f.mode = Imposition::Weak;
    else if (m == "strong") f.mode = Imposition::Strong;
    else throw ConfigError(join(path, "mode"), "expected 'weak' or 'strong'");
  }
  if (j.contains("data")) {
    const std::string dp = join(path, "data");
    const json& d = j["data"];
    allow_keys(d, dp, {"kind", "value"});
    const std::string kind = d.contains("kind") ? get_string(d["kind"], join(dp, "kind")) : "zero";
    if (kind == "zero") {
      f.data.kind = BoundaryData::Kind::Zero;
    } else if (kind == "reference") {
      f.data.kind = BoundaryData::Kind::Reference;
    } else if (kind == "constant") {
      f.data.kind = BoundaryData::Kind::Constant;
      if (!d.contains("value") || !d["value"].is_array())
        throw ConfigError(join(dp, "value"), "constant data needs a value list");
      f.data.value = Vec(static_cast<Eigen::Index>(d["value"].size()));
      for (std::size_t i = 0; i < d["value"].size(); ++i)
        f.data.value(static_cast<Eigen::Index>(i)) =
            get_number(d["value"][i], join(dp, "value") + "[" + std::to_string(i) + "]");
    } else {
      throw ConfigError(join(dp, "kind"), "expected 'zero', 'constant' or 'reference'");
    }
    if (kind != "constant" && d.contains("value"))
      throw ConfigError(join(dp, "value"), "only constant data takes a value");
  }
  return f;
}

}  // namespace detail

/// Parses and validates a configuration document.
inline RunConfig parse_config(const std::string& text) {
  using detail::get_integer;
  using detail::get_number;
  using detail::get_string;
  using detail::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("(syntax)", e.what());
  }
  detail::allow_keys(j, "", {"name", "system", "grid", "order", "parameters", "initial",
                             "boundaries", "time", "realization", "check", "output", "seed"});
  RunConfig c;
  if (j.contains("name")) c.name = get_string(j["name"], "name");
  if (!j.contains("system")) throw ConfigError("system", "required");
  {
    const std::string s = get_string(j["system"], "system");
    const auto sys = detail::parse_system(s);
    if (!sys) throw ConfigError("system", "unknown system '" + s + "' (iee, swe, cee or inse)");
    c.system = *sys;
  }

  if (j.contains("grid")) {
    const json& g = j["grid"];
    detail::allow_keys(g, "grid", {"nodes", "extent"});
    std::vector<int> nodes;
    if (g.contains("nodes")) {
      if (g["nodes"].is_array()) {
        for (std::size_t i = 0; i < g["nodes"].size(); ++i)
          nodes.push_back(static_cast<int>(get_integer(g["nodes"][i], "grid.nodes[" + std::to_string(i) + "]")));
      } else {
        const int n = static_cast<int>(get_integer(g["nodes"], "grid.nodes"));
        nodes = {n, n};
      }
    } else {
      nodes = {21, 21};
    }
    if (nodes.empty() || nodes.size() > 2) throw ConfigError("grid.nodes", "one or two directions");
    c.axes.clear();
    for (std::size_t d = 0; d < nodes.size(); ++d) {
      Axis a{nodes[d], 0.0, 1.0};
      if (g.contains("extent")) {
        const json& e = g["extent"];
        if (!e.is_array() || e.size() != nodes.size())
          throw ConfigError("grid.extent", "expected one [left, right] pair per direction");
        const auto p = detail::get_pair(e[d], "grid.extent[" + std::to_string(d) + "]");
        a.left = p[0];
        a.right = p[1];
        if (!(a.right > a.left))
          throw ConfigError("grid.extent[" + std::to_string(d) + "]", "right must exceed left");
      }
      if (a.nodes < 2) throw ConfigError("grid.nodes", "at least 2 nodes per direction");
      c.axes.push_back(a);
    }
  }

  if (j.contains("order")) {
    c.order = static_cast<int>(get_integer(j["order"], "order"));
    if (c.order != 2 && c.order != 4 && c.order != 6)
      throw ConfigError("order", "unsupported order " + std::to_string(c.order) + " (2, 4 or 6)");
  }
  for (const auto& a : c.axes)
    if (a.nodes < minimum_nodes(c.order))
      throw ConfigError("grid.nodes", "order " + std::to_string(c.order) + " needs at least " +
                                          std::to_string(minimum_nodes(c.order)) + " nodes");

  if (j.contains("parameters")) {
    const json& p = j["parameters"];
    detail::allow_keys(p, "parameters", {"gamma", "epsilon", "coriolis", "alpha", "beta", "kappa"});
    if (p.contains("gamma")) c.params.gamma = get_number(p["gamma"], "parameters.gamma");
    if (p.contains("epsilon")) c.params.epsilon = get_number(p["epsilon"], "parameters.epsilon");
    if (p.contains("coriolis")) c.params.coriolis = get_number(p["coriolis"], "parameters.coriolis");
    if (p.contains("alpha")) c.params.alpha = get_number(p["alpha"], "parameters.alpha");
    if (p.contains("beta")) c.params.beta = get_number(p["beta"], "parameters.beta");
    if (p.contains("kappa")) c.params.kappa = get_number(p["kappa"], "parameters.kappa");
  }
  if (c.system == System::CEE && !(c.params.gamma > 1.0))
    throw ConfigError("parameters.gamma", "γ>1 required");
  if (c.system == System::CEE && !(c.params.gamma < 2.0))
    throw ConfigError("parameters.gamma", "γ<2 required by the boundary rotations");
  if (c.params.epsilon < 0.0) throw ConfigError("parameters.epsilon", "ε≥0 required");
  if (!(c.params.kappa > 0.0)) throw ConfigError("parameters.kappa", "κ>0 required");

  if (j.contains("initial")) {
    const json& i = j["initial"];
    detail::allow_keys(i, "initial", {"density", "phi", "pressure", "velocity", "strain", "center",
                                      "bump", "noise"});
    auto& in = c.initial;
    if (i.contains("density")) in.density = get_number(i["density"], "initial.density");
    if (i.contains("phi")) in.phi = get_number(i["phi"], "initial.phi");
    if (i.contains("pressure")) in.pressure = get_number(i["pressure"], "initial.pressure");
    if (i.contains("velocity")) in.velocity = detail::get_pair(i["velocity"], "initial.velocity");
    if (i.contains("strain")) in.strain = get_number(i["strain"], "initial.strain");
    if (i.contains("center")) in.center = detail::get_pair(i["center"], "initial.center");
    if (i.contains("noise")) in.noise = get_number(i["noise"], "initial.noise");
    if (i.contains("bump")) {
      const json& b = i["bump"];
      detail::allow_keys(b, "initial.bump", {"amplitude", "width", "center"});
      if (b.contains("amplitude")) in.bump_amplitude = get_number(b["amplitude"], "initial.bump.amplitude");
      if (b.contains("width")) in.bump_width = get_number(b["width"], "initial.bump.width");
      if (b.contains("center")) in.bump_center = detail::get_pair(b["center"], "initial.bump.center");
      if (!(in.bump_width > 0.0)) throw ConfigError("initial.bump.width", "must be positive");
    }
    if (c.system == System::CEE && !(in.density > 0.0 && in.pressure > 0.0))
      throw ConfigError("initial", "CEE needs positive density and pressure");
    if (c.system == System::SWE && !(in.phi > 0.0)) throw ConfigError("initial.phi", "must be positive");
  } else if (c.system == System::CEE) {
    c.initial.pressure = 1.0;
  }

  if (!j.contains("boundaries")) throw ConfigError("boundaries", "required");
  {
    const json& b = j["boundaries"];
    if (!b.is_object()) throw ConfigError("boundaries", "expected an object keyed by face");
    for (const auto& [k, v] : b.items()) {
      const auto face = detail::parse_face(k);
      if (!face) throw ConfigError("boundaries." + k, "unknown key");
      c.faces[*face] = detail::parse_face_config(v, "boundaries." + k);
    }
    const std::vector<FaceId> need =
        c.axes.size() == 1 ? std::vector<FaceId>{FaceId::West, FaceId::East}
                           : std::vector<FaceId>{FaceId::West, FaceId::East, FaceId::South, FaceId::North};
    for (FaceId f : need)
      if (!c.faces.count(f)) throw ConfigError(std::string("boundaries.") + face_name(f), "required");
    if (c.faces.size() != need.size())
      throw ConfigError("boundaries", "a one-dimensional grid has west and east faces only");
    for (const auto& [id, fc] : c.faces) {
      const Variant v = fc.preset.empty() ? *fc.variant : preset_bc(fc.preset, id).variant;
      if (!variant_compatible(v, c.system))
        throw ConfigError(std::string("boundaries.") + face_name(id),
                          std::string("variant ") + variant_name(v) + " does not apply to " +
                              system_name(c.system));
    }
  }

  if (j.contains("time")) {
    const json& t = j["time"];
    detail::allow_keys(t, "time", {"t_end", "cfl", "dt", "cadence"});
    if (t.contains("t_end")) c.t_end = get_number(t["t_end"], "time.t_end");
    if (t.contains("cfl")) c.cfl = get_number(t["cfl"], "time.cfl");
    if (t.contains("dt")) c.dt = get_number(t["dt"], "time.dt");
    if (t.contains("cadence")) c.cadence = get_integer(t["cadence"], "time.cadence");
  }
  if (!(c.t_end >= 0.0)) throw ConfigError("time.t_end", "must be non-negative");
  if (!(c.cfl > 0.0)) throw ConfigError("time.cfl", "must be positive");
  if (c.dt && !(*c.dt > 0.0)) throw ConfigError("time.dt", "must be positive");
  if (c.cadence < 1) throw ConfigError("time.cadence", "must be at least 1");

  if (j.contains("realization")) {
    const std::string r = get_string(j["realization"], "realization");
    if (r == "catalog") c.realization = Realization::Catalog;
    else if (r == "gradient") c.realization = Realization::Gradient;
    else throw ConfigError("realization", "expected 'catalog' or 'gradient'");
  }
  if (j.contains("check")) {
    const std::string m = get_string(j["check"], "check");
    if (m == "auto") c.check = CheckMode::Auto;
    else if (m == "homogeneous") c.check = CheckMode::Homogeneous;
    else if (m == "inhomogeneous") c.check = CheckMode::Inhomogeneous;
    else throw ConfigError("check", "expected 'auto', 'homogeneous' or 'inhomogeneous'");
  }
  if (j.contains("output")) {
    const json& o = j["output"];
    detail::allow_keys(o, "output", {"dir"});
    if (o.contains("dir")) c.output_dir = get_string(o["dir"], "output.dir");
  }
  if (j.contains("seed")) {
    const long s = get_integer(j["seed"], "seed");
    if (s < 0) throw ConfigError("seed", "must be non-negative");
    c.seed = static_cast<std::uint64_t>(s);
  }
  return c;
}

}  // namespace nlbc
