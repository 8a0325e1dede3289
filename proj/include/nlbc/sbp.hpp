#pragma once

// Diagonal-norm summation-by-parts first-derivative operators on uniform
// 1D intervals and 2D tensor-product rectangles.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "nlbc/errors.hpp"

namespace nlbc {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct Axis {
  int nodes = 0;
  double left = 0.0;
  double right = 1.0;

  double spacing() const { return (right - left) / (nodes - 1); }
  double coordinate(int i) const { return left + i * spacing(); }
};

/// Uniform grid on an interval (dimension 1) or a rectangle (dimension 2).
/// Nodes are numbered with the x index running fastest.
class Grid {
 public:
  static Grid line(int nodes, double left = 0.0, double right = 1.0) {
    return Grid({Axis{nodes, left, right}});
  }
  static Grid rectangle(int nx, int ny, double x0 = 0.0, double x1 = 1.0, double y0 = 0.0,
                        double y1 = 1.0) {
    return Grid({Axis{nx, x0, x1}, Axis{ny, y0, y1}});
  }

  int dimension() const { return static_cast<int>(axes_.size()); }
  const Axis& axis(int d) const { return axes_.at(d); }
  int nodes(int d) const { return axes_.at(d).nodes; }
  double spacing(int d) const { return axes_.at(d).spacing(); }
  double min_spacing() const {
    double h = spacing(0);
    for (int d = 1; d < dimension(); ++d) h = std::min(h, spacing(d));
    return h;
  }
  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& a : axes_) n *= static_cast<std::size_t>(a.nodes);
    return n;
  }
  std::size_t index(int i, int j = 0) const {
    return static_cast<std::size_t>(i) + static_cast<std::size_t>(nodes(0)) * j;
  }
  std::array<double, 2> position(std::size_t k) const {
    const int nx = nodes(0);
    const int i = static_cast<int>(k % nx);
    const int j = static_cast<int>(k / nx);
    return {axes_[0].coordinate(i), dimension() > 1 ? axes_[1].coordinate(j) : 0.0};
  }

 private:
  explicit Grid(std::vector<Axis> axes) : axes_(std::move(axes)) {
    for (const auto& a : axes_) {
      if (a.nodes < 2) throw InvalidArgument("grid needs at least 2 nodes per direction");
      if (!(a.right > a.left)) throw InvalidArgument("grid extent must be positive");
    }
  }
  std::vector<Axis> axes_;
};

/// One-dimensional SBP operator D = P^{-1} Q.
struct SbpOperator1D {
  int order = 0;
  double spacing = 0.0;
  int boundary_rows = 0;
  Vec weights;  // diagonal of P, length units
  Mat Q;        // Q + Q^T = diag(-1, 0, ..., 0, 1)
  Mat D;

  int nodes() const { return static_cast<int>(weights.size()); }
};

namespace detail {

struct Closure {
  int boundary_rows;
  std::vector<double> interior;           // c_1 .. c_r of Q(i, i+k)
  std::vector<double> weights;            // unscaled boundary weights
  std::vector<std::vector<double>> skew;  // upper triangle of Q in the boundary block
};

inline const Closure& closure(int order) {
  static const Closure c2{1, {0.5}, {0.5}, {{}}};
  static const Closure c4{4,
                          {2.0 / 3.0, -1.0 / 12.0},
                          {17.0 / 48.0, 59.0 / 48.0, 43.0 / 48.0, 49.0 / 48.0},
                          {{59.0 / 96.0, -1.0 / 12.0, -1.0 / 32.0},
                           {59.0 / 96.0, 0.0},
                           {59.0 / 96.0},
                           {}}};
  // Q(4,5) = 342523/518400 fixes the one-parameter 6-3 family.
  static const Closure c6{
      6,
      {3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0},
      {13649.0 / 43200.0, 12013.0 / 8640.0, 2711.0 / 4320.0, 5359.0 / 4320.0, 7877.0 / 8640.0,
       43801.0 / 43200.0},
      {{104009.0 / 172800.0, 30443.0 / 259200.0, -33311.0 / 86400.0, 5621.0 / 28800.0,
        -601.0 / 20736.0},
       {-311.0 / 51840.0, 6743.0 / 5760.0, -24337.0 / 34560.0, 36661.0 / 259200.0},
       {-2231.0 / 5184.0, 41287.0 / 51840.0, -7333.0 / 28800.0},
       {4147.0 / 17280.0, 25427.0 / 259200.0},
       {342523.0 / 518400.0},
       {}}};
  switch (order) {
    case 2: return c2;
    case 4: return c4;
    case 6: return c6;
    default:
      throw InvalidArgument("unsupported order " + std::to_string(order) +
                            " (supported: 2, 4, 6)");
  }
}

}  // namespace detail

/// Smallest node count the closure of `order` fits into.
inline int minimum_nodes(int order) { return 2 * detail::closure(order).boundary_rows; }

inline SbpOperator1D build_sbp_1d(int order, int nodes, double spacing) {
  const auto& c = detail::closure(order);
  if (nodes < 2 * c.boundary_rows) {
    throw InvalidArgument("grid too small for order " + std::to_string(order) + " closure: " +
                          std::to_string(nodes) + " < " + std::to_string(2 * c.boundary_rows) +
                          " nodes");
  }
  if (!(spacing > 0.0)) throw InvalidArgument("spacing must be positive");

  const int n = nodes;
  const int b = c.boundary_rows;
  const int r = static_cast<int>(c.interior.size());

  // Strictly upper triangle of the skew part; the lower half is its exact negative.
  Mat upper = Mat::Zero(n, n);
  auto in_block = [&](int i, int j) {
    return (i < b && j < b) || (i >= n - b && j >= n - b);
  };
  for (int i = 0; i < n; ++i) {
    for (int k = 1; k <= r; ++k) {
      const int j = i + k;
      if (j < n && !in_block(i, j)) upper(i, j) = c.interior[k - 1];
    }
  }
  for (int i = 0; i < b; ++i) {
    for (int j = i + 1; j < b; ++j) {
      const double q = c.skew[i][j - i - 1];
      upper(i, j) = q;
      // mirrored block at the right end: Q(n-1-i, n-1-j) = -Q(i, j)
      upper(n - 1 - j, n - 1 - i) = q;
    }
  }

  SbpOperator1D op;
  op.order = order;
  op.spacing = spacing;
  op.boundary_rows = b;
  op.Q = upper - upper.transpose();
  op.Q(0, 0) = -0.5;
  op.Q(n - 1, n - 1) = 0.5;

  op.weights = Vec::Ones(n);
  for (int i = 0; i < b; ++i) {
    op.weights(i) = c.weights[i];
    op.weights(n - 1 - i) = c.weights[i];
  }
  op.weights *= spacing;
  op.D = op.weights.cwiseInverse().asDiagonal() * op.Q;
  return op;
}

enum class FaceId { West = 0, East = 1, South = 2, North = 3 };

inline const char* face_name(FaceId f) {
  switch (f) {
    case FaceId::West: return "west";
    case FaceId::East: return "east";
    case FaceId::South: return "south";
    case FaceId::North: return "north";
  }
  return "?";
}

/// Boundary face: restriction (node list), diagonal quadrature and outward normal.
struct Face {
  FaceId id = FaceId::West;
  int axis = 0;
  std::vector<std::size_t> nodes;
  Vec weights;
  std::array<double, 2> normal{0.0, 0.0};
};

/// Per-direction SBP operators with volume and boundary quadratures.
/// Immutable after construction.
class OperatorSet {
 public:
  OperatorSet(Grid grid, int order) : grid_(std::move(grid)), order_(order) {
    for (int d = 0; d < grid_.dimension(); ++d) {
      axes_.push_back(build_sbp_1d(order, grid_.nodes(d), grid_.spacing(d)));
    }
    const int nx = grid_.nodes(0);
    if (grid_.dimension() == 1) {
      volume_ = axes_[0].weights;
      faces_.push_back(make_face(FaceId::West, 0, {0}, Vec::Ones(1), {-1.0, 0.0}));
      faces_.push_back(
          make_face(FaceId::East, 0, {static_cast<std::size_t>(nx - 1)}, Vec::Ones(1), {1.0, 0.0}));
      return;
    }
    const int ny = grid_.nodes(1);
    volume_.resize(static_cast<Eigen::Index>(grid_.size()));
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        volume_(static_cast<Eigen::Index>(grid_.index(i, j))) =
            axes_[0].weights(i) * axes_[1].weights(j);

    std::vector<std::size_t> west, east, south, north;
    for (int j = 0; j < ny; ++j) {
      west.push_back(grid_.index(0, j));
      east.push_back(grid_.index(nx - 1, j));
    }
    for (int i = 0; i < nx; ++i) {
      south.push_back(grid_.index(i, 0));
      north.push_back(grid_.index(i, ny - 1));
    }
    faces_.push_back(make_face(FaceId::West, 0, west, axes_[1].weights, {-1.0, 0.0}));
    faces_.push_back(make_face(FaceId::East, 0, east, axes_[1].weights, {1.0, 0.0}));
    faces_.push_back(make_face(FaceId::South, 1, south, axes_[0].weights, {0.0, -1.0}));
    faces_.push_back(make_face(FaceId::North, 1, north, axes_[0].weights, {0.0, 1.0}));
  }

  const Grid& grid() const { return grid_; }
  int order() const { return order_; }
  int dimension() const { return grid_.dimension(); }
  const SbpOperator1D& axis(int d) const { return axes_.at(d); }
  const Vec& volume_weights() const { return volume_; }
  const std::vector<Face>& faces() const { return faces_; }
  const Face& face(FaceId id) const {
    for (const auto& f : faces_)
      if (f.id == id) return f;
    throw InvalidArgument(std::string("no face ") + face_name(id) + " on this grid");
  }

  /// Applies D along direction `d` with identity in the other direction.
  Vec derivative(int d, const Vec& u) const {
    if (u.size() != static_cast<Eigen::Index>(grid_.size()))
      throw InvalidArgument("field size does not match grid");
    if (dimension() == 1) return axes_[0].D * u;
    const int nx = grid_.nodes(0);
    const int ny = grid_.nodes(1);
    Vec out(u.size());
    Eigen::Map<const Mat> in(u.data(), nx, ny);
    Eigen::Map<Mat> res(out.data(), nx, ny);
    if (d == 0)
      res.noalias() = axes_[0].D * in;
    else
      res.noalias() = in * axes_[1].D.transpose();
    return out;
  }

  /// Test hook: mutable access used to corrupt operators in detector checks.
  SbpOperator1D& mutable_axis(int d) { return axes_.at(d); }

 private:
  static Face make_face(FaceId id, int axis, std::vector<std::size_t> nodes, Vec w,
                        std::array<double, 2> n) {
    Face f;
    f.id = id;
    f.axis = axis;
    f.nodes = std::move(nodes);
    f.weights = std::move(w);
    f.normal = n;
    return f;
  }

  Grid grid_;
  int order_;
  std::vector<SbpOperator1D> axes_;
  Vec volume_;
  std::vector<Face> faces_;
};

inline OperatorSet build_operator_set(const Grid& grid, int order) {
  return OperatorSet(grid, order);
}

/// Max-norm residual of Q_d + Q_d^T - sum_faces E^T P_bd N_d E for each direction.
///
/// The 2D operator is Q_d scaled by the transverse quadrature weight on every
/// grid line; residuals are reported per line divided by that weight so they
/// do not shrink with the mesh size.
inline std::vector<double> sbp_identity_residual(const OperatorSet& ops) {
  const Grid& g = ops.grid();
  std::vector<double> out;
  for (int d = 0; d < ops.dimension(); ++d) {
    const auto& op = ops.axis(d);
    const Mat sym = op.Q + op.Q.transpose();
    // Boundary assembly is diagonal in node space.
    Vec boundary = Vec::Zero(static_cast<Eigen::Index>(g.size()));
    for (const auto& f : ops.faces()) {
      const double nd = f.normal[d];
      if (nd == 0.0) continue;
      for (std::size_t m = 0; m < f.nodes.size(); ++m)
        boundary(static_cast<Eigen::Index>(f.nodes[m])) += f.weights(static_cast<Eigen::Index>(m)) * nd;
    }
    const int lines = ops.dimension() == 1 ? 1 : g.nodes(1 - d);
    const int len = g.nodes(d);
    double worst = 0.0;
    for (int t = 0; t < lines; ++t) {
      const double wt = ops.dimension() == 1 ? 1.0 : ops.axis(1 - d).weights(t);
      for (int i = 0; i < len; ++i) {
        const std::size_t k = d == 0 ? g.index(i, t) : g.index(t, i);
        for (int ip = 0; ip < len; ++ip) {
          double r = sym(i, ip);
          if (i == ip) r -= boundary(static_cast<Eigen::Index>(k)) / wt;
          worst = std::max(worst, std::abs(r));
        }
      }
    }
    out.push_back(worst);
  }
  return out;
}

/// Discrete volume inner product u^T P_Omega v.
inline double inner_product(const OperatorSet& ops, const Vec& u, const Vec& v) {
  const auto& w = ops.volume_weights();
  if (u.size() != w.size() || v.size() != w.size())
    throw InvalidArgument("inner_product: field shape does not match grid");
  return (w.array() * u.array() * v.array()).sum();
}

/// Discrete surface integral of boundary values ordered as in `face.nodes`.
inline double face_integral(const Face& face, const Vec& values) {
  if (values.size() != face.weights.size())
    throw InvalidArgument("face_integral: value count does not match face");
  return face.weights.dot(values);
}

inline double face_integral(const OperatorSet& ops, FaceId id, const Vec& values) {
  return face_integral(ops.face(id), values);
}

}  // namespace nlbc
