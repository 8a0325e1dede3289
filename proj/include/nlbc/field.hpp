#pragma once

#include <Eigen/Dense>

#include "nlbc/errors.hpp"
#include "nlbc/sbp.hpp"

namespace nlbc {

/// Point vectors and matrices; at most four components, no heap storage.
using PVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 4, 1>;
using PMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>;

/// All solution components at all grid nodes; one column per component.
class StateField {
 public:
  StateField(const Grid& grid, int components)
      : grid_(grid), values_(Mat::Zero(static_cast<Eigen::Index>(grid.size()), components)) {}

  const Grid& grid() const { return grid_; }
  int components() const { return static_cast<int>(values_.cols()); }
  std::size_t nodes() const { return static_cast<std::size_t>(values_.rows()); }

  PVec at(std::size_t k) const { return values_.row(static_cast<Eigen::Index>(k)).transpose(); }
  void set(std::size_t k, const PVec& u) {
    values_.row(static_cast<Eigen::Index>(k)) = u.transpose();
  }
  Vec component(int c) const { return values_.col(c); }
  Eigen::Ref<Vec> component_ref(int c) { return values_.col(c); }

  Mat& values() { return values_; }
  const Mat& values() const { return values_; }

  bool all_finite() const { return values_.allFinite(); }

 private:
  Grid grid_;
  Mat values_;
};

}  // namespace nlbc
