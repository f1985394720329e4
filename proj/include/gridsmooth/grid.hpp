#pragma once

// Rectangular lattice graphs, their edge incidence operator D, the
// Laplacian L = D^T D, and the two seminorms ||D theta||_1, ||D theta||_2.
//
// Conventions used by every module and by the file formats:
//   * flat node indices are 0-based and row-major (last axis fastest);
//   * multi-indices are 1-based, (i_1, ..., i_d) in {1..l_1} x ... x {1..l_d};
//   * edges are enumerated axis-major: all axis-0 edges first, then axis-1,
//     and so on. Inside one axis block, edge (i, i + stride) is ordered by
//     the flat index of its lower endpoint i.
//   * D has a -1 at the lower endpoint and +1 at the upper endpoint, so
//     (D theta)_e = theta_j - theta_i for e = (i, j), i < j.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace gridsmooth {

class GridShape {
 public:
  explicit GridShape(std::vector<std::size_t> side_lengths);

  /// d axes of length `side` each.
  static GridShape cubic(std::size_t side, std::size_t dims);

  std::size_t dims() const { return sides_.size(); }
  std::size_t size() const { return n_; }
  std::size_t side(std::size_t axis) const { return sides_.at(axis); }
  const std::vector<std::size_t>& side_lengths() const { return sides_; }

  /// Flat-index distance between neighbours along `axis`.
  std::size_t stride(std::size_t axis) const { return strides_.at(axis); }

  /// Maximum degree of the lattice, 2d.
  std::size_t max_degree() const { return 2 * dims(); }

  /// m = sum_axis (l_axis - 1) * n / l_axis.
  std::size_t edge_count() const { return edge_offsets_.back(); }

  /// Index of the first axis-`axis` edge in an EdgeVector.
  std::size_t edge_offset(std::size_t axis) const { return edge_offsets_.at(axis); }
  std::size_t edges_along(std::size_t axis) const {
    return edge_offsets_.at(axis + 1) - edge_offsets_.at(axis);
  }

  bool is_cubic() const;

  /// Number of neighbours of a node.
  std::size_t degree(std::size_t flat) const;

  bool operator==(const GridShape& other) const { return sides_ == other.sides_; }

 private:
  std::vector<std::size_t> sides_;
  std::vector<std::size_t> strides_;
  std::vector<std::size_t> edge_offsets_;
  std::size_t n_ = 0;
};

class Signal {
 public:
  /// Zero signal on `shape`.
  explicit Signal(GridShape shape);
  Signal(GridShape shape, std::vector<double> values);

  const GridShape& shape() const { return shape_; }
  std::size_t size() const { return values_.size(); }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  const std::vector<double>& vector() const { return values_; }

 private:
  GridShape shape_;
  std::vector<double> values_;
};

class EdgeVector {
 public:
  explicit EdgeVector(GridShape shape);
  EdgeVector(GridShape shape, std::vector<double> values);

  const GridShape& shape() const { return shape_; }
  std::size_t size() const { return values_.size(); }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  double operator[](std::size_t e) const { return values_[e]; }
  double& operator[](std::size_t e) { return values_[e]; }

 private:
  GridShape shape_;
  std::vector<double> values_;
};

/// Thrown when two operands live on different grids or have the wrong length.
class ShapeMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Calls f(start) for every line of nodes parallel to `axis`. The line holds
/// nodes start, start + stride(axis), ..., start + (side(axis) - 1) * stride(axis),
/// and its edges occupy a contiguous-by-stride run of the axis edge block
/// beginning at pencil_edge_start(shape, axis, start).
template <typename F>
void for_each_pencil(const GridShape& shape, std::size_t axis, F&& f) {
  const std::size_t stride = shape.stride(axis);
  const std::size_t block = stride * shape.side(axis);
  for (std::size_t outer = 0; outer < shape.size(); outer += block) {
    for (std::size_t inner = 0; inner < stride; ++inner) f(outer + inner);
  }
}

/// EdgeVector index of the axis edge leaving pencil start node `start`; the
/// following edges of the same pencil are spaced stride(axis) apart.
std::size_t pencil_edge_start(const GridShape& shape, std::size_t axis, std::size_t start);

EdgeVector incidence_apply(const Signal& theta);
Signal incidence_adjoint(const EdgeVector& u);
Signal laplacian_apply(const Signal& theta);

/// Dense m x n incidence matrix; refuses grids with more than 10000 nodes.
Eigen::MatrixXd dense_incidence(const GridShape& shape);

double tv_seminorm(const Signal& theta);
double sobolev_seminorm(const Signal& theta);

std::vector<std::size_t> flat_to_multi(std::size_t flat, const GridShape& shape);
std::size_t multi_to_flat(std::span<const std::size_t> multi, const GridShape& shape);

double dot(std::span<const double> a, std::span<const double> b);
double mean(std::span<const double> v);

}  // namespace gridsmooth
