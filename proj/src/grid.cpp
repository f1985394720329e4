#include "gridsmooth/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace gridsmooth {

GridShape::GridShape(std::vector<std::size_t> side_lengths) : sides_(std::move(side_lengths)) {
  if (sides_.empty()) throw std::invalid_argument("GridShape: need at least one axis");
  n_ = 1;
  for (std::size_t s : sides_) {
    if (s == 0) throw std::invalid_argument("GridShape: side lengths must be >= 1");
    n_ *= s;
  }
  const std::size_t d = sides_.size();
  strides_.assign(d, 1);
  for (std::size_t a = d - 1; a > 0; --a) strides_[a - 1] = strides_[a] * sides_[a];
  edge_offsets_.assign(d + 1, 0);
  for (std::size_t a = 0; a < d; ++a)
    edge_offsets_[a + 1] = edge_offsets_[a] + (sides_[a] - 1) * (n_ / sides_[a]);
}

GridShape GridShape::cubic(std::size_t side, std::size_t dims) {
  return GridShape(std::vector<std::size_t>(dims, side));
}

bool GridShape::is_cubic() const {
  return std::all_of(sides_.begin(), sides_.end(), [&](std::size_t s) { return s == sides_[0]; });
}

std::size_t GridShape::degree(std::size_t flat) const {
  std::size_t deg = 0;
  for (std::size_t a = 0; a < dims(); ++a) {
    const std::size_t c = (flat / strides_[a]) % sides_[a];
    if (c > 0) ++deg;
    if (c + 1 < sides_[a]) ++deg;
  }
  return deg;
}

Signal::Signal(GridShape shape) : shape_(std::move(shape)), values_(shape_.size(), 0.0) {}

Signal::Signal(GridShape shape, std::vector<double> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
  if (values_.size() != shape_.size())
    throw ShapeMismatch("Signal: expected " + std::to_string(shape_.size()) + " values, got " +
                        std::to_string(values_.size()));
  if (!std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); }))
    throw std::invalid_argument("Signal: values must be finite");
}

EdgeVector::EdgeVector(GridShape shape) : shape_(std::move(shape)), values_(shape_.edge_count(), 0.0) {}

EdgeVector::EdgeVector(GridShape shape, std::vector<double> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
  if (values_.size() != shape_.edge_count())
    throw ShapeMismatch("EdgeVector: expected " + std::to_string(shape_.edge_count()) +
                        " values, got " + std::to_string(values_.size()));
}

std::size_t pencil_edge_start(const GridShape& shape, std::size_t axis, std::size_t start) {
  const std::size_t stride = shape.stride(axis);
  const std::size_t block = stride * shape.side(axis);
  const std::size_t outer = start / block;
  const std::size_t inner = start % block;
  return shape.edge_offset(axis) + outer * (shape.side(axis) - 1) * stride + inner;
}

EdgeVector incidence_apply(const Signal& theta) {
  const GridShape& shape = theta.shape();
  EdgeVector out(shape);
  for (std::size_t a = 0; a < shape.dims(); ++a) {
    const std::size_t len = shape.side(a);
    const std::size_t stride = shape.stride(a);
    for_each_pencil(shape, a, [&](std::size_t start) {
      std::size_t e = pencil_edge_start(shape, a, start);
      std::size_t i = start;
      for (std::size_t c = 0; c + 1 < len; ++c, i += stride, e += stride)
        out[e] = theta[i + stride] - theta[i];
    });
  }
  return out;
}

Signal incidence_adjoint(const EdgeVector& u) {
  const GridShape& shape = u.shape();
  Signal out(shape);
  for (std::size_t a = 0; a < shape.dims(); ++a) {
    const std::size_t len = shape.side(a);
    const std::size_t stride = shape.stride(a);
    for_each_pencil(shape, a, [&](std::size_t start) {
      std::size_t e = pencil_edge_start(shape, a, start);
      std::size_t i = start;
      for (std::size_t c = 0; c + 1 < len; ++c, i += stride, e += stride) {
        out[i] -= u[e];
        out[i + stride] += u[e];
      }
    });
  }
  return out;
}

Signal laplacian_apply(const Signal& theta) {
  const GridShape& shape = theta.shape();
  Signal out(shape);
  for (std::size_t a = 0; a < shape.dims(); ++a) {
    const std::size_t len = shape.side(a);
    const std::size_t stride = shape.stride(a);
    for_each_pencil(shape, a, [&](std::size_t start) {
      std::size_t i = start;
      for (std::size_t c = 0; c + 1 < len; ++c, i += stride) {
        const double diff = theta[i + stride] - theta[i];
        out[i] -= diff;
        out[i + stride] += diff;
      }
    });
  }
  return out;
}

Eigen::MatrixXd dense_incidence(const GridShape& shape) {
  if (shape.size() > 10000)
    throw std::length_error("dense_incidence: grid has more than 10000 nodes");
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(shape.edge_count()),
                                                static_cast<Eigen::Index>(shape.size()));
  for (std::size_t a = 0; a < shape.dims(); ++a) {
    const std::size_t len = shape.side(a);
    const std::size_t stride = shape.stride(a);
    for_each_pencil(shape, a, [&](std::size_t start) {
      std::size_t e = pencil_edge_start(shape, a, start);
      std::size_t i = start;
      for (std::size_t c = 0; c + 1 < len; ++c, i += stride, e += stride) {
        dense(static_cast<Eigen::Index>(e), static_cast<Eigen::Index>(i)) = -1.0;
        dense(static_cast<Eigen::Index>(e), static_cast<Eigen::Index>(i + stride)) = 1.0;
      }
    });
  }
  return dense;
}

double tv_seminorm(const Signal& theta) {
  const EdgeVector diffs = incidence_apply(theta);
  double total = 0.0;
  for (double v : diffs.values()) total += std::abs(v);
  return total;
}

double sobolev_seminorm(const Signal& theta) {
  const EdgeVector diffs = incidence_apply(theta);
  return std::sqrt(dot(diffs.values(), diffs.values()));
}

std::vector<std::size_t> flat_to_multi(std::size_t flat, const GridShape& shape) {
  if (flat >= shape.size())
    throw std::out_of_range("flat_to_multi: index " + std::to_string(flat) + " out of range");
  std::vector<std::size_t> multi(shape.dims());
  for (std::size_t a = 0; a < shape.dims(); ++a)
    multi[a] = (flat / shape.stride(a)) % shape.side(a) + 1;
  return multi;
}

std::size_t multi_to_flat(std::span<const std::size_t> multi, const GridShape& shape) {
  if (multi.size() != shape.dims()) throw ShapeMismatch("multi_to_flat: wrong number of axes");
  std::size_t flat = 0;
  for (std::size_t a = 0; a < shape.dims(); ++a) {
    if (multi[a] < 1 || multi[a] > shape.side(a))
      throw std::out_of_range("multi_to_flat: coordinate out of range on axis " + std::to_string(a));
    flat += (multi[a] - 1) * shape.stride(a);
  }
  return flat;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ShapeMismatch("dot: length mismatch");
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double mean(std::span<const double> v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace gridsmooth
