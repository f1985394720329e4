#pragma once

// Closed-form eigenstructure of the cubic-grid Laplacian.
//
// The eigenvectors of the free-boundary path Laplacian are the orthonormal
// type-II cosine vectors, and the grid Laplacian is a Kronecker sum of path
// Laplacians, so V^T theta is a separable d-dimensional DCT-II. Coefficient
// slot i carries the frequency multi-index flat_to_multi(i) and eigenvalue
//
//   rho_i = sum_j 4 sin^2(pi (i_j - 1) / (2 l)).

#include <cstddef>
#include <span>
#include <vector>

#include "gridsmooth/grid.hpp"

namespace gridsmooth {

class SpectrumView {
 public:
  explicit SpectrumView(const GridShape& shape);

  const GridShape& shape() const { return shape_; }
  std::span<const double> eigenvalues() const { return eigenvalues_; }

  /// Slot indices sorted by ascending eigenvalue, ties by slot index.
  std::span<const std::size_t> order() const { return order_; }

  double operator[](std::size_t slot) const { return eigenvalues_[slot]; }

 private:
  GridShape shape_;
  std::vector<double> eigenvalues_;
  std::vector<std::size_t> order_;
};

/// Throws std::invalid_argument unless every side length is equal.
void require_cubic(const GridShape& shape, const char* who);

/// Eigenvalues of the path Laplacian on `side` nodes, 4 sin^2(pi k / (2 side)).
std::vector<double> path_eigenvalues(std::size_t side);

SpectrumView grid_eigenvalues(const GridShape& shape);

Signal spectral_forward(const Signal& theta);
Signal spectral_inverse(const Signal& gamma);

/// V diag(gain) V^T y.
Signal spectral_filter(const Signal& y, std::span<const double> gain);

}  // namespace gridsmooth
