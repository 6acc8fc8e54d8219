#pragma once

#include <cstddef>
#include <vector>

namespace bvlab {

// Eigenvalues of a symmetric matrix (row-major n*n) by cyclic Jacobi
// rotations, ascending order. Intended for the small covariance blocks this
// project assembles; O(n^3) per sweep is fine there.
std::vector<double> symmetric_eigenvalues(std::vector<double> a, std::size_t n);

}  // namespace bvlab
