#pragma once

#include <cstddef>

namespace hadacov::kernels {

inline constexpr std::size_t tile = 64;

// Both kernels fill the full n x n row-major buffer M with
//   M[i,j] = (dot(X_i, X_j)/d) * (dot(Y_i, Y_j)/p) * inv_sigma2
// where X is n x d row-major, Y is n x p row-major. Only the upper triangle
// is computed; the lower is mirrored, so M is bitwise symmetric.
//
// gram_hadamard_serial is the scalar reference: strict ascending-k reduction
// order, no reassociation.
void gram_hadamard_serial(const double* X, const double* Y,
                          std::size_t n, std::size_t d, std::size_t p,
                          double inv_sigma2, double* M);

// OpenMP kernel, tiled over upper-triangle tile pairs. Every output element is
// computed entirely by one thread with a fixed reduction recipe, so the result
// is bitwise identical for any thread count.
void gram_hadamard_blocked(const double* X, const double* Y,
                           std::size_t n, std::size_t d, std::size_t p,
                           double inv_sigma2, double* M);

}
