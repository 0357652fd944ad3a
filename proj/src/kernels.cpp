#include "hadacov/kernels.hpp"

#include <algorithm>
#include <cstdint>
#include <vector>

namespace hadacov::kernels {

namespace {

inline double dot_simd(const double* a, const double* b, std::size_t len) {
    double s = 0.0;
#pragma omp simd reduction(+ : s)
    for (std::size_t k = 0; k < len; ++k) s += a[k] * b[k];
    return s;
}

}  // namespace

void gram_hadamard_serial(const double* X, const double* Y,
                          std::size_t n, std::size_t d, std::size_t p,
                          double inv_sigma2, double* M) {
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double sx = 0.0;
            for (std::size_t k = 0; k < d; ++k) sx += X[i * d + k] * X[j * d + k];
            double sy = 0.0;
            for (std::size_t k = 0; k < p; ++k) sy += Y[i * p + k] * Y[j * p + k];
            double v = (sx / static_cast<double>(d)) * (sy / static_cast<double>(p)) * inv_sigma2;
            M[i * n + j] = v;
            M[j * n + i] = v;
        }
    }
}

void gram_hadamard_blocked(const double* X, const double* Y,
                           std::size_t n, std::size_t d, std::size_t p,
                           double inv_sigma2, double* M) {
    const std::size_t nb = (n + tile - 1) / tile;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(nb * (nb + 1) / 2);
    for (std::size_t bi = 0; bi < nb; ++bi)
        for (std::size_t bj = bi; bj < nb; ++bj) pairs.emplace_back(bi, bj);

    const double id = static_cast<double>(d);
    const double ip = static_cast<double>(p);
    const std::int64_t npairs = static_cast<std::int64_t>(pairs.size());

    // Tile pairs write disjoint regions: (i,j) with i<=j belongs to exactly one
    // (bi,bj), and its mirror (j,i) to no computed pair.
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t q = 0; q < npairs; ++q) {
        const std::size_t bi = pairs[static_cast<std::size_t>(q)].first;
        const std::size_t bj = pairs[static_cast<std::size_t>(q)].second;
        const std::size_t i1 = std::min(n, (bi + 1) * tile);
        const std::size_t j1 = std::min(n, (bj + 1) * tile);
        for (std::size_t i = bi * tile; i < i1; ++i) {
            for (std::size_t j = std::max(i, bj * tile); j < j1; ++j) {
                double sx = dot_simd(X + i * d, X + j * d, d);
                double sy = dot_simd(Y + i * p, Y + j * p, p);
                double v = (sx / id) * (sy / ip) * inv_sigma2;
                M[i * n + j] = v;
                M[j * n + i] = v;
            }
        }
    }
}

}
