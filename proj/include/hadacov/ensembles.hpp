#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hadacov/distributions.hpp"

namespace hadacov {

// Dense row-major random matrix with sampling provenance.
struct random_matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> entries;
    std::uint64_t generator_seed = 0;

    double at(std::size_t i, std::size_t j) const { return entries[i * cols + j]; }
};

// Dense symmetric matrix, full storage; entry(i,j) == entry(j,i) bitwise by
// construction (only one triangle is ever computed).
struct symmetric_matrix {
    std::size_t order = 0;
    std::vector<double> entries;

    double at(std::size_t i, std::size_t j) const { return entries[i * order + j]; }
};

struct ensemble_spec {
    entry_distribution dist_x;
    entry_distribution dist_y;
    bool normalize = true;  // divide M by sigma_x^2 sigma_y^2
    std::optional<double> truncation_c;

    void validate() const;
    std::string summary() const;
};

struct dimension_triple {
    std::size_t n = 0, d = 0, p = 0;

    double realized_gamma() const {
        return static_cast<double>(n) / (static_cast<double>(d) * static_cast<double>(p));
    }
    double realized_a() const {
        return static_cast<double>(p) / static_cast<double>(d);
    }
};

struct dimension_schedule {
    double target_gamma = 0.0;
    double target_a = 0.0;
    std::vector<dimension_triple> triples;
};

// i.i.d. matrix fill from a SplitMix64 stream seeded with `seed`, row-major
// order; bit-identical for identical arguments on any platform / thread count.
random_matrix sample_matrix(const entry_distribution& dist,
                            std::size_t rows, std::size_t cols,
                            std::uint64_t seed);

// M_ij = (1/d)(X X^T)_ij * (1/p)(Y Y^T)_ij, divided by sigma_x^2 sigma_y^2
// when spec.normalize. OpenMP tiled kernel.
symmetric_matrix hadamard_covariance(const random_matrix& X,
                                     const random_matrix& Y,
                                     const ensemble_spec& spec);

// Scalar reference implementation of the same map, kept for kernel testing.
symmetric_matrix hadamard_covariance_serial(const random_matrix& X,
                                            const random_matrix& Y,
                                            const ensemble_spec& spec);

// Entrywise truncation-centering: X~ = X 1{|X| <= c} - E[X 1{|X| <= c}], the
// expectation being the population quantity (0 for the symmetric catalog).
random_matrix truncate_center(const random_matrix& X, double c,
                              const entry_distribution& dist);

// d = round(sqrt(n/(gamma a))), p = round(a d). Downstream analytics must use
// the realized ratios of each triple, never the targets.
dimension_schedule make_dimension_schedule(double gamma, double a,
                                           const std::vector<std::size_t>& n_values);

}
