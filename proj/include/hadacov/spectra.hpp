#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hadacov/ensembles.hpp"

namespace hadacov {

// Sorted spectrum of one realization plus provenance. wall_time is in-memory
// diagnostics only; persisted reports never contain wall-clock values.
struct spectral_sample {
    std::vector<double> eigenvalues;  // ascending
    dimension_triple dims{};
    std::string spec_summary;
    std::uint64_t seed = 0;
    double wall_time = 0.0;
};

// Full symmetric eigendecomposition, values only (LAPACK dsyevd, pinned to one
// BLAS thread so results are bitwise reproducible for any --threads).
spectral_sample eigenvalues(const symmetric_matrix& M);

// Values-and-vectors path enforcing the accuracy contract
// max_i ||M v_i - lambda_i v_i|| <= 1e-8 ||M||_F; throws on violation.
spectral_sample eigenvalues_validated(const symmetric_matrix& M);

// (1/n) sum lambda_i^k, compensated summation, integer powers by repeated
// multiplication (bit-stable across libm versions).
double empirical_moment(const spectral_sample& sample, int k);

// Right-continuous step CDF F(x) = #{i: x_i <= x}/n over the sorted points.
struct empirical_cdf {
    std::vector<double> points;  // ascending

    double operator()(double x) const;  // #{<= x}/n
    double left_value(double x) const;  // #{< x}/n, the left limit
};

empirical_cdf make_empirical_cdf(const spectral_sample& sample);

// Equal-width bins; counts are exact integers so mass conservation
// (sum counts + underflow + overflow == n) is testable in exact arithmetic.
// Convention: bin j covers [edge_j, edge_{j+1}), the last bin includes its
// right edge.
struct histogram {
    std::vector<double> edges;        // bins+1 ascending
    std::vector<std::int64_t> counts; // per bin
    std::int64_t underflow = 0;
    std::int64_t overflow = 0;
    std::size_t total = 0;

    double density(std::size_t bin) const;  // counts[bin] / (total * width)
};

// Default range: MP support [a,b] at the sample's realized gamma, padded by 5%
// of the span on each side, then extended to cover any leaking eigenvalues.
// An explicit range is used verbatim.
histogram make_histogram(const spectral_sample& sample, int bins,
                         std::optional<std::pair<double, double>> range);

}
