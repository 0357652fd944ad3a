#include "doctest.h"

#include <cmath>
#include <vector>

#include "hadacov/ensembles.hpp"
#include "hadacov/errors.hpp"
#include "hadacov/spectra.hpp"

using namespace hadacov;

namespace {

spectral_sample sample_of(std::vector<double> values) {
    spectral_sample s;
    s.eigenvalues = std::move(values);
    return s;
}

}  // namespace

TEST_SUITE("spectra") {

TEST_CASE("eigenvalues of small hand matrices") {
    symmetric_matrix D{3, {3, 0, 0, 0, 1, 0, 0, 0, 2}};
    const spectral_sample sd = eigenvalues(D);
    REQUIRE(sd.eigenvalues.size() == 3);
    CHECK(sd.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(sd.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(sd.eigenvalues[2] == doctest::Approx(3.0).epsilon(1e-13));

    symmetric_matrix A{2, {2, 1, 1, 2}};
    const spectral_sample sa = eigenvalues(A);
    CHECK(sa.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(sa.eigenvalues[1] == doctest::Approx(3.0).epsilon(1e-13));

    symmetric_matrix I{5, std::vector<double>(25, 0.0)};
    for (int i = 0; i < 5; ++i) I.entries[i * 5 + i] = 1.0;
    for (double lambda : eigenvalues(I).eigenvalues)
        CHECK(lambda == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("ensemble spectrum: sorted, near-PSD, trace identity, validated mode") {
    entry_distribution g;
    ensemble_spec spec;
    const random_matrix X = sample_matrix(g, 60, 9, 101);
    const random_matrix Y = sample_matrix(g, 60, 13, 102);
    const symmetric_matrix M = hadamard_covariance(X, Y, spec);
    const spectral_sample s = eigenvalues(M);
    REQUIRE(s.eigenvalues.size() == 60);
    long double trace = 0.0L, sum = 0.0L;
    for (std::size_t i = 0; i < 60; ++i) trace += M.at(i, i);
    for (std::size_t i = 1; i < 60; ++i) {
        CHECK(s.eigenvalues[i - 1] <= s.eigenvalues[i]);
        CHECK(std::isfinite(s.eigenvalues[i]));
    }
    for (double lambda : s.eigenvalues) sum += lambda;
    CHECK(std::fabs(static_cast<double>(sum - trace)) <=
          1e-8 * std::fabs(static_cast<double>(trace)));
    // M = (1/dp) ZZ^T for the column-Kronecker Z, so no real negative part
    CHECK(s.eigenvalues.front() >= -1e-10);

    const spectral_sample v = eigenvalues_validated(M);
    for (std::size_t i = 0; i < 60; ++i)
        CHECK(v.eigenvalues[i] == doctest::Approx(s.eigenvalues[i]).epsilon(1e-12));
}

TEST_CASE("empirical moments use compensated summation") {
    const spectral_sample s = sample_of({1.0, 2.0, 3.0});
    CHECK(empirical_moment(s, 1) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(empirical_moment(s, 2) == doctest::Approx(14.0 / 3.0).epsilon(1e-15));
    CHECK(empirical_moment(s, 3) == doctest::Approx(12.0).epsilon(1e-15));
    CHECK_THROWS_AS(empirical_moment(s, 0), config_error);
}

TEST_CASE("empirical cdf: right continuity, ties, left limits") {
    empirical_cdf F{{1.0, 2.0, 2.0, 3.0}};
    CHECK(F(0.5) == 0.0);
    CHECK(F(1.0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(F(1.999) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(F(2.0) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(F.left_value(2.0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(F(3.0) == 1.0);
    CHECK(F(1e300) == 1.0);
    CHECK(F.left_value(-1e300) == 0.0);

    const spectral_sample s = sample_of({1.0, 2.0, 3.0});
    const empirical_cdf G = make_empirical_cdf(s);
    CHECK(G(2.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("histogram conserves mass in exact integer arithmetic") {
    const spectral_sample s = sample_of({-0.5, 0.1, 0.4, 0.4, 0.9, 2.5});
    const histogram h = make_histogram(s, 4, std::make_pair(0.0, 1.0));
    REQUIRE(h.counts.size() == 4);
    CHECK(h.edges.front() == 0.0);
    CHECK(h.edges.back() == 1.0);
    CHECK(h.underflow == 1);
    CHECK(h.overflow == 1);
    std::int64_t total = h.underflow + h.overflow;
    for (std::int64_t c : h.counts) total += c;
    CHECK(total == 6);
    CHECK(h.counts[0] == 1);  // [0, 0.25): 0.1
    CHECK(h.counts[1] == 2);  // [0.25, 0.5): 0.4 twice
    CHECK(h.counts[3] == 1);  // [0.75, 1.0]: 0.9
    CHECK(h.density(1) == doctest::Approx(2.0 / (6.0 * 0.25)).epsilon(1e-15));
}

TEST_CASE("last bin includes its right edge") {
    const spectral_sample s = sample_of({0.0, 1.0});
    const histogram h = make_histogram(s, 2, std::make_pair(0.0, 1.0));
    CHECK(h.counts[0] == 1);
    CHECK(h.counts[1] == 1);
    CHECK(h.underflow == 0);
    CHECK(h.overflow == 0);
}

TEST_CASE("histogram default range covers the data and a constant sample works") {
    spectral_sample s = sample_of({0.7, 0.7, 0.7});
    const histogram h = make_histogram(s, 3, std::nullopt);
    CHECK(h.underflow == 0);
    CHECK(h.overflow == 0);
    std::int64_t total = 0;
    for (std::int64_t c : h.counts) total += c;
    CHECK(total == 3);

    CHECK_THROWS_AS(make_histogram(s, 3, std::make_pair(2.0, 1.0)), config_error);
    CHECK_THROWS_AS(make_histogram(s, 0, std::nullopt), config_error);
}

TEST_CASE("histogram default range pads the limit-law support when dims are known") {
    entry_distribution g;
    ensemble_spec spec;
    const random_matrix X = sample_matrix(g, 50, 10, 7);
    const random_matrix Y = sample_matrix(g, 50, 10, 8);
    const symmetric_matrix M = hadamard_covariance(X, Y, spec);
    spectral_sample s = eigenvalues(M);
    s.dims = dimension_triple{50, 10, 10};
    const histogram h = make_histogram(s, 30, std::nullopt);
    CHECK(h.underflow == 0);
    CHECK(h.overflow == 0);
    // realized gamma 0.5: support [0.0858, 2.914], padded by 5% of the span
    CHECK(h.edges.front() <= 0.086);
    CHECK(h.edges.back() >= 2.91);
}

}
