#include "doctest.h"

#include <cmath>
#include <vector>

#include "hadacov/errors.hpp"
#include "hadacov/metrics.hpp"

using namespace hadacov;

TEST_SUITE("metrics") {

TEST_CASE("identical step functions are at Levy distance exactly zero") {
    empirical_cdf F{{0.25, 1.0, 1.0, 2.5}};
    const distance_result r = levy_distance(F, make_view(F));
    CHECK(r.value == 0.0);
    CHECK(r.tolerance == 0.0);
}

TEST_CASE("point masses at 0 and 0.3 are at distance 0.3") {
    empirical_cdf F{{0.0}};
    empirical_cdf G{{0.3}};
    const distance_result r = levy_distance(F, make_view(G), 1e-9);
    CHECK(std::fabs(r.value - 0.3) <= 1e-8);
    CHECK(r.tolerance <= 1e-8);
}

TEST_CASE("shifting a sample by delta moves it by at most delta") {
    std::vector<double> base{0.1, 0.4, 0.9, 1.3, 2.0};
    for (double delta : {0.05, 0.2}) {
        std::vector<double> shifted;
        for (double x : base) shifted.push_back(x + delta);
        empirical_cdf F{base};
        empirical_cdf G{shifted};
        const distance_result r = levy_distance(F, make_view(G));
        CHECK(r.value <= delta + 2e-6);
        CHECK(r.value >= delta / 3.0);  // five distinct jumps: a real displacement
    }
}

TEST_CASE("Levy distance is symmetric and satisfies the triangle inequality") {
    empirical_cdf A{{0.0, 0.5, 1.0, 1.5}};
    empirical_cdf B{{0.2, 0.6, 1.3, 1.9}};
    empirical_cdf C{{0.1, 0.9, 1.1, 2.4}};
    const double ab = levy_distance(A, make_view(B)).value;
    const double ba = levy_distance(B, make_view(A)).value;
    const double bc = levy_distance(B, make_view(C)).value;
    const double ac = levy_distance(A, make_view(C)).value;
    CHECK(std::fabs(ab - ba) <= 2e-6);
    CHECK(ac <= ab + bc + 3e-6);
}

TEST_CASE("Levy is bounded by Kolmogorov-Smirnov") {
    empirical_cdf F{{0.1, 0.2, 0.7, 1.4, 2.2}};
    const mp_cdf cdf(make_mp_law(0.5));
    const cdf_view view = make_view(cdf);
    const double l = levy_distance(F, view).value;
    const double k = ks_distance(F, view).value;
    CHECK(l <= k + 2e-6);
    CHECK(k <= 1.0);
    CHECK(l >= 0.0);
}

TEST_CASE("KS of a point mass at the median is one half") {
    const mp_cdf cdf(make_mp_law(1.0));
    empirical_cdf F{{0.652775941633570}};
    const distance_result r = ks_distance(F, make_view(cdf));
    CHECK(std::fabs(r.value - 0.5) <= 1e-6);
}

TEST_CASE("bisection tolerance narrows the reported enclosure") {
    empirical_cdf F{{0.0, 1.0, 2.0}};
    empirical_cdf G{{0.15, 1.2, 2.05}};
    const distance_result coarse = levy_distance(F, make_view(G), 1e-3);
    const distance_result fine = levy_distance(F, make_view(G), 1e-8);
    CHECK(coarse.tolerance <= 1e-3);
    CHECK(fine.tolerance <= 1e-8);
    CHECK(std::fabs(coarse.value - fine.value) <= coarse.tolerance + fine.tolerance);
}

TEST_CASE("a non-monotone comparison function is rejected") {
    empirical_cdf F{{0.0, 1.0}};
    cdf_view bad;
    bad.value = [](double x) { return -x; };
    bad.left_value = bad.value;
    CHECK_THROWS_AS(levy_distance(F, bad), config_error);
}

TEST_CASE("moment gaps against the limit and the finite-size prediction") {
    moment_vector sample;
    sample.k_max = 2;
    sample.values = {1.0, 1.5};
    const std::vector<moment_gap_entry> plain = moment_gap(sample, 0.5);
    REQUIRE(plain.size() == 2);
    CHECK(plain[0].k == 1);
    CHECK(plain[0].gap_mp == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(plain[1].gap_mp == doctest::Approx(0.0).epsilon(1e-15));
    CHECK_FALSE(plain[0].has_tree);

    const dimension_triple dims{50, 10, 10};
    const std::vector<moment_gap_entry> with_tree = moment_gap(sample, 0.5, dims);
    CHECK(with_tree[1].has_tree);
    const double tree2 = finite_n_tree_moment(2, 50, 10, 10, 1.0, 1.0);
    CHECK(with_tree[1].gap_tree == doctest::Approx(std::fabs(1.5 - tree2)).epsilon(1e-12));
}

}
