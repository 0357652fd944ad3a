#pragma once

#include <functional>
#include <string>

#include "hadacov/mp_law.hpp"
#include "hadacov/spectra.hpp"

namespace hadacov {

struct distance_result {
    double value = 0.0;
    double tolerance = 0.0;  // certified enclosure half-width
    std::string method;
};

// Evaluator for the comparison distribution G. value is the (right-continuous)
// point value; left_value the left limit. They coincide for continuous G; the
// step adapter distinguishes them, which is what makes an exact 0 possible for
// identical step functions.
struct cdf_view {
    std::function<double(double)> value;
    std::function<double(double)> left_value;
};

cdf_view make_view(const mp_cdf& cdf);
cdf_view make_view(const empirical_cdf& F);  // step-G adapter

// Levy distance L(F,G) = inf{eps > 0: G(x-eps)-eps <= F(x) <= G(x+eps)+eps}
// by bisection over eps in [0,1]. Feasibility of a candidate eps is decided at
// the n jump points of F alone:
//
//   (i)  i/n <= G(x_i + eps) + eps            for i = 1..n
//   (ii) G_left(x_i - eps) - eps <= (i-1)/n   for i = 1..n
//
// Sufficiency and necessity: F is the right-continuous step with F = i/n on
// [x_i, x_{i+1}). The upper inequality F(x) <= G(x+eps)+eps over that interval
// is hardest at x = x_i because G is nondecreasing, which is exactly (i). The
// lower inequality G(x-eps)-eps <= F(x) over [x_{i-1}, x_i) (where F = (i-1)/n,
// including the region below x_1 where F = 0) is hardest as x -> x_i from the
// left, where G(x-eps) -> G_left(x_i - eps), which is exactly (ii); above x_n
// it holds trivially since F = 1 there. Feasibility is monotone in eps, so
// bisection brackets the infimum.
distance_result levy_distance(const empirical_cdf& F, const cdf_view& G,
                              double tol = 1e-6);

// Kolmogorov-Smirnov sup|F - G| over the jump points, exact for continuous G.
distance_result ks_distance(const empirical_cdf& F, const cdf_view& G);

struct moment_gap_entry {
    int k = 0;
    double gap_mp = 0.0;
    bool has_tree = false;
    double gap_tree = 0.0;
};

// gap_k = |m_hat_k - mp_moment(k, gamma)|; when dims are supplied, also the
// gap against the finite-size tree prediction at unit variances.
std::vector<moment_gap_entry> moment_gap(const moment_vector& sample_moments,
                                         double gamma);
std::vector<moment_gap_entry> moment_gap(const moment_vector& sample_moments,
                                         double gamma, const dimension_triple& dims);

}
