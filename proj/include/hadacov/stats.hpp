#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace hadacov {

double kahan_mean(const std::vector<double>& xs);

// Unbiased (n-1) sample variance, two-pass around the Kahan mean. The study
// aggregators use exactly this, so they match a naive reference by
// construction.
double sample_variance(const std::vector<double>& xs);

inline double standard_error(double variance, std::size_t trials) {
    return trials > 0 ? std::sqrt(variance / static_cast<double>(trials)) : 0.0;
}

struct ols_fit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double intercept_stderr = 0.0;
    std::size_t points = 0;
};

// Least squares y = intercept + slope x with classical standard errors
// (residual variance on n-2 degrees of freedom).
ols_fit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}
