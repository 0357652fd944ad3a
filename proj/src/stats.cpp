#include "hadacov/stats.hpp"

#include <cmath>

#include "hadacov/errors.hpp"

namespace hadacov {

double kahan_mean(const std::vector<double>& xs) {
    if (xs.empty()) throw config_error("mean of an empty sample");
    double sum = 0.0, comp = 0.0;
    for (double x : xs) {
        double y = x - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum / static_cast<double>(xs.size());
}

double sample_variance(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    double m = kahan_mean(xs);
    double sum = 0.0, comp = 0.0;
    for (double x : xs) {
        double dev = (x - m) * (x - m);
        double y = dev - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum / static_cast<double>(xs.size() - 1);
}

ols_fit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 3)
        throw config_error("line fit needs >= 3 matched points");
    const std::size_t m = x.size();
    double xbar = kahan_mean(x), ybar = kahan_mean(y);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (x[i] - xbar) * (x[i] - xbar);
        sxy += (x[i] - xbar) * (y[i] - ybar);
    }
    if (sxx == 0.0) throw config_error("line fit with degenerate x values");
    ols_fit f;
    f.points = m;
    f.slope = sxy / sxx;
    f.intercept = ybar - f.slope * xbar;
    double rss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double r = y[i] - (f.intercept + f.slope * x[i]);
        rss += r * r;
    }
    double s2 = rss / static_cast<double>(m - 2);
    f.slope_stderr = std::sqrt(s2 / sxx);
    f.intercept_stderr = std::sqrt(s2 * (1.0 / static_cast<double>(m) + xbar * xbar / sxx));
    return f;
}

}
