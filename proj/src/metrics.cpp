#include "hadacov/metrics.hpp"

#include <cmath>

#include "hadacov/errors.hpp"

namespace hadacov {

cdf_view make_view(const mp_cdf& cdf) {
    auto f = [&cdf](double x) { return cdf(x); };
    return {f, f};  // continuous: point value and left limit coincide
}

cdf_view make_view(const empirical_cdf& F) {
    return {[&F](double x) { return F(x); },
            [&F](double x) { return F.left_value(x); }};
}

namespace {

void check_inputs(const empirical_cdf& F, const cdf_view& G) {
    if (F.points.empty()) throw config_error("empty empirical CDF");
    if (!G.value || !G.left_value) throw config_error("incomplete CDF view");
    // light monotonicity screen over the data range
    double lo = F.points.front() - 1.0, hi = F.points.back() + 1.0;
    double prev = G.value(lo);
    for (int i = 1; i <= 64; ++i) {
        double x = lo + (hi - lo) * i / 64.0;
        double v = G.value(x);
        if (v < prev - 1e-12)
            throw config_error("comparison CDF is not monotone nondecreasing");
        prev = v;
    }
}

bool feasible(const empirical_cdf& F, const cdf_view& G, double eps) {
    const std::size_t n = F.points.size();
    const double dn = static_cast<double>(n);
    for (std::size_t i = 1; i <= n; ++i) {
        double x = F.points[i - 1];
        if (static_cast<double>(i) / dn > G.value(x + eps) + eps + 1e-15) return false;
        if (G.left_value(x - eps) - eps > static_cast<double>(i - 1) / dn + 1e-15) return false;
    }
    return true;
}

}  // namespace

distance_result levy_distance(const empirical_cdf& F, const cdf_view& G, double tol) {
    if (!(tol > 0.0)) throw config_error("levy tolerance must be positive");
    check_inputs(F, G);
    if (feasible(F, G, 0.0)) return {0.0, 0.0, "levy-bisection"};
    double lo = 0.0, hi = 1.0;  // eps = 1 is always feasible for CDFs
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (feasible(F, G, mid)) hi = mid;
        else lo = mid;
    }
    return {hi, hi - lo, "levy-bisection"};
}

distance_result ks_distance(const empirical_cdf& F, const cdf_view& G) {
    check_inputs(F, G);
    const std::size_t n = F.points.size();
    const double dn = static_cast<double>(n);
    double sup = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        double g = G.value(F.points[i - 1]);
        sup = std::max(sup, std::fabs(static_cast<double>(i) / dn - g));
        sup = std::max(sup, std::fabs(static_cast<double>(i - 1) / dn - g));
    }
    return {sup, 0.0, "ks-jumps"};
}

std::vector<moment_gap_entry> moment_gap(const moment_vector& m, double gamma) {
    std::vector<moment_gap_entry> out;
    for (int k = 1; k <= m.k_max; ++k)
        out.push_back({k, std::fabs(m.values[k - 1] - mp_moment(k, gamma)), false, 0.0});
    return out;
}

std::vector<moment_gap_entry> moment_gap(const moment_vector& m, double gamma,
                                         const dimension_triple& dims) {
    auto out = moment_gap(m, gamma);
    for (auto& e : out) {
        e.has_tree = true;
        e.gap_tree = std::fabs(m.values[e.k - 1] -
                               finite_n_tree_moment(e.k, dims.n, dims.d, dims.p, 1.0, 1.0));
    }
    return out;
}

}
