#include "hadacov/mp_law.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hadacov/errors.hpp"

namespace hadacov {

mp_law make_mp_law(double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw config_error("MP shape gamma must be a positive finite real");
    double sq = std::sqrt(gamma);
    return {gamma, (1.0 - sq) * (1.0 - sq), (1.0 + sq) * (1.0 + sq),
            std::max(0.0, 1.0 - 1.0 / gamma)};
}

double density(double x, const mp_law& law) {
    if (!(x > law.edge_low) || !(x < law.edge_high)) return 0.0;
    return std::sqrt((law.edge_high - x) * (x - law.edge_low)) /
           (2.0 * M_PI * law.gamma * x);
}

namespace {

// 8-point Gauss-Legendre nodes (positive half) and weights on [-1, 1].
constexpr double gl_x[4] = {0.18343464249564980494, 0.52553240991632898582,
                            0.79666647741362673959, 0.96028985649753623168};
constexpr double gl_w[4] = {0.36268378337836198297, 0.31370664587788728734,
                            0.22238103445337447054, 0.10122853629037625915};

}  // namespace

// density(x(theta)) dx/dtheta with x = a + (b-a) sin^2(theta):
//   sqrt((b-x)(x-a)) = (b-a) sin cos,  dx = 2 (b-a) sin cos dtheta.
// Smooth on [0, pi/2]; the optional weight x^w serves quadrature moments.
double mp_cdf::partial(double theta_lo, double theta_hi, int weight_power) const {
    const double A = law_.edge_low, B = law_.edge_high;
    const double mid = 0.5 * (theta_lo + theta_hi);
    const double half = 0.5 * (theta_hi - theta_lo);
    double sum = 0.0;
    for (int s = -1; s <= 1; s += 2)
        for (int i = 0; i < 4; ++i) {
            double t = mid + s * half * gl_x[i];
            double sn = std::sin(t), cs = std::cos(t);
            double x = A + (B - A) * sn * sn;
            double g = 2.0 * (B - A) * (B - A) * sn * sn * cs * cs /
                       (2.0 * M_PI * law_.gamma * std::max(x, 1e-300));
            double wgt = 1.0;
            for (int q = 0; q < weight_power; ++q) wgt *= x;
            sum += gl_w[i] * g * wgt;
        }
    return half * sum;
}

double mp_cdf::integrate_prefix(std::size_t count, int weight_power) const {
    const double h = (M_PI / 2.0) / static_cast<double>(count);
    double total = 0.0;
    for (std::size_t j = 0; j < count; ++j)
        total += partial(j * h, (j + 1) * h, weight_power);
    return total;
}

mp_cdf::mp_cdf(const mp_law& law) : law_(law) {
    const double h = (M_PI / 2.0) / static_cast<double>(panels);
    prefix_.resize(panels + 1);
    prefix_[0] = 0.0;
    for (std::size_t j = 0; j < panels; ++j)
        prefix_[j + 1] = prefix_[j] + partial(j * h, (j + 1) * h, 0);

    // Error contract 1e-10: compare against a panel-doubled pass and the
    // exact continuous mass 1 - atom_mass.
    double doubled = 0.0;
    {
        const double h2 = h / 2.0;
        for (std::size_t j = 0; j < 2 * panels; ++j)
            doubled += partial(j * h2, (j + 1) * h2, 0);
    }
    double total = prefix_[panels];
    double mass = 1.0 - law_.atom_mass;
    if (std::fabs(total - doubled) > 1e-11 || std::fabs(total - mass) > 1e-10)
        throw numerical_error(
            "MP cdf quadrature failed its error contract: total=" + std::to_string(total) +
            " doubled=" + std::to_string(doubled) + " expected-mass=" + std::to_string(mass));
}

double mp_cdf::operator()(double x) const {
    if (x < 0.0) return 0.0;
    double v = law_.atom_mass;
    if (x > law_.edge_low) {
        if (x >= law_.edge_high) {
            v += prefix_[panels];
        } else {
            const double A = law_.edge_low, B = law_.edge_high;
            const double h = (M_PI / 2.0) / static_cast<double>(panels);
            double arg = std::clamp((x - A) / (B - A), 0.0, 1.0);
            double theta = std::asin(std::sqrt(arg));
            std::size_t idx = std::min(static_cast<std::size_t>(theta / h),
                                       panels - 1);
            v += prefix_[idx] + partial(idx * h, theta, 0);
        }
    }
    return std::clamp(v, 0.0, 1.0);
}

double mp_cdf::quadrature_moment(int k) const {
    if (k < 1) throw config_error("quadrature moment requires k >= 1");
    return integrate_prefix(panels, k);
}

double quantile(double q, const mp_cdf& cdf) {
    if (!(q > 0.0) || !(q < 1.0))
        throw config_error("quantile requires q strictly inside (0,1)");
    const mp_law& law = cdf.law();
    if (q <= law.atom_mass) return 0.0;
    double lo = law.edge_low, hi = law.edge_high;
    for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        if (cdf(mid) < q) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

// Exact C(n, r) for n <= 30 (fits comfortably in 64 bits).
unsigned long long binom(int n, int r) {
    if (r < 0 || r > n) return 0;
    r = std::min(r, n - r);
    unsigned long long v = 1;
    for (int i = 1; i <= r; ++i) {
        v = v * static_cast<unsigned long long>(n - r + i) /
            static_cast<unsigned long long>(i);
    }
    return v;
}

// Narayana N(k, s+1) = C(k-1,s) C(k,s) / (s+1); the division is exact.
unsigned long long narayana(int k, int s) {
    return binom(k - 1, s) * binom(k, s) / static_cast<unsigned long long>(s + 1);
}

void check_k_range(int k) {
    if (k < 1 || k > 30)
        throw config_error("moment order k must be in [1, 30] (integer overflow guard)");
}

}  // namespace

double mp_moment(int k, double gamma) {
    check_k_range(k);
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw config_error("gamma must be a positive finite real");
    long double sum = 0.0L;
    long double gpow = 1.0L;
    for (int s = 0; s <= k - 1; ++s) {
        sum += static_cast<long double>(narayana(k, s)) * gpow;
        gpow *= gamma;
    }
    return static_cast<double>(sum);
}

double finite_n_tree_moment(int k, std::size_t n, std::size_t d, std::size_t p,
                            double sigma_x, double sigma_y) {
    check_k_range(k);
    if (n < 1 || d < 1 || p < 1) throw config_error("dimensions must be >= 1");
    long double sum = 0.0L;
    for (int s = 0; s <= k - 1; ++s) {
        std::size_t rows = static_cast<std::size_t>(s) + 1;  // distinct row vertices
        std::size_t cols = static_cast<std::size_t>(k - s);  // distinct column vertices
        if (rows > n || cols > d || cols > p) continue;      // falling factorial hits 0
        long double f = static_cast<long double>(narayana(k, s));
        for (std::size_t t = 0; t < rows; ++t) f *= static_cast<long double>(n - t);
        f /= static_cast<long double>(n);
        for (std::size_t t = 0; t < cols; ++t) f *= static_cast<long double>(d - t);
        for (std::size_t t = 0; t < cols; ++t) f *= static_cast<long double>(p - t);
        for (int t = 0; t < k; ++t) f /= static_cast<long double>(d);
        for (int t = 0; t < k; ++t) f /= static_cast<long double>(p);
        sum += f;
    }
    long double sig = std::pow(static_cast<long double>(sigma_x), 2 * k) *
                      std::pow(static_cast<long double>(sigma_y), 2 * k);
    return static_cast<double>(sum * sig);
}

std::complex<double> stieltjes(std::complex<double> z, double gamma) {
    if (!(z.imag() > 0.0))
        throw config_error("stieltjes transform requires Im z > 0");
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw config_error("gamma must be a positive finite real");
    std::complex<double> w = z - (1.0 + gamma);
    std::complex<double> r = std::sqrt(w * w - 4.0 * gamma);
    std::complex<double> base = 1.0 - gamma - z;
    std::complex<double> m_plus = (base + r) / (2.0 * gamma * z);
    std::complex<double> m_minus = (base - r) / (2.0 * gamma * z);
    // Exactly one candidate is Herglotz for Im z > 0.
    return (m_plus.imag() >= m_minus.imag()) ? m_plus : m_minus;
}

moment_vector mp_moments(int k_max, double gamma) {
    check_k_range(k_max);
    moment_vector mv;
    mv.k_max = k_max;
    mv.values.reserve(k_max);
    for (int k = 1; k <= k_max; ++k) mv.values.push_back(mp_moment(k, gamma));
    return mv;
}

}
