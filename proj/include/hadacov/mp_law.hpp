#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace hadacov {

// Marchenko-Pastur law of shape gamma: continuous density
// sqrt((b-x)(x-a))/(2 pi gamma x) on [a,b], plus an atom of mass 1-1/gamma at
// 0 when gamma > 1. The atom is stored separately from the density.
struct mp_law {
    double gamma;
    double edge_low;    // a = (1-sqrt(gamma))^2
    double edge_high;   // b = (1+sqrt(gamma))^2
    double atom_mass;   // max(0, 1-1/gamma)
};

mp_law make_mp_law(double gamma);

// Continuous density only; 0 at and outside the edges; the atom is not part
// of the density value.
double density(double x, const mp_law& law);

// CDF evaluator. The integral uses the substitution x = a + (b-a) sin^2(theta),
// which removes both square-root endpoint singularities, then a composite
// 8-point Gauss-Legendre rule on equal theta-panels with stored prefix sums.
// Construction self-checks against a panel-doubled evaluation and the total
// mass identity; failure to meet the 1e-10 error contract throws.
class mp_cdf {
public:
    explicit mp_cdf(const mp_law& law);

    double operator()(double x) const;  // atom included for x >= 0
    const mp_law& law() const { return law_; }

    // Continuous-part quadrature moment int x^k density(x) dx using the same
    // panel scheme (the atom contributes 0 to every k >= 1 moment).
    double quadrature_moment(int k) const;

private:
    static constexpr std::size_t panels = 512;
    mp_law law_;
    std::vector<double> prefix_;  // prefix_[j] = integral over theta in [0, j h]

    double integrate_prefix(std::size_t count, int weight_power) const;
    double partial(double theta_lo, double theta_hi, int weight_power) const;
};

// Monotone bisection inverse of the cdf, tolerance 1e-8 in x. Returns 0 for
// q <= atom_mass when gamma > 1. Requires q strictly inside (0,1).
double quantile(double q, const mp_cdf& cdf);

// Limit moment m_k = sum_{s=0}^{k-1} gamma^s/(s+1) C(k-1,s) C(k,s).
// Exact integer Narayana coefficients, long double accumulation; k <= 30.
double mp_moment(int k, double gamma);

// Finite-size tree-level prediction
//   sum_s [n(n-1)...(n-s)] [d...(d-k+s+1)] [p...(p-k+s+1)] / (n d^k p^k)
//        * sigma_x^{2k} sigma_y^{2k} * N(k, s+1)
// with terms dropped when s+1 > n, k-s > d, or k-s > p.
double finite_n_tree_moment(int k, std::size_t n, std::size_t d, std::size_t p,
                            double sigma_x, double sigma_y);

// Stieltjes transform m(z) = (1 - gamma - z + sqrt((z-1-gamma)^2 - 4 gamma))
// / (2 gamma z) for Im z > 0. Branch rule: of the two candidate roots, the one
// with positive imaginary part is returned (exactly one is Herglotz off the
// real line); no principal-branch sign tracking.
std::complex<double> stieltjes(std::complex<double> z, double gamma);

struct moment_vector {
    int k_max = 0;
    std::vector<double> values;  // values[k-1] = m_k
};

moment_vector mp_moments(int k_max, double gamma);

}
