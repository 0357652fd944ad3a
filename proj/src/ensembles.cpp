#include "hadacov/ensembles.hpp"

#include <cmath>
#include <string>

#include "hadacov/errors.hpp"
#include "hadacov/kernels.hpp"

namespace hadacov {

void ensemble_spec::validate() const {
    dist_x.validate();
    dist_y.validate();
    if (truncation_c && !(*truncation_c > 0.0))
        throw config_error("truncation level c must be positive");
}

std::string ensemble_spec::summary() const {
    std::string s = "X: " + dist_x.summary() + "; Y: " + dist_y.summary();
    s += normalize ? "; normalized" : "; unnormalized";
    if (truncation_c) s += "; c=" + std::to_string(*truncation_c);
    return s;
}

random_matrix sample_matrix(const entry_distribution& dist,
                            std::size_t rows, std::size_t cols,
                            std::uint64_t seed) {
    if (rows < 1 || cols < 1) throw config_error("matrix dimensions must be >= 1");
    dist.validate();
    random_matrix m;
    m.rows = rows;
    m.cols = cols;
    m.generator_seed = seed;
    m.entries.resize(rows * cols);
    splitmix64 stream(seed);
    for (double& e : m.entries) e = sample_entry(dist, stream);
    return m;
}

namespace {

symmetric_matrix build_covariance(const random_matrix& X, const random_matrix& Y,
                                  const ensemble_spec& spec, bool blocked) {
    if (X.rows != Y.rows)
        throw config_error("X and Y must have the same number of rows (got " +
                           std::to_string(X.rows) + " and " + std::to_string(Y.rows) + ")");
    spec.validate();
    const std::size_t n = X.rows;
    double inv_sigma2 = 1.0;
    if (spec.normalize) {
        double sx2 = spec.dist_x.scale * spec.dist_x.scale;
        double sy2 = spec.dist_y.scale * spec.dist_y.scale;
        inv_sigma2 = 1.0 / (sx2 * sy2);
    }
    symmetric_matrix M;
    M.order = n;
    M.entries.resize(n * n);
    auto kernel = blocked ? kernels::gram_hadamard_blocked : kernels::gram_hadamard_serial;
    kernel(X.entries.data(), Y.entries.data(), n, X.cols, Y.cols, inv_sigma2,
           M.entries.data());
    return M;
}

}  // namespace

symmetric_matrix hadamard_covariance(const random_matrix& X, const random_matrix& Y,
                                     const ensemble_spec& spec) {
    return build_covariance(X, Y, spec, true);
}

symmetric_matrix hadamard_covariance_serial(const random_matrix& X, const random_matrix& Y,
                                            const ensemble_spec& spec) {
    return build_covariance(X, Y, spec, false);
}

random_matrix truncate_center(const random_matrix& X, double c,
                              const entry_distribution& dist) {
    double mean = truncated_mean(dist, c);  // validates c; 0 for the catalog
    random_matrix out = X;
    for (double& e : out.entries) {
        double kept = (std::fabs(e) <= c) ? e : 0.0;
        e = kept - mean;
    }
    return out;
}

dimension_schedule make_dimension_schedule(double gamma, double a,
                                           const std::vector<std::size_t>& n_values) {
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw config_error("gamma must be a positive finite real");
    if (!(a > 0.0) || !std::isfinite(a))
        throw config_error("a must be a positive finite real");
    dimension_schedule sched;
    sched.target_gamma = gamma;
    sched.target_a = a;
    for (std::size_t n : n_values) {
        if (n < 4) throw config_error("every n in the schedule must be >= 4");
        long long d = std::llround(std::sqrt(static_cast<double>(n) / (gamma * a)));
        long long p = std::llround(a * static_cast<double>(d));
        if (d < 1 || p < 1)
            throw config_error("dimension schedule produced d or p of 0 at n=" +
                               std::to_string(n) +
                               " (gamma*a too large for this n; increase n or shrink the ratios)");
        sched.triples.push_back({n, static_cast<std::size_t>(d), static_cast<std::size_t>(p)});
    }
    return sched;
}

}
