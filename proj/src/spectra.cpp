#include "hadacov/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <lapacke.h>

#include "hadacov/errors.hpp"
#include "hadacov/mp_law.hpp"

extern "C" void openblas_set_num_threads(int);

namespace hadacov {

namespace {

void check_finite(const symmetric_matrix& M) {
    for (double v : M.entries)
        if (!std::isfinite(v))
            throw numerical_error("matrix contains a non-finite entry");
}

// dsyevd destroys its input and a symmetric full buffer reads the same in
// either storage order, so the row-major entries go in as column-major.
std::vector<double> dsyevd(const symmetric_matrix& M, char jobz,
                           std::vector<double>& vectors_out) {
    const lapack_int n = static_cast<lapack_int>(M.order);
    std::vector<double> buf = M.entries;
    std::vector<double> w(M.order);
    openblas_set_num_threads(1);
    lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, jobz, 'U', n, buf.data(), n, w.data());
    if (info != 0)
        throw numerical_error("dsyevd failed (info=" + std::to_string(info) + ")");
    if (jobz == 'V') vectors_out = std::move(buf);
    return w;
}

double frobenius(const symmetric_matrix& M) {
    double s = 0.0;
    for (double v : M.entries) s += v * v;
    return std::sqrt(s);
}

}  // namespace

spectral_sample eigenvalues(const symmetric_matrix& M) {
    check_finite(M);
    std::vector<double> unused;
    spectral_sample s;
    s.eigenvalues = dsyevd(M, 'N', unused);
    return s;
}

spectral_sample eigenvalues_validated(const symmetric_matrix& M) {
    check_finite(M);
    const std::size_t n = M.order;
    std::vector<double> V;  // column-major eigenvectors
    spectral_sample s;
    s.eigenvalues = dsyevd(M, 'V', V);
    const double bound = 1e-8 * frobenius(M);
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double* v = V.data() + i * n;
        double norm2 = 0.0;
        for (std::size_t row = 0; row < n; ++row) {
            double acc = 0.0;
            for (std::size_t col = 0; col < n; ++col) acc += M.entries[row * n + col] * v[col];
            double res = acc - s.eigenvalues[i] * v[row];
            norm2 += res * res;
        }
        if (std::sqrt(norm2) > bound)
            throw numerical_error("eigenpair " + std::to_string(i) +
                                  " violates the residual contract: ||Mv - lv|| = " +
                                  std::to_string(std::sqrt(norm2)) + " > " + std::to_string(bound));
    }
    return s;
}

double empirical_moment(const spectral_sample& sample, int k) {
    if (k < 1) throw config_error("empirical moment requires k >= 1");
    if (sample.eigenvalues.empty()) throw config_error("empty spectrum");
    double sum = 0.0, comp = 0.0;  // Kahan
    for (double lam : sample.eigenvalues) {
        double term = 1.0;
        for (int q = 0; q < k; ++q) term *= lam;
        double y = term - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum / static_cast<double>(sample.eigenvalues.size());
}

double empirical_cdf::operator()(double x) const {
    auto it = std::upper_bound(points.begin(), points.end(), x);
    return static_cast<double>(it - points.begin()) / static_cast<double>(points.size());
}

double empirical_cdf::left_value(double x) const {
    auto it = std::lower_bound(points.begin(), points.end(), x);
    return static_cast<double>(it - points.begin()) / static_cast<double>(points.size());
}

empirical_cdf make_empirical_cdf(const spectral_sample& sample) {
    if (sample.eigenvalues.empty()) throw config_error("empty spectrum");
    empirical_cdf F;
    F.points = sample.eigenvalues;  // already ascending
    return F;
}

double histogram::density(std::size_t bin) const {
    double width = edges[bin + 1] - edges[bin];
    return static_cast<double>(counts[bin]) / (static_cast<double>(total) * width);
}

histogram make_histogram(const spectral_sample& sample, int bins,
                         std::optional<std::pair<double, double>> range) {
    if (bins < 1) throw config_error("histogram needs bins >= 1");
    if (sample.eigenvalues.empty()) throw config_error("empty spectrum");
    double lo, hi;
    if (range) {
        lo = range->first;
        hi = range->second;
        if (!(lo < hi)) throw config_error("histogram range must satisfy lo < hi");
    } else if (sample.dims.n && sample.dims.d && sample.dims.p) {
        mp_law law = make_mp_law(sample.dims.realized_gamma());
        double pad = 0.05 * (law.edge_high - law.edge_low);
        lo = std::min(law.edge_low - pad, sample.eigenvalues.front());
        hi = std::max(law.edge_high + pad, sample.eigenvalues.back());
    } else {
        // no provenance: data range, widened so equal points still get a bin
        lo = sample.eigenvalues.front();
        hi = sample.eigenvalues.back();
        double pad = (hi == lo) ? 0.5 : 0.05 * (hi - lo);
        lo -= pad;
        hi += pad;
    }
    histogram h;
    h.total = sample.eigenvalues.size();
    h.edges.resize(bins + 1);
    for (int j = 0; j <= bins; ++j)
        h.edges[j] = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(bins);
    h.counts.assign(bins, 0);
    for (double x : sample.eigenvalues) {
        if (x < lo) { ++h.underflow; continue; }
        if (x > hi) { ++h.overflow; continue; }
        auto idx = static_cast<std::int64_t>((x - lo) / (hi - lo) * bins);
        idx = std::clamp<std::int64_t>(idx, 0, bins - 1);
        // float rounding can land one bin off at an edge; nudge to the bin
        // whose half-open interval actually contains x
        while (idx > 0 && x < h.edges[idx]) --idx;
        while (idx < bins - 1 && x >= h.edges[idx + 1]) ++idx;
        ++h.counts[idx];
    }
    return h;
}

}
