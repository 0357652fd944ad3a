// Times the blocked OpenMP covariance kernel against the scalar reference and
// reports the largest entrywise relative difference (contract: <= 1e-13).
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "hadacov/ensembles.hpp"
#include "hadacov/rng.hpp"

namespace {

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

double max_rel_diff(const hadacov::symmetric_matrix& A, const hadacov::symmetric_matrix& B) {
    double worst = 0.0;
    for (std::size_t i = 0; i < A.entries.size(); ++i) {
        const double denom = std::max(1.0, std::fabs(A.entries[i]));
        worst = std::max(worst, std::fabs(A.entries[i] - B.entries[i]) / denom);
    }
    return worst;
}

}  // namespace

int main(int argc, char** argv) {
    std::size_t n = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 1024;
    std::size_t d = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : n / 2;
    std::size_t p = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : n;
    const int reps = argc > 4 ? std::atoi(argv[4]) : 3;

    hadacov::ensemble_spec spec;
    hadacov::random_matrix X = hadacov::sample_matrix(spec.dist_x, n, d, 11u);
    hadacov::random_matrix Y = hadacov::sample_matrix(spec.dist_y, n, p, 12u);

    std::printf("n=%zu d=%zu p=%zu reps=%d\n", n, d, p, reps);
    const double flops = 2.0 * static_cast<double>(n) * static_cast<double>(n) *
                         (static_cast<double>(d) + static_cast<double>(p)) / 2.0;

    hadacov::symmetric_matrix blocked, serial;
    double best_blocked = 1e300, best_serial = 1e300;
    for (int r = 0; r < reps; ++r) {
        double t0 = now_seconds();
        blocked = hadacov::hadamard_covariance(X, Y, spec);
        best_blocked = std::min(best_blocked, now_seconds() - t0);

        t0 = now_seconds();
        serial = hadacov::hadamard_covariance_serial(X, Y, spec);
        best_serial = std::min(best_serial, now_seconds() - t0);
    }

    std::printf("blocked  %8.3f ms   %6.2f GFLOP/s\n", 1e3 * best_blocked,
                flops / best_blocked / 1e9);
    std::printf("serial   %8.3f ms   %6.2f GFLOP/s\n", 1e3 * best_serial,
                flops / best_serial / 1e9);
    std::printf("speedup  %.2fx\n", best_serial / best_blocked);
    const double diff = max_rel_diff(blocked, serial);
    std::printf("max rel diff %.3e %s\n", diff, diff <= 1e-13 ? "(ok)" : "(FAIL)");
    return diff <= 1e-13 ? 0 : 1;
}
