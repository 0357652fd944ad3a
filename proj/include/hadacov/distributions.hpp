#pragma once

#include <string>

#include "hadacov/rng.hpp"

namespace hadacov {

enum class entry_family { gaussian, rademacher, uniform, student_t };

const char* family_name(entry_family f);
entry_family family_from_name(const std::string& name);

// Entry distribution of a matrix ensemble. All families are symmetric about 0
// and standardized so the entry standard deviation equals `scale` exactly.
// student_t demands nu > 4 (finite fourth moment) unless allow_heavy_tails is
// set, in which case 2 < nu <= 4 is admitted for exploration; nu <= 2 is always
// rejected because scale would be meaningless without a variance.
struct entry_distribution {
    entry_family family = entry_family::gaussian;
    double scale = 1.0;
    double nu = 0.0;
    bool allow_heavy_tails = false;

    void validate() const;  // throws config_error
    std::string summary() const;
};

// One entry drawn from `dist` using the given stream. Consumes a
// deterministic, platform-independent number of raw uniforms per call
// (variable for student_t's rejection loop, but a pure function of the
// stream state).
double sample_entry(const entry_distribution& dist, splitmix64& stream);

// Population truncated mean E[X 1{|X| <= c}]. Every catalog family is
// symmetric about 0, so this is exactly 0; kept as a named function because
// the truncation map is defined against the population quantity, never a
// sample mean.
double truncated_mean(const entry_distribution& dist, double c);

}
