#include "hadacov/distributions.hpp"

#include <cmath>

#include "hadacov/errors.hpp"

namespace hadacov {

const char* family_name(entry_family f) {
    switch (f) {
        case entry_family::gaussian: return "gaussian";
        case entry_family::rademacher: return "rademacher";
        case entry_family::uniform: return "uniform";
        case entry_family::student_t: return "student_t";
    }
    return "?";
}

entry_family family_from_name(const std::string& name) {
    if (name == "gaussian") return entry_family::gaussian;
    if (name == "rademacher") return entry_family::rademacher;
    if (name == "uniform") return entry_family::uniform;
    if (name == "student_t" || name == "student-t") return entry_family::student_t;
    throw config_error("unknown entry distribution: " + name);
}

void entry_distribution::validate() const {
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw config_error("entry distribution scale must be a positive finite real");
    if (family == entry_family::student_t) {
        if (!(nu > 2.0))
            throw config_error("student_t requires nu > 2 (variance must exist)");
        if (nu <= 4.0 && !allow_heavy_tails)
            throw config_error(
                "student_t with nu <= 4 has an infinite fourth moment; "
                "pass the allow-infinite-fourth-moment flag to explore it anyway");
    }
}

std::string entry_distribution::summary() const {
    std::string s = family_name(family);
    if (family == entry_family::student_t) s += "(nu=" + std::to_string(nu) + ")";
    s += " scale=" + std::to_string(scale);
    return s;
}

namespace {

double sample_gaussian(splitmix64& g) {
    // Box-Muller, cosine branch only: exactly two uniforms per draw.
    double u1 = g.next_unit();
    double u2 = g.next_unit();
    double r = std::sqrt(-2.0 * std::log(u1));
    return r * std::cos(2.0 * M_PI * u2);
}

double sample_student_t(double nu, splitmix64& g) {
    // Bailey's polar method; standardized below so the variance is 1.
    for (;;) {
        double u = 2.0 * g.next_unit() - 1.0;
        double v = 2.0 * g.next_unit() - 1.0;
        double w = u * u + v * v;
        if (w > 1.0 || w == 0.0) continue;
        double t = u * std::sqrt(nu * (std::pow(w, -2.0 / nu) - 1.0) / w);
        return t * std::sqrt((nu - 2.0) / nu);
    }
}

}  // namespace

double sample_entry(const entry_distribution& dist, splitmix64& stream) {
    switch (dist.family) {
        case entry_family::gaussian:
            return dist.scale * sample_gaussian(stream);
        case entry_family::rademacher:
            return (stream.next() >> 63) ? dist.scale : -dist.scale;
        case entry_family::uniform:
            // Uniform on [-sqrt(3) s, sqrt(3) s]: variance s^2.
            return dist.scale * std::sqrt(3.0) * (2.0 * stream.next_unit() - 1.0);
        case entry_family::student_t:
            return dist.scale * sample_student_t(dist.nu, stream);
    }
    return 0.0;
}

double truncated_mean(const entry_distribution& dist, double c) {
    if (!(c > 0.0)) throw config_error("truncation level c must be positive");
    (void)dist;
    // x 1{|x| <= c} is an odd function of a symmetric variable.
    return 0.0;
}

}
