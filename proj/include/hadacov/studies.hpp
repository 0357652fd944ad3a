#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hadacov/ensembles.hpp"
#include "hadacov/io.hpp"

namespace hadacov {

enum class study_kind { simulate, moments, variance, truncation, convergence, oracle, mp_eval };
enum class output_format { csv, json };
enum class truncation_target { x_only, both };

const char* study_name(study_kind k);
const char* format_name(output_format f);
const char* target_name(truncation_target t);

struct study_config {
    study_kind kind = study_kind::simulate;
    ensemble_spec spec;
    double gamma = 0.5;
    double a = 2.0;
    std::vector<std::size_t> n_values;
    std::optional<dimension_triple> explicit_dims;
    int trials = 1;
    int k_max = 3;
    std::vector<double> c_values;
    std::uint64_t master_seed = 1;
    std::string out_dir = ".";
    output_format format = output_format::csv;
    int bins = 60;
    double mem_cap_gb = 4.0;
    // execution-environment knobs; deliberately absent from the config echo so
    // reruns with different worker counts or caps produce identical bytes
    int threads = 0;  // 0 = library default
    truncation_target trunc_target = truncation_target::both;
    std::optional<std::pair<double, double>> hist_range;
    std::pair<double, double> variance_band{-2.5, -1.5};

    void validate() const;
};

// Deterministic workload counters. Wall-clock timings go to the stderr log
// only; persisted reports must be byte-identical across reruns.
struct timing_counters {
    std::int64_t trials_run = 0;
    std::int64_t eigendecompositions = 0;
    std::int64_t matrix_builds = 0;
    std::int64_t rng_streams = 0;
};

struct study_report {
    study_config config;
    std::vector<table> tables;
    std::vector<std::pair<std::string, cell>> scalars;
    timing_counters timing;

    jnode to_json() const;
    // (filename, content) pairs according to config.format
    std::vector<std::pair<std::string, std::string>> to_files() const;
};

// Pre-flight allocation estimate against config.mem_cap_gb; throws
// resource_error with the estimate on violation. Never crashes mid-study.
void check_memory_guard(const study_config& config,
                        const std::vector<dimension_triple>& dims, int workers);

study_report run_simulate(const study_config&);
study_report run_moment_study(const study_config&);
study_report run_variance_study(const study_config&);
study_report run_truncation_study(const study_config&);
study_report run_convergence_study(const study_config&);
study_report run_oracle(const study_config&);
study_report run_mp_eval(const study_config&);

study_report run_study(const study_config&);          // dispatch, no file IO
void write_report(const study_report&);               // files under out_dir

}
