#include "hadacov/studies.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "hadacov/errors.hpp"
#include "hadacov/metrics.hpp"
#include "hadacov/mp_law.hpp"
#include "hadacov/oracle.hpp"
#include "hadacov/rng.hpp"
#include "hadacov/spectra.hpp"
#include "hadacov/stats.hpp"
#include "hadacov/version.hpp"

namespace hadacov {

const char* study_name(study_kind k) {
    switch (k) {
        case study_kind::simulate: return "simulate";
        case study_kind::moments: return "moments";
        case study_kind::variance: return "variance";
        case study_kind::truncation: return "truncation";
        case study_kind::convergence: return "convergence";
        case study_kind::oracle: return "oracle";
        case study_kind::mp_eval: return "mp-eval";
    }
    return "unknown";
}

const char* format_name(output_format f) {
    return f == output_format::csv ? "csv" : "json";
}

const char* target_name(truncation_target t) {
    return t == truncation_target::both ? "both" : "x";
}

namespace {

bool uses_matrices(study_kind k) {
    return k == study_kind::simulate || k == study_kind::moments ||
           k == study_kind::variance || k == study_kind::truncation ||
           k == study_kind::convergence;
}

double now_seconds() {
#ifdef _OPENMP
    return omp_get_wtime();
#else
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
#endif
}

// Wall-clock diagnostics are stderr-only; persisted reports carry workload
// counters instead so rerun bytes are identical.
void log_done(const study_config& config, double t0) {
    std::fprintf(stderr, "[hadacov] %s finished in %.2fs\n",
                 study_name(config.kind), now_seconds() - t0);
}

void warn(const std::string& message) {
    std::fprintf(stderr, "[hadacov] warning: %s\n", message.c_str());
}

int resolve_workers(const study_config& config) {
    if (config.threads > 0) return config.threads;
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

// Results are bitwise identical for any thread count; this only caps the
// resources a run may claim.
void apply_thread_limit(const study_config& config) {
#ifdef _OPENMP
    if (config.threads > 0) omp_set_num_threads(config.threads);
#else
    (void)config;
#endif
}

std::vector<dimension_triple> resolve_dims(const study_config& config) {
    if (config.explicit_dims) return {*config.explicit_dims};
    return make_dimension_schedule(config.gamma, config.a, config.n_values).triples;
}

// Worker exceptions must not escape an OpenMP region; capture per trial and
// rethrow the lowest-index failure afterwards so the outcome is deterministic.
struct captured_error {
    int code = 0;
    std::string message;
};

template <typename Body>
void parallel_trials(int trials, int workers, Body&& body) {
    std::vector<captured_error> errors(static_cast<std::size_t>(trials));
#pragma omp parallel for schedule(dynamic) num_threads(workers)
    for (int t = 0; t < trials; ++t) {
        try {
            body(t);
        } catch (const config_error& e) {
            errors[t] = {config_error::exit_code, e.what()};
        } catch (const resource_error& e) {
            errors[t] = {resource_error::exit_code, e.what()};
        } catch (const std::exception& e) {
            errors[t] = {numerical_error::exit_code, e.what()};
        }
    }
    for (const captured_error& e : errors) {
        if (e.code == config_error::exit_code) throw config_error(e.message);
        if (e.code == resource_error::exit_code) throw resource_error(e.message);
        if (e.code != 0) throw numerical_error(e.message);
    }
}

spectral_sample realize_spectrum(const dimension_triple& dims, const ensemble_spec& spec,
                                 std::uint64_t master_seed, std::uint64_t trial_id) {
    random_matrix X = sample_matrix(spec.dist_x, dims.n, dims.d,
                                    derive_trial_seed(master_seed, trial_id, matrix_role::x));
    random_matrix Y = sample_matrix(spec.dist_y, dims.n, dims.p,
                                    derive_trial_seed(master_seed, trial_id, matrix_role::y));
    symmetric_matrix M = hadamard_covariance(X, Y, spec);
    spectral_sample s = eigenvalues(M);
    s.dims = dims;
    s.seed = master_seed;
    s.spec_summary = spec.summary();
    return s;
}

cell icell(std::int64_t v) { return cell(v); }
cell dcell(double v) { return cell(v); }
cell scell(std::string v) { return cell(std::move(v)); }

std::string rational_string(const oracle::rational& r) { return r.str(); }

jnode dist_to_json(const entry_distribution& d) {
    jnode o = jnode::object();
    o.set("family", jnode::of(family_name(d.family)));
    o.set("scale", jnode::of(d.scale));
    if (d.family == entry_family::student_t) {
        o.set("nu", jnode::of(d.nu));
        if (d.allow_heavy_tails) o.set("allow_heavy_tails", jnode::of(true));
    }
    return o;
}

jnode dims_to_json(const dimension_triple& t) {
    jnode o = jnode::object();
    o.set("n", jnode::of(static_cast<std::int64_t>(t.n)));
    o.set("d", jnode::of(static_cast<std::int64_t>(t.d)));
    o.set("p", jnode::of(static_cast<std::int64_t>(t.p)));
    return o;
}

// Config echo. Execution-environment knobs (threads, mem cap, output
// directory) are deliberately not part of the echo: they may differ between
// reruns that must produce identical bytes.
jnode config_to_json(const study_config& c) {
    jnode o = jnode::object();
    o.set("study", jnode::of(study_name(c.kind)));
    if (c.kind == study_kind::mp_eval) {
        o.set("gamma", jnode::of(c.gamma));
        o.set("k_max", jnode::of(static_cast<std::int64_t>(c.k_max)));
        o.set("bins", jnode::of(static_cast<std::int64_t>(c.bins)));
    } else if (c.kind == study_kind::oracle) {
        if (c.explicit_dims) o.set("dims", dims_to_json(*c.explicit_dims));
        o.set("k_max", jnode::of(static_cast<std::int64_t>(c.k_max)));
    } else {
        o.set("gamma", jnode::of(c.gamma));
        o.set("a", jnode::of(c.a));
        if (c.explicit_dims) {
            o.set("dims", dims_to_json(*c.explicit_dims));
        } else {
            jnode ns = jnode::array();
            for (std::size_t n : c.n_values) ns.push(jnode::of(static_cast<std::int64_t>(n)));
            o.set("n_values", std::move(ns));
        }
        o.set("dist_x", dist_to_json(c.spec.dist_x));
        o.set("dist_y", dist_to_json(c.spec.dist_y));
        o.set("normalize", jnode::of(c.spec.normalize));
        o.set("trials", jnode::of(static_cast<std::int64_t>(c.trials)));
        if (c.kind == study_kind::moments || c.kind == study_kind::variance)
            o.set("k_max", jnode::of(static_cast<std::int64_t>(c.k_max)));
        if (c.kind == study_kind::truncation) {
            jnode cs = jnode::array();
            for (double v : c.c_values) cs.push(jnode::of(v));
            o.set("c_values", std::move(cs));
            o.set("target", jnode::of(target_name(c.trunc_target)));
        }
        if (c.kind == study_kind::variance) {
            jnode band = jnode::array();
            band.push(jnode::of(c.variance_band.first));
            band.push(jnode::of(c.variance_band.second));
            o.set("variance_band", std::move(band));
        }
        if (c.kind == study_kind::simulate) {
            o.set("bins", jnode::of(static_cast<std::int64_t>(c.bins)));
            if (c.hist_range) {
                jnode r = jnode::array();
                r.push(jnode::of(c.hist_range->first));
                r.push(jnode::of(c.hist_range->second));
                o.set("hist_range", std::move(r));
            }
        }
        // decimal string: seeds use the full uint64 range
        o.set("seed", jnode::of(std::to_string(c.master_seed)));
    }
    o.set("format", jnode::of(format_name(c.format)));
    return o;
}

void flatten_json(const std::string& prefix, const jnode& n,
                  std::vector<std::pair<std::string, std::string>>& out) {
    switch (n.k) {
        case jnode::kind::object:
            for (const auto& [key, child] : n.obj)
                flatten_json(prefix.empty() ? key : prefix + "." + key, child, out);
            break;
        case jnode::kind::array: {
            std::string joined;
            for (std::size_t i = 0; i < n.arr.size(); ++i) {
                if (i) joined += ';';
                std::vector<std::pair<std::string, std::string>> one;
                flatten_json("", n.arr[i], one);
                joined += one.empty() ? std::string() : one.front().second;
            }
            out.emplace_back(prefix, joined);
            break;
        }
        case jnode::kind::boolean:
            out.emplace_back(prefix, n.b ? "true" : "false");
            break;
        case jnode::kind::integer:
            out.emplace_back(prefix, std::to_string(n.i));
            break;
        case jnode::kind::real:
            out.emplace_back(prefix, format_double(n.d));
            break;
        case jnode::kind::string:
            out.emplace_back(prefix, n.s);
            break;
        case jnode::kind::null:
            out.emplace_back(prefix, "null");
            break;
    }
}

std::string report_prefix(const study_config& c) {
    std::string p = study_name(c.kind);
    std::replace(p.begin(), p.end(), '-', '_');
    return p;
}

}  // namespace

void study_config::validate() const {
    spec.validate();
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw config_error("gamma must be positive and finite");
    if (!(a > 0.0) || !std::isfinite(a))
        throw config_error("a must be positive and finite");
    if (trials < 1) throw config_error("trials must be >= 1");
    if (k_max < 1 || k_max > 12) throw config_error("k-max must be in [1, 12]");
    if (bins < 1) throw config_error("bins must be >= 1");
    if (!(mem_cap_gb > 0.0)) throw config_error("mem-cap-gb must be positive");
    if (threads < 0) throw config_error("threads must be >= 0");
    for (std::size_t i = 1; i < n_values.size(); ++i)
        if (n_values[i] <= n_values[i - 1])
            throw config_error("n values must be strictly increasing");
    for (std::size_t i = 0; i < c_values.size(); ++i) {
        if (!(c_values[i] > 0.0) || !std::isfinite(c_values[i]))
            throw config_error("truncation levels must be positive and finite");
        if (i > 0 && c_values[i] <= c_values[i - 1])
            throw config_error("truncation levels must be strictly increasing");
    }
    if (hist_range && !(hist_range->first < hist_range->second))
        throw config_error("histogram range must satisfy low < high");
    if (!(variance_band.first < variance_band.second))
        throw config_error("variance band must satisfy low < high");
    if (explicit_dims &&
        (explicit_dims->n < 1 || explicit_dims->d < 1 || explicit_dims->p < 1))
        throw config_error("dims must all be positive");

    switch (kind) {
        case study_kind::simulate:
            if (!explicit_dims && n_values.size() != 1)
                throw config_error("simulate needs --dims or exactly one n");
            break;
        case study_kind::moments:
        case study_kind::convergence:
            if (!explicit_dims && n_values.empty())
                throw config_error("study needs --dims or at least one n");
            break;
        case study_kind::variance:
            if (explicit_dims)
                throw config_error("variance study fits a slope across sizes; pass --n values, not --dims");
            if (n_values.size() < 4)
                throw config_error("variance study needs at least 4 n values");
            break;
        case study_kind::truncation:
            if (c_values.empty())
                throw config_error("truncation study needs at least one truncation level");
            if (!explicit_dims && n_values.empty())
                throw config_error("study needs --dims or at least one n");
            break;
        case study_kind::oracle:
            if (!explicit_dims)
                throw config_error("oracle needs explicit --dims n,d,p");
            if (explicit_dims->n > 1000000 || explicit_dims->d > 1000000 ||
                explicit_dims->p > 1000000)
                throw config_error("oracle dims out of range");
            break;
        case study_kind::mp_eval:
            break;
    }
}

void check_memory_guard(const study_config& config,
                        const std::vector<dimension_triple>& dims, int workers) {
    if (!uses_matrices(config.kind) || dims.empty()) return;
    double worst_bytes = 0.0;
    std::size_t worst_n = 0;
    for (const dimension_triple& t : dims) {
        const double n = static_cast<double>(t.n);
        const double d = static_cast<double>(t.d);
        const double p = static_cast<double>(t.p);
        // X, Y, M, the eigensolver's matrix copy plus workspace (budgeted at
        // 2n^2), and output vectors; truncation keeps a second X, Y pair live.
        double doubles = n * d + n * p + 3.0 * n * n + 7.0 * n;
        if (config.kind == study_kind::truncation) doubles += n * d + n * p;
        const double bytes = 8.0 * doubles + 4.0 * (5.0 * n + 3.0);
        if (bytes > worst_bytes) {
            worst_bytes = bytes;
            worst_n = t.n;
        }
    }
    const double total = worst_bytes * static_cast<double>(workers);
    const double cap = config.mem_cap_gb * 1073741824.0;
    if (total > cap) {
        char buf[256];
        std::snprintf(buf, sizeof buf,
                      "estimated peak allocation %.2f GiB (n=%zu, %d workers) exceeds the "
                      "%.2f GiB cap; reduce n or --threads, or raise --mem-cap-gb",
                      total / 1073741824.0, worst_n, workers, config.mem_cap_gb);
        throw resource_error(buf);
    }
}

jnode study_report::to_json() const {
    jnode root = jnode::object();
    root.set("config", config_to_json(config));
    jnode results = jnode::object();
    for (const auto& [name, value] : scalars) results.set(name, jnode::of(value));
    jnode tabs = jnode::object();
    for (const table& t : tables) {
        jnode tn = jnode::object();
        jnode cols = jnode::array();
        for (const std::string& c : t.columns) cols.push(jnode::of(c));
        tn.set("columns", std::move(cols));
        jnode rows = jnode::array();
        for (const std::vector<cell>& r : t.rows) {
            jnode row = jnode::array();
            for (const cell& c : r) row.push(jnode::of(c));
            rows.push(std::move(row));
        }
        tn.set("rows", std::move(rows));
        tabs.set(t.name, std::move(tn));
    }
    results.set("tables", std::move(tabs));
    root.set("results", std::move(results));
    jnode tim = jnode::object();
    tim.set("trials_run", jnode::of(timing.trials_run));
    tim.set("eigendecompositions", jnode::of(timing.eigendecompositions));
    tim.set("matrix_builds", jnode::of(timing.matrix_builds));
    tim.set("rng_streams", jnode::of(timing.rng_streams));
    root.set("timing", std::move(tim));
    root.set("version", jnode::of(version));
    return root;
}

std::vector<std::pair<std::string, std::string>> study_report::to_files() const {
    const std::string prefix = report_prefix(config);
    std::vector<std::pair<std::string, std::string>> files;
    if (config.format == output_format::json) {
        files.emplace_back(prefix + "_report.json", to_json().dump());
        return files;
    }
    std::string kv = "key,value\n";
    std::vector<std::pair<std::string, std::string>> flat;
    flatten_json("config", config_to_json(config), flat);
    for (const auto& [name, value] : scalars)
        flat.emplace_back("results." + name, cell_to_string(value));
    flat.emplace_back("timing.trials_run", std::to_string(timing.trials_run));
    flat.emplace_back("timing.eigendecompositions", std::to_string(timing.eigendecompositions));
    flat.emplace_back("timing.matrix_builds", std::to_string(timing.matrix_builds));
    flat.emplace_back("timing.rng_streams", std::to_string(timing.rng_streams));
    flat.emplace_back("version", version);
    for (const auto& [key, value] : flat) kv += key + "," + value + "\n";
    files.emplace_back(prefix + "_report.csv", std::move(kv));
    for (const table& t : tables) {
        const std::string stem = t.file_stem.empty() ? prefix + "_" + t.name : t.file_stem;
        files.emplace_back(stem + ".csv", table_to_csv(t));
    }
    return files;
}

study_report run_simulate(const study_config& config) {
    config.validate();
    const std::vector<dimension_triple> dims_list = resolve_dims(config);
    const dimension_triple dims = dims_list.front();
    check_memory_guard(config, dims_list, 1);
    apply_thread_limit(config);
    const double t0 = now_seconds();

    spectral_sample s = realize_spectrum(dims, config.spec, config.master_seed, 0);
    const mp_law law = make_mp_law(dims.realized_gamma());
    const mp_cdf cdf(law);
    const empirical_cdf F = make_empirical_cdf(s);
    const cdf_view view = make_view(cdf);
    const distance_result levy = levy_distance(F, view);
    const distance_result ks = ks_distance(F, view);
    const histogram h = make_histogram(s, config.bins, config.hist_range);

    const double zero_threshold = 1e-9 * law.edge_high;
    std::int64_t near_zero = 0;
    long double trace_acc = 0.0L;
    for (double lambda : s.eigenvalues) {
        if (std::fabs(lambda) <= zero_threshold) ++near_zero;
        trace_acc += lambda;
    }

    study_report rep;
    rep.config = config;
    rep.scalars = {
        {"n", icell(static_cast<std::int64_t>(dims.n))},
        {"d", icell(static_cast<std::int64_t>(dims.d))},
        {"p", icell(static_cast<std::int64_t>(dims.p))},
        {"realized_gamma", dcell(dims.realized_gamma())},
        {"realized_a", dcell(dims.realized_a())},
        {"trace", dcell(static_cast<double>(trace_acc))},
        {"levy_to_mp", dcell(levy.value)},
        {"levy_tolerance", dcell(levy.tolerance)},
        {"ks_to_mp", dcell(ks.value)},
        {"atom_mass", dcell(law.atom_mass)},
        {"zero_threshold", dcell(zero_threshold)},
        {"near_zero_count", icell(near_zero)},
        {"underflow", icell(h.underflow)},
        {"overflow", icell(h.overflow)},
    };

    table eig{"eigenvalues", "eigenvalues", {"eigenvalue"}, {}};
    eig.rows.reserve(s.eigenvalues.size());
    for (double lambda : s.eigenvalues) eig.rows.push_back({dcell(lambda)});

    table hist{"histogram", "histogram",
               {"bin_left", "bin_right", "empirical_density", "mp_density"}, {}};
    for (std::size_t j = 0; j + 1 < h.edges.size(); ++j) {
        const double mid = 0.5 * (h.edges[j] + h.edges[j + 1]);
        hist.rows.push_back({dcell(h.edges[j]), dcell(h.edges[j + 1]),
                             dcell(h.density(j)), dcell(density(mid, law))});
    }

    rep.tables = {std::move(eig), std::move(hist)};
    rep.timing = {1, 1, 1, 2};
    log_done(config, t0);
    return rep;
}

study_report run_moment_study(const study_config& config) {
    config.validate();
    const std::vector<dimension_triple> dims_list = resolve_dims(config);
    const int workers = resolve_workers(config);
    check_memory_guard(config, dims_list, workers);
    apply_thread_limit(config);
    if (config.trials < 30)
        warn("moment study with fewer than 30 trials; standard errors are unreliable");
    const double t0 = now_seconds();

    const int K = config.k_max;
    const double sigma_x = config.spec.normalize ? 1.0 : config.spec.dist_x.scale;
    const double sigma_y = config.spec.normalize ? 1.0 : config.spec.dist_y.scale;
    // Without normalization M scales by (sigma_x sigma_y)^2, so the MP
    // reference for m_k picks up that factor to the k-th power.
    const double mp_scale = sigma_x * sigma_x * sigma_y * sigma_y;

    table summary{"summary", "",
                  {"n", "d", "p", "realized_gamma", "realized_a", "k", "trials", "mean",
                   "stderr", "sample_variance", "mp_moment", "tree_moment", "gap_mp",
                   "gap_tree", "z_tree"},
                  {}};
    table trials_tab{"trials", "", {"n", "trial", "k", "value"}, {}};

    study_report rep;
    rep.config = config;
    for (std::size_t di = 0; di < dims_list.size(); ++di) {
        const dimension_triple dims = dims_list[di];
        std::vector<std::vector<double>> slots(static_cast<std::size_t>(config.trials));
        parallel_trials(config.trials, workers, [&](int t) {
            const std::uint64_t trial_id =
                static_cast<std::uint64_t>(di) * static_cast<std::uint64_t>(config.trials) +
                static_cast<std::uint64_t>(t);
            spectral_sample s = realize_spectrum(dims, config.spec, config.master_seed, trial_id);
            std::vector<double> ms(static_cast<std::size_t>(K));
            for (int k = 1; k <= K; ++k) ms[k - 1] = empirical_moment(s, k);
            slots[t] = std::move(ms);
        });
        for (int t = 0; t < config.trials; ++t)
            for (int k = 1; k <= K; ++k)
                trials_tab.rows.push_back({icell(static_cast<std::int64_t>(dims.n)), icell(t),
                                           icell(k), dcell(slots[t][k - 1])});
        for (int k = 1; k <= K; ++k) {
            std::vector<double> values(static_cast<std::size_t>(config.trials));
            for (int t = 0; t < config.trials; ++t) values[t] = slots[t][k - 1];
            const double mean = kahan_mean(values);
            const double var = sample_variance(values);
            const double se = standard_error(var, values.size());
            double mp = mp_moment(k, dims.realized_gamma());
            for (int i = 0; i < k; ++i) mp *= mp_scale;
            const double tree = finite_n_tree_moment(k, dims.n, dims.d, dims.p, sigma_x, sigma_y);
            const double gap_mp = std::fabs(mean - mp);
            const double gap_tree = std::fabs(mean - tree);
            const double z_tree = se > 0.0 ? gap_tree / se
                                           : (gap_tree == 0.0 ? 0.0
                                                              : std::numeric_limits<double>::infinity());
            summary.rows.push_back({icell(static_cast<std::int64_t>(dims.n)),
                                    icell(static_cast<std::int64_t>(dims.d)),
                                    icell(static_cast<std::int64_t>(dims.p)),
                                    dcell(dims.realized_gamma()), dcell(dims.realized_a()),
                                    icell(k), icell(config.trials), dcell(mean), dcell(se),
                                    dcell(var), dcell(mp), dcell(tree), dcell(gap_mp),
                                    dcell(gap_tree), dcell(z_tree)});
        }
        rep.timing.trials_run += config.trials;
        rep.timing.eigendecompositions += config.trials;
        rep.timing.matrix_builds += config.trials;
        rep.timing.rng_streams += 2 * config.trials;
    }
    rep.tables = {std::move(summary), std::move(trials_tab)};
    log_done(config, t0);
    return rep;
}

study_report run_variance_study(const study_config& config) {
    config.validate();
    const std::vector<dimension_triple> dims_list = resolve_dims(config);
    const int workers = resolve_workers(config);
    check_memory_guard(config, dims_list, workers);
    apply_thread_limit(config);
    if (config.trials < 100)
        warn("variance study with fewer than 100 trials; slope estimates are noisy");
    const double t0 = now_seconds();

    const int K = config.k_max;
    table summary{"summary",
                  "",
                  {"n", "d", "p", "realized_gamma", "k", "trials", "mean", "sample_variance"},
                  {}};
    table trials_tab{"trials", "", {"n", "trial", "k", "value"}, {}};
    // variance floor distinguishing Monte Carlo variance from accumulated
    // rounding noise of an exactly-constant statistic
    const double degenerate_rel = 1e-24;

    std::vector<std::vector<double>> mean_nk(dims_list.size());
    std::vector<std::vector<double>> var_nk(dims_list.size());

    study_report rep;
    rep.config = config;
    for (std::size_t di = 0; di < dims_list.size(); ++di) {
        const dimension_triple dims = dims_list[di];
        std::vector<std::vector<double>> slots(static_cast<std::size_t>(config.trials));
        parallel_trials(config.trials, workers, [&](int t) {
            const std::uint64_t trial_id =
                static_cast<std::uint64_t>(di) * static_cast<std::uint64_t>(config.trials) +
                static_cast<std::uint64_t>(t);
            spectral_sample s = realize_spectrum(dims, config.spec, config.master_seed, trial_id);
            std::vector<double> ms(static_cast<std::size_t>(K));
            for (int k = 1; k <= K; ++k) ms[k - 1] = empirical_moment(s, k);
            slots[t] = std::move(ms);
        });
        mean_nk[di].resize(static_cast<std::size_t>(K));
        var_nk[di].resize(static_cast<std::size_t>(K));
        for (int t = 0; t < config.trials; ++t)
            for (int k = 1; k <= K; ++k)
                trials_tab.rows.push_back({icell(static_cast<std::int64_t>(dims.n)), icell(t),
                                           icell(k), dcell(slots[t][k - 1])});
        for (int k = 1; k <= K; ++k) {
            std::vector<double> values(static_cast<std::size_t>(config.trials));
            for (int t = 0; t < config.trials; ++t) values[t] = slots[t][k - 1];
            const double mean = kahan_mean(values);
            const double var = sample_variance(values);
            mean_nk[di][k - 1] = mean;
            var_nk[di][k - 1] = var;
            summary.rows.push_back({icell(static_cast<std::int64_t>(dims.n)),
                                    icell(static_cast<std::int64_t>(dims.d)),
                                    icell(static_cast<std::int64_t>(dims.p)),
                                    dcell(dims.realized_gamma()), icell(k),
                                    icell(config.trials), dcell(mean), dcell(var)});
        }
        rep.timing.trials_run += config.trials;
        rep.timing.eigendecompositions += config.trials;
        rep.timing.matrix_builds += config.trials;
        rep.timing.rng_streams += 2 * config.trials;
    }

    table fit{"fit",
              "",
              {"k", "points", "slope", "slope_stderr", "intercept", "intercept_stderr",
               "band_low", "band_high", "in_band", "excluded", "note"},
              {}};
    for (int k = 1; k <= K; ++k) {
        std::string note;
        for (std::size_t di = 0; di < dims_list.size(); ++di) {
            const double mean = mean_nk[di][k - 1];
            const double var = var_nk[di][k - 1];
            if (var <= 0.0 || var < degenerate_rel * mean * mean) {
                note = "degenerate variance at n=" + std::to_string(dims_list[di].n);
                break;
            }
        }
        if (!note.empty()) {
            fit.rows.push_back({icell(k), icell(0), dcell(0.0), dcell(0.0), dcell(0.0),
                                dcell(0.0), dcell(config.variance_band.first),
                                dcell(config.variance_band.second), icell(0), icell(1),
                                scell(note)});
            continue;
        }
        std::vector<double> xs(dims_list.size()), ys(dims_list.size());
        for (std::size_t di = 0; di < dims_list.size(); ++di) {
            xs[di] = std::log(static_cast<double>(dims_list[di].n));
            ys[di] = std::log(var_nk[di][k - 1]);
        }
        const ols_fit f = fit_line(xs, ys);
        const bool in_band = f.slope >= config.variance_band.first &&
                             f.slope <= config.variance_band.second;
        fit.rows.push_back({icell(k), icell(static_cast<std::int64_t>(f.points)),
                            dcell(f.slope), dcell(f.slope_stderr), dcell(f.intercept),
                            dcell(f.intercept_stderr), dcell(config.variance_band.first),
                            dcell(config.variance_band.second), icell(in_band ? 1 : 0),
                            icell(0), scell("")});
    }
    rep.tables = {std::move(summary), std::move(fit), std::move(trials_tab)};
    log_done(config, t0);
    return rep;
}

study_report run_truncation_study(const study_config& config) {
    config.validate();
    const std::vector<dimension_triple> dims_list = resolve_dims(config);
    const int workers = resolve_workers(config);
    check_memory_guard(config, dims_list, workers);
    apply_thread_limit(config);
    const entry_family fx = config.spec.dist_x.family;
    if (fx == entry_family::rademacher || fx == entry_family::uniform)
        warn("dist-x is bounded, so truncation is the identity once the level "
             "exceeds the support");
    const double t0 = now_seconds();

    const std::size_t C = config.c_values.size();
    table summary{"summary",
                  "",
                  {"n", "c", "trials", "mean_levy3", "stderr_levy3", "mean_levy", "target"},
                  {}};
    table trials_tab{"trials", "", {"n", "c", "trial", "levy", "levy3"}, {}};

    struct trunc_slot {
        std::vector<double> levy;
    };

    study_report rep;
    rep.config = config;
    for (std::size_t di = 0; di < dims_list.size(); ++di) {
        const dimension_triple dims = dims_list[di];
        std::vector<trunc_slot> slots(static_cast<std::size_t>(config.trials));
        parallel_trials(config.trials, workers, [&](int t) {
            const std::uint64_t trial_id =
                static_cast<std::uint64_t>(di) * static_cast<std::uint64_t>(config.trials) +
                static_cast<std::uint64_t>(t);
            // one (X, Y) pair per trial, reused across all levels: the
            // truncated-vs-plain comparison is paired by construction
            random_matrix X = sample_matrix(config.spec.dist_x, dims.n, dims.d,
                                            derive_trial_seed(config.master_seed, trial_id,
                                                              matrix_role::x));
            random_matrix Y = sample_matrix(config.spec.dist_y, dims.n, dims.p,
                                            derive_trial_seed(config.master_seed, trial_id,
                                                              matrix_role::y));
            symmetric_matrix M = hadamard_covariance(X, Y, config.spec);
            spectral_sample base = eigenvalues(M);
            M.entries.clear();
            M.entries.shrink_to_fit();
            const empirical_cdf F = make_empirical_cdf(base);
            slots[t].levy.resize(C);
            for (std::size_t ci = 0; ci < C; ++ci) {
                const double c = config.c_values[ci];
                random_matrix Xt = truncate_center(X, c, config.spec.dist_x);
                random_matrix Yt = config.trunc_target == truncation_target::both
                                       ? truncate_center(Y, c, config.spec.dist_y)
                                       : Y;
                symmetric_matrix Mt = hadamard_covariance(Xt, Yt, config.spec);
                spectral_sample st = eigenvalues(Mt);
                const empirical_cdf G = make_empirical_cdf(st);
                slots[t].levy[ci] = levy_distance(F, make_view(G)).value;
            }
        });
        for (std::size_t ci = 0; ci < C; ++ci) {
            std::vector<double> levy(static_cast<std::size_t>(config.trials));
            std::vector<double> levy3(static_cast<std::size_t>(config.trials));
            for (int t = 0; t < config.trials; ++t) {
                const double L = slots[t].levy[ci];
                levy[t] = L;
                levy3[t] = L * L * L;
                trials_tab.rows.push_back({icell(static_cast<std::int64_t>(dims.n)),
                                           dcell(config.c_values[ci]), icell(t), dcell(L),
                                           dcell(levy3[t])});
            }
            const double mean3 = kahan_mean(levy3);
            const double se3 = standard_error(sample_variance(levy3), levy3.size());
            summary.rows.push_back({icell(static_cast<std::int64_t>(dims.n)),
                                    dcell(config.c_values[ci]), icell(config.trials),
                                    dcell(mean3), dcell(se3), dcell(kahan_mean(levy)),
                                    scell(target_name(config.trunc_target))});
        }
        rep.timing.trials_run += config.trials;
        rep.timing.eigendecompositions += config.trials * (1 + static_cast<std::int64_t>(C));
        rep.timing.matrix_builds += config.trials * (1 + static_cast<std::int64_t>(C));
        rep.timing.rng_streams += 2 * config.trials;
    }
    rep.tables = {std::move(summary), std::move(trials_tab)};
    log_done(config, t0);
    return rep;
}

study_report run_convergence_study(const study_config& config) {
    config.validate();
    const std::vector<dimension_triple> dims_list = resolve_dims(config);
    const int workers = resolve_workers(config);
    check_memory_guard(config, dims_list, workers);
    apply_thread_limit(config);
    const double t0 = now_seconds();

    table summary{"summary",
                  "",
                  {"n", "d", "p", "realized_gamma", "trials", "mean_levy", "stderr_levy",
                   "mean_near_zero_fraction", "atom_mass", "edge_high"},
                  {}};
    table trials_tab{"trials", "", {"n", "trial", "levy", "near_zero_fraction"}, {}};

    struct conv_slot {
        double levy = 0.0;
        double near_zero = 0.0;
    };

    study_report rep;
    rep.config = config;
    for (std::size_t di = 0; di < dims_list.size(); ++di) {
        const dimension_triple dims = dims_list[di];
        const mp_law law = make_mp_law(dims.realized_gamma());
        const mp_cdf cdf(law);
        const cdf_view view = make_view(cdf);
        const double zero_threshold = 1e-9 * law.edge_high;
        std::vector<conv_slot> slots(static_cast<std::size_t>(config.trials));
        parallel_trials(config.trials, workers, [&](int t) {
            const std::uint64_t trial_id =
                static_cast<std::uint64_t>(di) * static_cast<std::uint64_t>(config.trials) +
                static_cast<std::uint64_t>(t);
            spectral_sample s = realize_spectrum(dims, config.spec, config.master_seed, trial_id);
            const empirical_cdf F = make_empirical_cdf(s);
            slots[t].levy = levy_distance(F, view).value;
            std::int64_t zero = 0;
            for (double lambda : s.eigenvalues)
                if (std::fabs(lambda) <= zero_threshold) ++zero;
            slots[t].near_zero =
                static_cast<double>(zero) / static_cast<double>(s.eigenvalues.size());
        });
        std::vector<double> levy(static_cast<std::size_t>(config.trials));
        std::vector<double> zero(static_cast<std::size_t>(config.trials));
        for (int t = 0; t < config.trials; ++t) {
            levy[t] = slots[t].levy;
            zero[t] = slots[t].near_zero;
            trials_tab.rows.push_back({icell(static_cast<std::int64_t>(dims.n)), icell(t),
                                       dcell(levy[t]), dcell(zero[t])});
        }
        summary.rows.push_back({icell(static_cast<std::int64_t>(dims.n)),
                                icell(static_cast<std::int64_t>(dims.d)),
                                icell(static_cast<std::int64_t>(dims.p)),
                                dcell(dims.realized_gamma()), icell(config.trials),
                                dcell(kahan_mean(levy)),
                                dcell(standard_error(sample_variance(levy), levy.size())),
                                dcell(kahan_mean(zero)), dcell(law.atom_mass),
                                dcell(law.edge_high)});
        rep.timing.trials_run += config.trials;
        rep.timing.eigendecompositions += config.trials;
        rep.timing.matrix_builds += config.trials;
        rep.timing.rng_streams += 2 * config.trials;
    }
    rep.tables = {std::move(summary), std::move(trials_tab)};
    log_done(config, t0);
    return rep;
}

study_report run_oracle(const study_config& config) {
    config.validate();
    const dimension_triple dims = *config.explicit_dims;
    const int n = static_cast<int>(dims.n);
    const int d = static_cast<int>(dims.d);
    const int p = static_cast<int>(dims.p);
    // (n d p)^k grows in k, so the largest k bounds the whole job
    oracle::check_enumeration_guard(config.k_max, n, d, p);
    const double t0 = now_seconds();

    table walks{"walks",
                "",
                {"k", "n", "d", "p", "contributing", "all_mult_two", "x_double_tree",
                 "mirror_symmetric", "tree_class", "exact_moment", "exact_moment_double",
                 "tree_class_mass", "tree_moment", "tree_match"},
                {}};
    for (int k = 1; k <= config.k_max; ++k) {
        const oracle::walk_class_counts counts = oracle::enumerate_contributing_walks(k, n, d, p);
        const oracle::rational exact = counts.exact_moment();
        const oracle::rational tree_mass = counts.tree_class_mass();
        const oracle::rational tree = oracle::tree_moment_rational(k, n, d, p);
        walks.rows.push_back({icell(k), icell(n), icell(d), icell(p),
                              scell(counts.contributing.str()),
                              scell(counts.all_mult_two.str()),
                              scell(counts.x_double_tree.str()),
                              scell(counts.mirror_symmetric.str()),
                              scell(counts.tree_class.str()), scell(rational_string(exact)),
                              dcell(exact.convert_to<double>()),
                              scell(rational_string(tree_mass)), scell(rational_string(tree)),
                              icell(tree_mass == tree ? 1 : 0)});
    }

    table shapes{"tree_shapes", "", {"k", "s", "narayana"}, {}};
    for (int k = 1; k <= config.k_max; ++k)
        for (int s = 0; s < k; ++s)
            shapes.rows.push_back({icell(k), icell(s),
                                   scell(rational_string(oracle::count_tree_shapes(k, s)))});

    study_report rep;
    rep.config = config;
    rep.tables = {std::move(walks), std::move(shapes)};
    log_done(config, t0);
    return rep;
}

study_report run_mp_eval(const study_config& config) {
    config.validate();
    const double t0 = now_seconds();
    const mp_law law = make_mp_law(config.gamma);
    const mp_cdf cdf(law);

    const double span = law.edge_high - law.edge_low;
    const double lo = law.edge_low - 0.05 * span;
    const double hi = law.edge_high + 0.05 * span;
    table grid{"grid", "", {"x", "density", "cdf"}, {}};
    for (int j = 0; j <= config.bins; ++j) {
        const double x = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(config.bins);
        grid.rows.push_back({dcell(x), dcell(density(x, law)), dcell(cdf(x))});
    }

    table moments{"moments", "", {"k", "moment", "quadrature_moment"}, {}};
    for (int k = 1; k <= config.k_max; ++k)
        moments.rows.push_back(
            {icell(k), dcell(mp_moment(k, config.gamma)), dcell(cdf.quadrature_moment(k))});

    study_report rep;
    rep.config = config;
    rep.scalars = {
        {"gamma", dcell(config.gamma)},
        {"edge_low", dcell(law.edge_low)},
        {"edge_high", dcell(law.edge_high)},
        {"atom_mass", dcell(law.atom_mass)},
        {"median", dcell(quantile(0.5, cdf))},
    };
    rep.tables = {std::move(grid), std::move(moments)};
    log_done(config, t0);
    return rep;
}

study_report run_study(const study_config& config) {
    switch (config.kind) {
        case study_kind::simulate: return run_simulate(config);
        case study_kind::moments: return run_moment_study(config);
        case study_kind::variance: return run_variance_study(config);
        case study_kind::truncation: return run_truncation_study(config);
        case study_kind::convergence: return run_convergence_study(config);
        case study_kind::oracle: return run_oracle(config);
        case study_kind::mp_eval: return run_mp_eval(config);
    }
    throw config_error("unknown study kind");
}

void write_report(const study_report& report) {
    namespace fs = std::filesystem;
    const fs::path dir(report.config.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw config_error("cannot create output directory " + dir.string());
    for (const auto& [name, content] : report.to_files())
        write_text_file(dir / name, content);
}

}  // namespace hadacov
