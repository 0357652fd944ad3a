// hadacov: Monte Carlo laboratory for Hadamard products of sample covariance
// matrices, with Marchenko-Pastur analytics and an exact combinatorial oracle.
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hadacov/errors.hpp"
#include "hadacov/studies.hpp"
#include "hadacov/version.hpp"

namespace {

struct cli_options {
    hadacov::study_config config;
    std::string dist_x = "gaussian";
    std::string dist_y = "gaussian";
    double scale_x = 1.0;
    double scale_y = 1.0;
    double nu = 6.0;
    bool no_normalize = false;
    bool allow_heavy_tails = false;
    std::string format = "csv";
    std::string target = "both";
    std::vector<std::size_t> dims;
    std::vector<double> hist_range;
    std::vector<double> band;
    bool trials_given = false;
};

void add_common_flags(CLI::App* cmd, cli_options& o, bool with_ensemble) {
    cmd->add_option("--seed", o.config.master_seed, "master seed (64-bit)");
    cmd->add_option("--out", o.config.out_dir, "output directory");
    cmd->add_option("--format", o.format, "report format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--mem-cap-gb", o.config.mem_cap_gb, "allocation cap in GiB");
    cmd->add_option("--threads", o.config.threads, "worker threads (0 = all)");
    if (!with_ensemble) return;
    cmd->add_option("--gamma", o.config.gamma, "target n/(dp)");
    cmd->add_option("--a", o.config.a, "target p/d");
    cmd->add_option("--n", o.config.n_values, "matrix sizes n (repeatable)");
    cmd->add_option("--dims", o.dims, "explicit n,d,p")->delimiter(',')->expected(3);
    cmd->add_option("--dist-x", o.dist_x, "X entry family")
        ->check(CLI::IsMember({"gaussian", "rademacher", "uniform", "student_t", "student-t"}));
    cmd->add_option("--dist-y", o.dist_y, "Y entry family")
        ->check(CLI::IsMember({"gaussian", "rademacher", "uniform", "student_t", "student-t"}));
    cmd->add_option("--scale-x", o.scale_x, "X entry standard deviation");
    cmd->add_option("--scale-y", o.scale_y, "Y entry standard deviation");
    cmd->add_option("--nu", o.nu, "student-t degrees of freedom");
    cmd->add_flag("--allow-infinite-fourth-moment", o.allow_heavy_tails,
                  "admit student-t with 2 < nu <= 4");
    cmd->add_flag("--no-normalize", o.no_normalize,
                  "skip division by the population entry variances");
    o.trials_given = false;
    cmd->add_option("--trials", o.config.trials, "Monte Carlo trials per size")
        ->each([&o](const std::string&) { o.trials_given = true; });
}

hadacov::study_config finish(cli_options& o, hadacov::study_kind kind) {
    hadacov::study_config c = o.config;
    c.kind = kind;
    c.spec.dist_x.family = hadacov::family_from_name(o.dist_x);
    c.spec.dist_y.family = hadacov::family_from_name(o.dist_y);
    c.spec.dist_x.scale = o.scale_x;
    c.spec.dist_y.scale = o.scale_y;
    if (c.spec.dist_x.family == hadacov::entry_family::student_t) c.spec.dist_x.nu = o.nu;
    if (c.spec.dist_y.family == hadacov::entry_family::student_t) c.spec.dist_y.nu = o.nu;
    c.spec.dist_x.allow_heavy_tails = o.allow_heavy_tails;
    c.spec.dist_y.allow_heavy_tails = o.allow_heavy_tails;
    c.spec.normalize = !o.no_normalize;
    if (o.format == "json") c.format = hadacov::output_format::json;
    if (o.target == "x") c.trunc_target = hadacov::truncation_target::x_only;
    if (!o.dims.empty()) {
        if (o.dims.size() != 3) throw hadacov::config_error("--dims needs n,d,p");
        c.explicit_dims = hadacov::dimension_triple{o.dims[0], o.dims[1], o.dims[2]};
    }
    if (o.hist_range.size() == 2)
        c.hist_range = std::make_pair(o.hist_range[0], o.hist_range[1]);
    if (o.band.size() == 2) c.variance_band = std::make_pair(o.band[0], o.band[1]);

    if (!o.trials_given) {
        std::size_t max_n = c.explicit_dims ? c.explicit_dims->n : 0;
        for (std::size_t n : c.n_values) max_n = std::max(max_n, n);
        switch (kind) {
            case hadacov::study_kind::simulate: c.trials = 1; break;
            case hadacov::study_kind::moments:
            case hadacov::study_kind::variance:
                c.trials = max_n <= 1000 ? 200 : 30;
                break;
            case hadacov::study_kind::truncation:
            case hadacov::study_kind::convergence:
                c.trials = 10;
                break;
            default: c.trials = 1; break;
        }
    }
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hadamard products of sample covariance matrices: spectra, "
                 "Marchenko-Pastur analytics, and exact walk-counting oracles"};
    app.set_version_flag("--version", hadacov::version);
    app.require_subcommand(1);

    cli_options o;

    CLI::App* simulate = app.add_subcommand("simulate", "one realization: eigenvalues + histogram");
    add_common_flags(simulate, o, true);
    simulate->add_option("--bins", o.config.bins, "histogram bins");
    simulate->add_option("--hist-range", o.hist_range, "histogram range lo,hi")
        ->delimiter(',')
        ->expected(2);

    CLI::App* moments = app.add_subcommand("moments", "moment means vs analytic predictions");
    add_common_flags(moments, o, true);
    moments->add_option("--k-max", o.config.k_max, "largest moment order");

    CLI::App* variance = app.add_subcommand("variance", "moment variance decay in n");
    add_common_flags(variance, o, true);
    variance->add_option("--k-max", o.config.k_max, "largest moment order");
    variance->add_option("--variance-band", o.band, "slope acceptance band lo,hi")
        ->delimiter(',')
        ->expected(2);

    CLI::App* truncation = app.add_subcommand("truncation", "spectral effect of entry truncation");
    add_common_flags(truncation, o, true);
    truncation->add_option("--c", o.config.c_values, "truncation levels (repeatable)");
    truncation->add_option("--truncate-target", o.target, "truncate x only or both factors")
        ->check(CLI::IsMember({"x", "both"}));

    CLI::App* convergence = app.add_subcommand("convergence", "Levy distance to the limit law vs n");
    add_common_flags(convergence, o, true);

    CLI::App* oracle = app.add_subcommand("oracle", "exact rational walk-counting tables");
    add_common_flags(oracle, o, false);
    oracle->add_option("--dims", o.dims, "explicit n,d,p")->delimiter(',')->expected(3)->required();
    oracle->add_option("--k-max", o.config.k_max, "largest moment order");

    CLI::App* mp_eval = app.add_subcommand("mp-eval", "Marchenko-Pastur density/cdf/moment tables");
    add_common_flags(mp_eval, o, false);
    mp_eval->add_option("--gamma", o.config.gamma, "shape parameter");
    mp_eval->add_option("--k-max", o.config.k_max, "largest moment order");
    mp_eval->add_option("--bins", o.config.bins, "grid resolution (bins+1 points)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
        app.exit(e);
        return hadacov::config_error::exit_code;
    }

    hadacov::study_kind kind = hadacov::study_kind::simulate;
    if (moments->parsed()) kind = hadacov::study_kind::moments;
    if (variance->parsed()) kind = hadacov::study_kind::variance;
    if (truncation->parsed()) kind = hadacov::study_kind::truncation;
    if (convergence->parsed()) kind = hadacov::study_kind::convergence;
    if (oracle->parsed()) kind = hadacov::study_kind::oracle;
    if (mp_eval->parsed()) kind = hadacov::study_kind::mp_eval;

    try {
        hadacov::study_config config = finish(o, kind);
        hadacov::study_report report = hadacov::run_study(config);
        hadacov::write_report(report);
        for (const auto& [name, content] : report.to_files())
            std::printf("%s/%s (%zu bytes)\n", config.out_dir.c_str(), name.c_str(),
                        content.size());
        return 0;
    } catch (const hadacov::config_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return hadacov::config_error::exit_code;
    } catch (const hadacov::numerical_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return hadacov::numerical_error::exit_code;
    } catch (const hadacov::resource_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return hadacov::resource_error::exit_code;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return hadacov::numerical_error::exit_code;
    }
}
