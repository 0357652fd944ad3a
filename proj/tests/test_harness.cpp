#include "doctest.h"

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "hadacov/errors.hpp"
#include "hadacov/studies.hpp"

using namespace hadacov;

namespace {

double dval(const cell& c) { return std::get<double>(c); }
std::int64_t ival(const cell& c) { return std::get<std::int64_t>(c); }

const table& find_table(const study_report& r, const std::string& name) {
    for (const table& t : r.tables)
        if (t.name == name) return t;
    REQUIRE_MESSAGE(false, ("missing table " + name));
    return r.tables.front();
}

std::size_t col_index(const table& t, const std::string& name) {
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        if (t.columns[i] == name) return i;
    REQUIRE_MESSAGE(false, ("missing column " + name));
    return 0;
}

study_config tiny_moments_config() {
    study_config c;
    c.kind = study_kind::moments;
    c.explicit_dims = dimension_triple{12, 3, 4};
    c.trials = 8;
    c.k_max = 3;
    c.master_seed = 11;
    return c;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(HADACOV_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("config validation rejects malformed studies") {
    study_config c = tiny_moments_config();
    c.trials = 0;
    CHECK_THROWS_AS(c.validate(), config_error);
    c = tiny_moments_config();
    c.k_max = 0;
    CHECK_THROWS_AS(c.validate(), config_error);
    c.k_max = 13;
    CHECK_THROWS_AS(c.validate(), config_error);
    c = tiny_moments_config();
    c.explicit_dims.reset();
    c.n_values = {100, 100};
    CHECK_THROWS_AS(c.validate(), config_error);
    c.n_values = {200, 100};
    CHECK_THROWS_AS(c.validate(), config_error);

    study_config v;
    v.kind = study_kind::variance;
    v.n_values = {100, 200, 400};  // needs at least 4
    CHECK_THROWS_AS(v.validate(), config_error);

    study_config t;
    t.kind = study_kind::truncation;
    t.n_values = {50};
    CHECK_THROWS_AS(t.validate(), config_error);  // no levels
    t.c_values = {1.0, 1.0};
    CHECK_THROWS_AS(t.validate(), config_error);  // not increasing
    t.c_values = {-1.0};
    CHECK_THROWS_AS(t.validate(), config_error);

    study_config o;
    o.kind = study_kind::oracle;
    CHECK_THROWS_AS(o.validate(), config_error);  // oracle needs dims

    study_config s;
    s.kind = study_kind::simulate;
    s.n_values = {100, 200};
    CHECK_THROWS_AS(s.validate(), config_error);  // simulate wants one size
}

TEST_CASE("moment study: shapes, counters, and two-pass aggregation agreement") {
    const study_config c = tiny_moments_config();
    const study_report r = run_moment_study(c);

    CHECK(r.timing.trials_run == 8);
    CHECK(r.timing.eigendecompositions == 8);
    CHECK(r.timing.matrix_builds == 8);
    CHECK(r.timing.rng_streams == 16);

    const table& summary = find_table(r, "summary");
    const table& trials = find_table(r, "trials");
    REQUIRE(summary.rows.size() == 3);
    REQUIRE(trials.rows.size() == 24);

    const std::size_t s_k = col_index(summary, "k");
    const std::size_t s_mean = col_index(summary, "mean");
    const std::size_t s_var = col_index(summary, "sample_variance");
    const std::size_t s_se = col_index(summary, "stderr");
    const std::size_t t_k = col_index(trials, "k");
    const std::size_t t_val = col_index(trials, "value");

    for (const auto& srow : summary.rows) {
        const std::int64_t k = ival(srow[s_k]);
        // straightforward two-pass reference over the persisted trial values
        std::vector<double> vals;
        for (const auto& trow : trials.rows)
            if (ival(trow[t_k]) == k) vals.push_back(dval(trow[t_val]));
        REQUIRE(vals.size() == 8);
        double mean = 0.0;
        for (double v : vals) mean += v;
        mean /= static_cast<double>(vals.size());
        double var = 0.0;
        for (double v : vals) var += (v - mean) * (v - mean);
        var /= static_cast<double>(vals.size() - 1);
        CHECK(std::fabs(dval(srow[s_mean]) - mean) <= 1e-12 * std::max(1.0, std::fabs(mean)));
        CHECK(std::fabs(dval(srow[s_var]) - var) <= 1e-12 * std::max(1e-30, var));
        CHECK(dval(srow[s_se]) ==
              doctest::Approx(std::sqrt(var / vals.size())).epsilon(1e-10));
    }
}

TEST_CASE("reports are byte-identical across worker counts") {
    study_config one = tiny_moments_config();
    one.threads = 1;
    study_config two = tiny_moments_config();
    two.threads = 2;
    const auto files_one = run_moment_study(one).to_files();
    const auto files_two = run_moment_study(two).to_files();
    REQUIRE(files_one.size() == files_two.size());
    for (std::size_t i = 0; i < files_one.size(); ++i) {
        CHECK(files_one[i].first == files_two[i].first);
        CHECK(files_one[i].second == files_two[i].second);
    }
    // execution knobs never leak into the echo
    for (const auto& [name, content] : files_one)
        CHECK(content.find("threads") == std::string::npos);
}

TEST_CASE("json and csv renderings carry the same content") {
    study_config c = tiny_moments_config();
    c.format = output_format::json;
    const study_report r = run_moment_study(c);
    const auto files = r.to_files();
    REQUIRE(files.size() == 1);
    CHECK(files[0].first == "moments_report.json");
    CHECK(files[0].second.front() == '{');
    CHECK(files[0].second.find("\"version\": \"1.0.0\"") != std::string::npos);
    CHECK(files[0].second.find("17") != std::string::npos);  // full-precision reals present

    c.format = output_format::csv;
    const auto csv_files = run_moment_study(c).to_files();
    REQUIRE(csv_files.size() == 3);
    CHECK(csv_files[0].first == "moments_report.csv");
    CHECK(csv_files[0].second.rfind("key,value\n", 0) == 0);
    CHECK(csv_files[1].first == "moments_summary.csv");
    CHECK(csv_files[2].first == "moments_trials.csv");
}

TEST_CASE("memory guard refuses oversized jobs before allocating") {
    study_config c;
    c.kind = study_kind::convergence;
    c.explicit_dims = dimension_triple{100000, 10, 10};
    c.trials = 2;
    c.mem_cap_gb = 0.5;
    CHECK_THROWS_AS(run_convergence_study(c), resource_error);
    try {
        run_convergence_study(c);
    } catch (const resource_error& e) {
        CHECK(std::string(e.what()).find("GiB") != std::string::npos);
    }
}

TEST_CASE("variance study excludes the degenerate k=1 Rademacher moment with a note") {
    study_config c;
    c.kind = study_kind::variance;
    c.spec.dist_x.family = entry_family::rademacher;
    c.spec.dist_y.family = entry_family::rademacher;
    c.n_values = {36, 64, 100, 144};
    c.gamma = 1.0;
    c.a = 1.0;
    c.trials = 6;
    c.k_max = 2;
    c.master_seed = 3;
    const study_report r = run_variance_study(c);
    const table& fit = find_table(r, "fit");
    REQUIRE(fit.rows.size() == 2);
    const std::size_t f_excluded = col_index(fit, "excluded");
    const std::size_t f_note = col_index(fit, "note");
    const std::size_t f_points = col_index(fit, "points");
    CHECK(ival(fit.rows[0][f_excluded]) == 1);
    CHECK(std::get<std::string>(fit.rows[0][f_note]).find("degenerate") != std::string::npos);
    CHECK(ival(fit.rows[1][f_excluded]) == 0);
    CHECK(ival(fit.rows[1][f_points]) == 4);
}

TEST_CASE("truncation study: inactive truncation is exactly zero, deeper cuts move more") {
    study_config r;
    r.kind = study_kind::truncation;
    r.spec.dist_x.family = entry_family::rademacher;
    r.spec.dist_y.family = entry_family::rademacher;
    r.explicit_dims = dimension_triple{30, 5, 6};
    r.c_values = {2.0};
    r.trials = 3;
    const study_report rr = run_truncation_study(r);
    const table& rsum = find_table(rr, "summary");
    CHECK(dval(rsum.rows[0][col_index(rsum, "mean_levy3")]) == 0.0);
    CHECK(dval(rsum.rows[0][col_index(rsum, "mean_levy")]) == 0.0);

    study_config g;
    g.kind = study_kind::truncation;
    g.explicit_dims = dimension_triple{30, 5, 6};
    g.c_values = {1.0, 4.0};
    g.trials = 4;
    g.master_seed = 9;
    const study_report gr = run_truncation_study(g);
    const table& gsum = find_table(gr, "summary");
    REQUIRE(gsum.rows.size() == 2);
    const std::size_t m3 = col_index(gsum, "mean_levy3");
    CHECK(dval(gsum.rows[1][m3]) < dval(gsum.rows[0][m3]));
    CHECK(gr.timing.eigendecompositions == 4 * 3);  // base + one per level
}

TEST_CASE("convergence study reports the exact rank-deficit fraction above gamma 1") {
    study_config c;
    c.kind = study_kind::convergence;
    c.explicit_dims = dimension_triple{40, 4, 5};  // realized gamma 2
    c.trials = 2;
    c.master_seed = 5;
    const study_report r = run_convergence_study(c);
    const table& s = find_table(r, "summary");
    // rank min(n, dp) = 20, so exactly half the spectrum sits at 0
    CHECK(dval(s.rows[0][col_index(s, "mean_near_zero_fraction")]) == 0.5);
    CHECK(dval(s.rows[0][col_index(s, "atom_mass")]) == 0.5);
    const table& t = find_table(r, "trials");
    REQUIRE(t.rows.size() == 2);
    for (const auto& row : t.rows) CHECK(dval(row[col_index(t, "levy")]) < 0.5);
}

TEST_CASE("simulate writes the documented data files") {
    study_config c;
    c.kind = study_kind::simulate;
    c.explicit_dims = dimension_triple{10, 3, 4};
    c.bins = 6;
    c.master_seed = 21;
    const study_report r = run_simulate(c);
    const auto files = r.to_files();
    REQUIRE(files.size() == 3);
    CHECK(files[1].first == "eigenvalues.csv");
    CHECK(files[1].second.rfind("eigenvalue\n", 0) == 0);
    CHECK(files[2].first == "histogram.csv");
    CHECK(files[2].second.rfind("bin_left,bin_right,empirical_density,mp_density\n", 0) == 0);
    // 10 eigenvalues -> 11 lines with header
    CHECK(std::count(files[1].second.begin(), files[1].second.end(), '\n') == 11);
    CHECK(std::count(files[2].second.begin(), files[2].second.end(), '\n') == 7);

    const std::filesystem::path dir = std::filesystem::temp_directory_path() / "hadacov_sim_t";
    std::filesystem::remove_all(dir);
    study_config wr = c;
    wr.out_dir = dir.string();
    write_report(run_study(wr));
    CHECK(std::filesystem::exists(dir / "simulate_report.csv"));
    CHECK(std::filesystem::exists(dir / "eigenvalues.csv"));
    CHECK(std::filesystem::exists(dir / "histogram.csv"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("mp-eval emits Catalan moments and zero density off support") {
    study_config c;
    c.kind = study_kind::mp_eval;
    c.gamma = 1.0;
    c.k_max = 8;
    c.bins = 50;
    const study_report r = run_mp_eval(c);
    const table& moments = find_table(r, "moments");
    REQUIRE(moments.rows.size() == 8);
    CHECK(dval(moments.rows[7][col_index(moments, "moment")]) == 1430.0);
    const table& grid = find_table(r, "grid");
    const std::size_t gx = col_index(grid, "x");
    const std::size_t gd = col_index(grid, "density");
    REQUIRE(grid.rows.size() == 51);
    for (const auto& row : grid.rows) {
        const double x = dval(row[gx]);
        if (x < 0.0 || x > 4.0) CHECK(dval(row[gd]) == 0.0);
    }
}

TEST_CASE("oracle study persists exact rationals as strings") {
    study_config c;
    c.kind = study_kind::oracle;
    c.explicit_dims = dimension_triple{2, 2, 2};
    c.k_max = 3;
    const study_report r = run_oracle(c);
    const table& walks = find_table(r, "walks");
    REQUIRE(walks.rows.size() == 3);
    CHECK(std::get<std::string>(walks.rows[1][col_index(walks, "exact_moment")]) == "5/4");
    CHECK(std::get<std::string>(walks.rows[2][col_index(walks, "exact_moment")]) == "7/4");
    for (const auto& row : walks.rows)
        CHECK(ival(row[col_index(walks, "tree_match")]) == 1);

    study_config big = c;
    big.explicit_dims = dimension_triple{5, 5, 5};
    big.k_max = 6;
    CHECK_THROWS_AS(run_oracle(big), resource_error);
}

TEST_CASE("cli: exit codes and file outputs") {
    namespace fs = std::filesystem;
    const fs::path base = fs::temp_directory_path() / "hadacov_cli_t";
    fs::remove_all(base);

    CHECK(run_cli("simulate --dims 8,2,4 --seed 3 --out " + (base / "ok").string()) == 0);
    CHECK(fs::exists(base / "ok" / "eigenvalues.csv"));

    CHECK(run_cli("simulate --dims 8,2,4 --scale-x -1 --out " + (base / "bad").string()) == 2);
    CHECK(run_cli("simulate --no-such-flag") == 2);
    CHECK(run_cli("moments") == 2);  // no sizes given
    CHECK(run_cli("simulate --dims 60000,100,100 --mem-cap-gb 0.25 --out " +
                  (base / "huge").string()) == 4);
    CHECK(run_cli("oracle --dims 6,6,6 --k-max 8 --out " + (base / "or").string()) == 4);

    CHECK(run_cli("mp-eval --gamma 0.5 --format json --out " + (base / "mp").string()) == 0);
    const std::string json = slurp(base / "mp" / "mp_eval_report.json");
    CHECK(json.find("\"config\"") != std::string::npos);
    CHECK(json.find("\"results\"") != std::string::npos);
    CHECK(json.find("\"timing\"") != std::string::npos);
    CHECK(json.find("\"version\"") != std::string::npos);
    fs::remove_all(base);
}

TEST_CASE("cli: rerun with different --threads is byte-identical") {
    namespace fs = std::filesystem;
    const fs::path base = fs::temp_directory_path() / "hadacov_cli_det";
    fs::remove_all(base);
    const std::string common =
        "convergence --gamma 0.5 --a 2 --n 48 --trials 3 --seed 17 --format json --out ";
    CHECK(run_cli(common + (base / "t1").string() + " --threads 1") == 0);
    CHECK(run_cli(common + (base / "t2").string() + " --threads 2") == 0);
    CHECK(slurp(base / "t1" / "convergence_report.json") ==
          slurp(base / "t2" / "convergence_report.json"));
    fs::remove_all(base);
}

}
