// Exercises the shared-library C interface end to end: handles, error codes,
// numeric surface, file exchange, and the orchestrated runs.
#include "radboltz.h"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

static int failures = 0;

#define CHECK_TRUE(cond)                                                                       \
    do {                                                                                       \
        if (!(cond)) {                                                                         \
            std::printf("FAILED %s:%d: %s\n", __FILE__, __LINE__, #cond);                      \
            ++failures;                                                                        \
        }                                                                                      \
    } while (0)

#define CHECK_OK(call) CHECK_TRUE((call) == RBZ_OK)

static bool close_rel(double a, double b, double tol) {
    return std::fabs(a - b) <= tol * std::max({std::fabs(a), std::fabs(b), 1e-300});
}

static std::string work_dir(const char* tag) {
    auto dir = std::filesystem::temp_directory_path() / (std::string("radboltz_capi_") + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir.string();
}

int main() {
    CHECK_TRUE(std::strlen(rbz_version()) > 0);
    CHECK_TRUE(std::strcmp(rbz_status_name(RBZ_OK), "ok") == 0);

    // --- model construction and argument validation
    rbz_model* model = nullptr;
    CHECK_TRUE(rbz_model_create(0.5, 1.0, "no-such-form", &model) == RBZ_ERR_INVALID_ARGUMENT);
    CHECK_TRUE(std::strlen(rbz_last_error()) > 0);
    CHECK_TRUE(rbz_model_create(1.5, 1.0, "power-law-sine", &model) == RBZ_ERR_INVALID_ARGUMENT);
    CHECK_OK(rbz_model_create(0.5, 1.0, "power-law-sine", &model));
    CHECK_TRUE(model != nullptr);

    double beta = 0.0;
    CHECK_OK(rbz_beta_eval(model, 0.5, &beta));
    CHECK_TRUE(close_rel(beta, std::pow(std::sin(0.5), -2.0) * std::cos(0.5), 1e-12));
    CHECK_TRUE(rbz_beta_eval(model, 0.0, &beta) == RBZ_ERR_INVALID_ARGUMENT);

    // moments: the sine form has the incomplete-beta closed form; spot value
    // Lambda(1,0) = B_{1/2}(1-s, 1) = sqrt(2) at s = 1/2
    double lam10 = 0.0;
    CHECK_OK(rbz_angular_moment(model, 1, 0, &lam10));
    CHECK_TRUE(close_rel(lam10, std::sqrt(2.0), 1e-10));
    double reg1 = -1.0;
    CHECK_OK(rbz_regularized_moment(model, 1, &reg1));
    CHECK_TRUE(reg1 == 0.0);
    double regcos1 = 0.0;
    CHECK_OK(rbz_regularized_cos_moment(model, 1, &regcos1));
    CHECK_TRUE(close_rel(regcos1, lam10, 1e-10));
    CHECK_TRUE(rbz_angular_moment(model, 0, 1, &lam10) == RBZ_ERR_INVALID_ARGUMENT);

    // --- tables
    rbz_tables* tables = nullptr;
    CHECK_OK(rbz_tables_build(model, 16, &tables));
    int trunc = 0;
    CHECK_OK(rbz_tables_truncation(tables, &trunc));
    CHECK_TRUE(trunc == 16);
    double lam2 = 1.0, a00 = 1.0, w22 = 0.0, a22 = 0.0;
    CHECK_OK(rbz_tables_lambda(tables, 1, &lam2));
    CHECK_TRUE(std::fabs(lam2) < 1e-12);
    CHECK_OK(rbz_tables_alpha(tables, 0, 0, &a00));
    CHECK_TRUE(a00 == 0.0);
    CHECK_OK(rbz_tables_alpha(tables, 2, 2, &a22));
    CHECK_OK(rbz_tables_coupling(tables, 2, 2, &w22));
    CHECK_TRUE(close_rel(w22, 0.6 * a22, 1e-14));
    CHECK_TRUE(rbz_tables_lambda(tables, 99, &lam2) == RBZ_ERR_INVALID_ARGUMENT);

    double margin = 0.0;
    int violations = -1;
    CHECK_OK(rbz_tables_no_resonance(tables, 8, &margin, &violations));
    CHECK_TRUE(violations == 0);
    CHECK_TRUE(margin > 0.0);

    double c_emp = 0.0;
    int an = 0, am = 0;
    CHECK_OK(rbz_tables_coupling_bound(tables, &c_emp, &an, &am));
    CHECK_TRUE(c_emp > 0.0 && an >= 1);

    // exponent fit needs a long table
    rbz_tables* tall = nullptr;
    CHECK_OK(rbz_tables_build(model, 205, &tall));
    double s_est = 0.0, residual = 0.0;
    CHECK_OK(rbz_tables_fit_exponent(tall, 50, 200, &s_est, &residual));
    CHECK_TRUE(std::fabs(s_est - 0.5) < 0.05);
    rbz_tables_destroy(tall);

    // --- closed-form solve and evaluation
    std::vector<double> b0(17, 0.0);
    b0[2] = 0.05;
    rbz_solution* sol = nullptr;
    CHECK_OK(rbz_solve_closed_form(tables, b0.data(), 17, &sol));
    int closed = 0, terms = 0;
    CHECK_OK(rbz_solution_closed_form(sol, &closed));
    CHECK_TRUE(closed == 1);
    CHECK_OK(rbz_solution_term_count(sol, 2, &terms));
    CHECK_TRUE(terms == 1);
    double lam_2 = 0.0;
    CHECK_OK(rbz_tables_lambda(tables, 2, &lam_2));
    std::vector<double> bt(17, 0.0);
    CHECK_OK(rbz_solution_eval(sol, 1.25, bt.data(), 17));
    CHECK_TRUE(close_rel(bt[2], 0.05 * std::exp(-lam_2 * 1.25), 1e-12));
    CHECK_TRUE(bt[0] == 0.0 && bt[1] == 0.0);

    // data outside the admissible subspace is rejected with a clear status
    std::vector<double> bad = b0;
    bad[0] = 0.2;
    rbz_solution* nosol = nullptr;
    CHECK_TRUE(rbz_solve_closed_form(tables, bad.data(), 17, &nosol) ==
               RBZ_ERR_INVALID_ARGUMENT);
    CHECK_TRUE(nosol == nullptr);

    // --- numeric trajectory matches the closed form
    std::vector<double> grid = {0.0, 0.5, 1.25};
    std::vector<double> out(grid.size() * 17, 0.0);
    CHECK_OK(rbz_solve_numeric(tables, b0.data(), 17, grid.data(),
                               static_cast<int>(grid.size()), 1e-12, 1e-16, out.data()));
    for (size_t gi = 0; gi < grid.size(); ++gi) {
        std::vector<double> cl(17, 0.0);
        CHECK_OK(rbz_solution_eval(sol, grid[gi], cl.data(), 17));
        for (int n = 0; n < 17; ++n) {
            double a = cl[static_cast<size_t>(n)], b = out[gi * 17 + static_cast<size_t>(n)];
            CHECK_TRUE(std::fabs(a - b) <= 1e-9 * std::max(1e-4, std::fabs(a)));
        }
    }

    // --- weighted norms
    double norm = 0.0;
    CHECK_OK(rbz_spectral_norm(tables, b0.data(), 17, 0, 0.0, 0.0, &norm));
    CHECK_TRUE(close_rel(norm, 0.05, 1e-14));
    CHECK_OK(rbz_spectral_norm(tables, b0.data(), 17, 1, 2.0, 0.0, &norm));
    CHECK_TRUE(close_rel(norm, 0.05 * std::exp(lam_2), 1e-12));
    CHECK_OK(rbz_spectral_norm(tables, b0.data(), 17, 2, 0.0, 0.25, &norm));
    CHECK_TRUE(close_rel(norm, 0.05 * std::pow(5.5, 0.25), 1e-12));
    CHECK_TRUE(rbz_spectral_norm(tables, b0.data(), 17, 9, 0.0, 0.0, &norm) ==
               RBZ_ERR_INVALID_ARGUMENT);

    // --- snapshot exchange
    std::string dir = work_dir("tables");
    std::string snap = dir + "/tables.txt";
    std::string csv = dir + "/tables.csv";
    CHECK_OK(rbz_tables_write_snapshot(tables, snap.c_str()));
    CHECK_OK(rbz_tables_write_csv(tables, csv.c_str()));
    rbz_tables* loaded = nullptr;
    CHECK_OK(rbz_tables_load_snapshot(snap.c_str(), &loaded));
    double lam_l = 0.0;
    CHECK_OK(rbz_tables_lambda(loaded, 7, &lam_l));
    double lam_o = 0.0;
    CHECK_OK(rbz_tables_lambda(tables, 7, &lam_o));
    CHECK_TRUE(lam_l == lam_o);
    rbz_tables_destroy(loaded);
    CHECK_TRUE(rbz_tables_load_snapshot((dir + "/missing.txt").c_str(), &loaded) ==
               RBZ_ERR_CONFIG);

    // --- orchestrated runs
    std::string run_out = work_dir("runs");
    std::string cfg_path = run_out + "/run.cfg";
    {
        std::FILE* f = std::fopen(cfg_path.c_str(), "w");
        std::fputs("truncation = 12\ninit.kind = mode\ninit.mode = 2\ninit.amplitude = 0.05\n"
                   "time.t_end = 2\ntime.points = 5\n",
                   f);
        std::fclose(f);
    }
    rbz_run* run = nullptr;
    CHECK_OK(rbz_run_create(cfg_path.c_str(), &run));
    CHECK_TRUE(rbz_run_set(run, "bogus", "1") == RBZ_ERR_CONFIG);
    CHECK_OK(rbz_run_set(run, "seed", "7"));
    CHECK_OK(rbz_run_spectrum(run, (run_out + "/spec").c_str()));
    CHECK_TRUE(std::filesystem::exists(run_out + "/spec/spectrum.csv"));
    CHECK_OK(rbz_run_solve(run, (run_out + "/solve").c_str()));
    CHECK_TRUE(std::filesystem::exists(run_out + "/solve/trajectory.csv"));
    CHECK_TRUE(std::strlen(rbz_run_log(run)) > 0);

    int vfail = -1;
    CHECK_OK(rbz_run_verify(run, (run_out + "/verify").c_str(), 0, snap.c_str(), &vfail));
    CHECK_TRUE(vfail == 0);

    char buf[4096];
    CHECK_OK(rbz_run_report((run_out + "/solve").c_str(), buf, sizeof(buf)));
    CHECK_TRUE(std::strstr(buf, "decay bound") != nullptr);
    CHECK_TRUE(rbz_run_report((run_out + "/nowhere").c_str(), buf, sizeof(buf)) ==
               RBZ_ERR_CONFIG);

    rbz_run_destroy(run);
    rbz_solution_destroy(sol);
    rbz_tables_destroy(tables);
    rbz_model_destroy(model);

    if (failures == 0) std::printf("capi: all checks passed\n");
    return failures == 0 ? 0 : 1;
}
