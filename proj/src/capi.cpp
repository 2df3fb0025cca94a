#include "radboltz.h"

#include "radboltz/cascade.hpp"
#include "radboltz/cross_section.hpp"
#include "radboltz/errors.hpp"
#include "radboltz/field.hpp"
#include "radboltz/io.hpp"
#include "radboltz/runner.hpp"
#include "radboltz/spectrum.hpp"

#include <cstdio>
#include <cstring>
#include <memory>
#include <sstream>
#include <string>

using radboltz::numerical_error;
using radboltz::parse_error;
using radboltz::quadrature_error;

struct rbz_model {
    radboltz::cross_section::SingularityModel model;
    radboltz::quadrature::QuadratureSpec quad;
};

struct rbz_tables {
    radboltz::spectrum::SpectrumTables tables;
};

struct rbz_solution {
    radboltz::cascade::ExpSumSolution solution;
};

struct rbz_run {
    radboltz::runner::RunConfig config;
    std::string log;
};

namespace {

thread_local std::string g_last_error = "no error";

void set_error(const std::string& msg) {
    g_last_error = msg;
}

// Translate C++ failures into status codes; every API body runs inside this.
template <typename F>
rbz_status guarded(F&& body) {
    try {
        return body();
    } catch (const parse_error& e) {
        set_error(e.what());
        return RBZ_ERR_CONFIG;
    } catch (const quadrature_error& e) {
        set_error(e.what());
        return RBZ_ERR_NUMERICAL;
    } catch (const numerical_error& e) {
        set_error(e.what());
        return RBZ_ERR_NUMERICAL;
    } catch (const std::domain_error& e) {
        set_error(e.what());
        return RBZ_ERR_INVALID_ARGUMENT;
    } catch (const std::invalid_argument& e) {
        set_error(e.what());
        return RBZ_ERR_INVALID_ARGUMENT;
    } catch (const std::out_of_range& e) {
        set_error(e.what());
        return RBZ_ERR_INVALID_ARGUMENT;
    } catch (const std::exception& e) {
        set_error(e.what());
        return RBZ_ERR_NUMERICAL;
    } catch (...) {
        set_error("unknown failure");
        return RBZ_ERR_NUMERICAL;
    }
}

rbz_status require(bool cond, const char* msg) {
    if (cond) return RBZ_OK;
    set_error(msg);
    return RBZ_ERR_INVALID_ARGUMENT;
}

} // namespace

extern "C" {

const char* rbz_version(void) {
    return "radboltz 1.0.0";
}

const char* rbz_status_name(rbz_status s) {
    switch (s) {
    case RBZ_OK: return "ok";
    case RBZ_ERR_INVALID_ARGUMENT: return "invalid argument";
    case RBZ_ERR_CONFIG: return "configuration error";
    case RBZ_ERR_NUMERICAL: return "numerical failure";
    case RBZ_ERR_VERIFICATION: return "verification failure";
    case RBZ_ERR_IO: return "i/o failure";
    }
    return "unknown status";
}

const char* rbz_last_error(void) {
    return g_last_error.c_str();
}

rbz_status rbz_model_create(double s, double amplitude, const char* form, rbz_model** out) {
    if (rbz_status st = require(out && form, "rbz_model_create: null argument"); st != RBZ_OK)
        return st;
    *out = nullptr;
    return guarded([&] {
        auto m = std::make_unique<rbz_model>();
        m->model.s = s;
        m->model.amplitude = amplitude;
        m->model.form = radboltz::cross_section::form_from_name(form);
        m->model.validate();
        *out = m.release();
        return RBZ_OK;
    });
}

void rbz_model_destroy(rbz_model* m) {
    delete m;
}

rbz_status rbz_model_set_tolerances(rbz_model* m, double abs_tol, double rel_tol,
                                    int max_subdivisions, double grading_exponent) {
    if (rbz_status st = require(m != nullptr, "null model"); st != RBZ_OK) return st;
    if (rbz_status st = require(abs_tol > 0 && rel_tol > 0 && max_subdivisions >= 1,
                                "tolerances must be positive");
        st != RBZ_OK)
        return st;
    m->quad.abs_tol = abs_tol;
    m->quad.rel_tol = rel_tol;
    m->quad.max_subdivisions = max_subdivisions;
    m->quad.grading_exponent = grading_exponent;
    return RBZ_OK;
}

rbz_status rbz_beta_eval(const rbz_model* m, double theta, double* out) {
    if (rbz_status st = require(m && out, "null argument"); st != RBZ_OK) return st;
    return guarded([&] {
        *out = radboltz::cross_section::beta_eval(m->model, theta);
        return RBZ_OK;
    });
}

rbz_status rbz_angular_moment(const rbz_model* m, int n, int k, double* out) {
    if (rbz_status st = require(m && out, "null argument"); st != RBZ_OK) return st;
    return guarded([&] {
        *out = radboltz::cross_section::angular_moment(m->model, n, k, m->quad);
        return RBZ_OK;
    });
}

rbz_status rbz_regularized_moment(const rbz_model* m, int n, double* out) {
    if (rbz_status st = require(m && out, "null argument"); st != RBZ_OK) return st;
    return guarded([&] {
        *out = radboltz::cross_section::regularized_moment(m->model, n, m->quad);
        return RBZ_OK;
    });
}

rbz_status rbz_regularized_cos_moment(const rbz_model* m, int n, double* out) {
    if (rbz_status st = require(m && out, "null argument"); st != RBZ_OK) return st;
    return guarded([&] {
        *out = radboltz::cross_section::regularized_cos_moment(m->model, n, m->quad);
        return RBZ_OK;
    });
}

rbz_status rbz_tables_build(const rbz_model* m, int truncation, rbz_tables** out) {
    if (rbz_status st = require(m && out, "null argument"); st != RBZ_OK) return st;
    *out = nullptr;
    return guarded([&] {
        auto t = std::make_unique<rbz_tables>(
            rbz_tables{radboltz::spectrum::build_tables(m->model, truncation, m->quad)});
        *out = t.release();
        return RBZ_OK;
    });
}

void rbz_tables_destroy(rbz_tables* t) {
    delete t;
}

rbz_status rbz_tables_truncation(const rbz_tables* t, int* out) {
    if (rbz_status st = require(t && out, "null argument"); st != RBZ_OK) return st;
    *out = t->tables.truncation();
    return RBZ_OK;
}

rbz_status rbz_tables_lambda(const rbz_tables* t, int n, double* out) {
    if (rbz_status st = require(t && out, "null argument"); st != RBZ_OK) return st;
    return guarded([&] {
        *out = t->tables.lambda(n);
        return RBZ_OK;
    });
}

rbz_status rbz_tables_alpha(const rbz_tables* t, int n, int m, double* out) {
    if (rbz_status st = require(t && out, "null argument"); st != RBZ_OK) return st;
    return guarded([&] {
        *out = t->tables.alpha(n, m);
        return RBZ_OK;
    });
}

rbz_status rbz_tables_coupling(const rbz_tables* t, int k, int l, double* out) {
    if (rbz_status st = require(t && out, "null argument"); st != RBZ_OK) return st;
    return guarded([&] {
        *out = t->tables.coupling(k, l);
        return RBZ_OK;
    });
}

rbz_status rbz_tables_write_csv(const rbz_tables* t, const char* path) {
    if (rbz_status st = require(t && path, "null argument"); st != RBZ_OK) return st;
    return guarded([&] {
        radboltz::io::write_file(path, radboltz::io::tables_to_csv(t->tables));
        return RBZ_OK;
    });
}

rbz_status rbz_tables_write_snapshot(const rbz_tables* t, const char* path) {
    if (rbz_status st = require(t && path, "null argument"); st != RBZ_OK) return st;
    return guarded([&] {
        radboltz::io::write_file(
            path, radboltz::io::emit_structured(radboltz::io::tables_to_snapshot(t->tables)));
        return RBZ_OK;
    });
}

rbz_status rbz_tables_load_snapshot(const char* path, rbz_tables** out) {
    if (rbz_status st = require(path && out, "null argument"); st != RBZ_OK) return st;
    *out = nullptr;
    return guarded([&] {
        auto node = radboltz::io::parse_structured(radboltz::io::read_file(path), path);
        auto t = std::make_unique<rbz_tables>(rbz_tables{radboltz::io::tables_from_snapshot(node)});
        *out = t.release();
        return RBZ_OK;
    });
}

rbz_status rbz_tables_no_resonance(const rbz_tables* t, int jmax, double* min_margin,
                                   int* violations) {
    if (rbz_status st = require(t && min_margin && violations, "null argument"); st != RBZ_OK)
        return st;
    return guarded([&] {
        auto rep = radboltz::spectrum::no_resonance_check(t->tables, jmax);
        *min_margin = rep.min_margin;
        *violations = static_cast<int>(rep.violations.size());
        return RBZ_OK;
    });
}

rbz_status rbz_tables_fit_exponent(const rbz_tables* t, int k_min, int k_max, double* s_est,
                                   double* residual) {
    if (rbz_status st = require(t && s_est && residual, "null argument"); st != RBZ_OK) return st;
    return guarded([&] {
        auto fit = radboltz::spectrum::asymptotic_exponent_fit(t->tables, k_min, k_max);
        *s_est = fit.s_est;
        *residual = fit.residual;
        return RBZ_OK;
    });
}

rbz_status rbz_tables_coupling_bound(const rbz_tables* t, double* c_emp, int* argmax_n,
                                     int* argmax_m) {
    if (rbz_status st = require(t && c_emp && argmax_n && argmax_m, "null argument"); st != RBZ_OK)
        return st;
    return guarded([&] {
        auto rep = radboltz::spectrum::coupling_bound_check(t->tables);
        *c_emp = rep.c_emp;
        *argmax_n = rep.argmax_n;
        *argmax_m = rep.argmax_m;
        return RBZ_OK;
    });
}

rbz_status rbz_solve_closed_form(const rbz_tables* t, const double* b0, int len,
                                 rbz_solution** out) {
    if (rbz_status st = require(t && b0 && out && len > 0, "null or empty argument"); st != RBZ_OK)
        return st;
    *out = nullptr;
    return guarded([&] {
        auto init = radboltz::cascade::InitialData::from_coefficients(
            std::vector<double>(b0, b0 + len));
        auto s = std::make_unique<rbz_solution>(
            rbz_solution{radboltz::cascade::solve_closed_form(t->tables, init)});
        *out = s.release();
        return RBZ_OK;
    });
}

void rbz_solution_destroy(rbz_solution* s) {
    delete s;
}

rbz_status rbz_solution_eval(const rbz_solution* s, double t, double* out, int len) {
    if (rbz_status st = require(s && out && len > 0, "null or empty argument"); st != RBZ_OK)
        return st;
    return guarded([&] {
        auto state = radboltz::cascade::evaluate(s->solution, t);
        if (static_cast<int>(state.b.size()) != len) {
            set_error("rbz_solution_eval: output length must equal truncation + 1");
            return RBZ_ERR_INVALID_ARGUMENT;
        }
        std::memcpy(out, state.b.data(), state.b.size() * sizeof(double));
        return RBZ_OK;
    });
}

rbz_status rbz_solution_term_count(const rbz_solution* s, int mode, int* out) {
    if (rbz_status st = require(s && out, "null argument"); st != RBZ_OK) return st;
    return guarded([&] {
        *out = static_cast<int>(s->solution.mode(mode).terms.size());
        return RBZ_OK;
    });
}

rbz_status rbz_solution_closed_form(const rbz_solution* s, int* out) {
    if (rbz_status st = require(s && out, "null argument"); st != RBZ_OK) return st;
    *out = s->solution.all_closed_form() ? 1 : 0;
    return RBZ_OK;
}

rbz_status rbz_solve_numeric(const rbz_tables* t, const double* b0, int len,
                             const double* t_grid, int nt, double rel_tol, double abs_tol,
                             double* out) {
    if (rbz_status st = require(t && b0 && t_grid && out && len > 0 && nt > 0, "null argument");
        st != RBZ_OK)
        return st;
    return guarded([&] {
        auto init = radboltz::cascade::InitialData::from_coefficients(
            std::vector<double>(b0, b0 + len));
        radboltz::cascade::StepControl ctl;
        if (rel_tol > 0) ctl.rel_tol = rel_tol;
        if (abs_tol > 0) ctl.abs_tol = abs_tol;
        auto traj = radboltz::cascade::solve_numeric(
            t->tables, init, std::vector<double>(t_grid, t_grid + nt), ctl);
        for (int i = 0; i < nt; ++i)
            std::memcpy(out + static_cast<size_t>(i) * len, traj[static_cast<size_t>(i)].b.data(),
                        static_cast<size_t>(len) * sizeof(double));
        return RBZ_OK;
    });
}

rbz_status rbz_spectral_norm(const rbz_tables* t, const double* b, int len, int kind,
                             double time, double s_half, double* out) {
    if (rbz_status st = require(t && b && out && len > 0, "null argument"); st != RBZ_OK) return st;
    return guarded([&] {
        radboltz::field::NormKind nk;
        switch (kind) {
        case 0: nk = radboltz::field::NormKind::l2(); break;
        case 1: nk = radboltz::field::NormKind::weighted_semigroup(time); break;
        case 2: nk = radboltz::field::NormKind::frac_sobolev(s_half); break;
        case 3: nk = radboltz::field::NormKind::semigroup_frac_sobolev(time, s_half); break;
        default:
            set_error("rbz_spectral_norm: kind must be 0..3");
            return RBZ_ERR_INVALID_ARGUMENT;
        }
        *out = radboltz::field::spectral_norm(std::vector<double>(b, b + len), nk, t->tables);
        return RBZ_OK;
    });
}

rbz_status rbz_run_create(const char* config_path, rbz_run** out) {
    if (rbz_status st = require(out != nullptr, "null output"); st != RBZ_OK) return st;
    *out = nullptr;
    return guarded([&] {
        auto r = std::make_unique<rbz_run>();
        if (config_path && config_path[0] != '\0')
            r->config = radboltz::runner::RunConfig::from_file(config_path);
        *out = r.release();
        return RBZ_OK;
    });
}

void rbz_run_destroy(rbz_run* r) {
    delete r;
}

rbz_status rbz_run_set(rbz_run* r, const char* key, const char* value) {
    if (rbz_status st = require(r && key && value, "null argument"); st != RBZ_OK) return st;
    return guarded([&] {
        r->config.apply(key, value);
        r->config.validate();
        return RBZ_OK;
    });
}

rbz_status rbz_run_spectrum(rbz_run* r, const char* out_dir) {
    if (rbz_status st = require(r && out_dir, "null argument"); st != RBZ_OK) return st;
    return guarded([&] {
        std::ostringstream log;
        radboltz::runner::run_spectrum(r->config, out_dir, log);
        r->log = log.str();
        return RBZ_OK;
    });
}

rbz_status rbz_run_solve(rbz_run* r, const char* out_dir) {
    if (rbz_status st = require(r && out_dir, "null argument"); st != RBZ_OK) return st;
    return guarded([&] {
        std::ostringstream log;
        radboltz::runner::run_solve(r->config, out_dir, log);
        r->log = log.str();
        return RBZ_OK;
    });
}

rbz_status rbz_run_verify(rbz_run* r, const char* out_dir, int strict,
                          const char* tables_snapshot, int* failures) {
    if (rbz_status st = require(r && out_dir, "null argument"); st != RBZ_OK) return st;
    return guarded([&] {
        std::ostringstream log;
        int rc = radboltz::runner::run_verify(r->config, out_dir, strict != 0,
                                              tables_snapshot ? tables_snapshot : "", log);
        r->log = log.str();
        if (failures) {
            int count = 0;
            // recover the failure count from the log's trailing summary
            // (cheap; the structured report on disk carries the full detail)
            auto pos = r->log.rfind("verification: ");
            if (pos != std::string::npos) {
                int passed = 0, total = 0;
                if (std::sscanf(r->log.c_str() + pos, "verification: %d/%d", &passed, &total) == 2)
                    count = total - passed;
            }
            *failures = count;
        }
        if (rc == radboltz::runner::exit_verification_failed) {
            set_error("verification failed under strict mode");
            return RBZ_ERR_VERIFICATION;
        }
        return RBZ_OK;
    });
}

rbz_status rbz_run_report(const char* run_dir, char* buf, size_t buf_len) {
    if (rbz_status st = require(run_dir && buf && buf_len > 0, "null argument"); st != RBZ_OK)
        return st;
    return guarded([&] {
        std::ostringstream out;
        int rc = radboltz::runner::run_report(run_dir, out);
        std::string text = out.str();
        std::size_t n = std::min(buf_len - 1, text.size());
        std::memcpy(buf, text.data(), n);
        buf[n] = '\0';
        if (rc == radboltz::runner::exit_config_error) {
            set_error(text.empty() ? "report failed" : text);
            return RBZ_ERR_CONFIG;
        }
        return RBZ_OK;
    });
}

const char* rbz_run_log(const rbz_run* r) {
    return r ? r->log.c_str() : "";
}

} // extern "C"
