// Acceptance suite: one pass/fail line per criterion, exercised directly
// against the core library with independent closed-form oracles wherever one
// exists.  Exit status is the number of failed criteria.
#include "radboltz/cascade.hpp"
#include "radboltz/cross_section.hpp"
#include "radboltz/field.hpp"
#include "radboltz/fourier.hpp"
#include "radboltz/rng.hpp"
#include "radboltz/specfun.hpp"
#include "radboltz/spectrum.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

using namespace radboltz;
using cascade::InitialData;
using cross_section::Form;
using cross_section::QuadratureSpec;
using cross_section::SingularityModel;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& what) {
    std::printf("[%s] criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion, what.c_str());
    if (!pass) ++failures;
}

void info(const std::string& what) {
    std::printf("[info]              %s\n", what.c_str());
}

double oracle_sine_lambda(double s, int n) {
    double acc = 0.0;
    for (int l = 0; l < n; ++l) acc += specfun::incomplete_beta(1.0 - s, l + 1.0, 0.5);
    return acc - specfun::incomplete_beta(n - s, 1.0, 0.5);
}

double oracle_sine_alpha(double s, int n, int m) {
    double half_log_binom =
        0.5 * (specfun::log_gamma(2.0 * (n + m) + 1.0) - specfun::log_gamma(2.0 * n + 1.0) -
               specfun::log_gamma(2.0 * m + 1.0));
    return std::exp(half_log_binom) * specfun::incomplete_beta(n - s, m + 1.0, 0.5);
}

std::vector<double> random_null_perp(std::mt19937_64& gen, int truncation, double norm) {
    std::vector<double> b(static_cast<size_t>(truncation) + 1, 0.0);
    double acc = 0.0;
    for (int n = 2; n <= truncation; ++n) {
        b[static_cast<size_t>(n)] = rng::standard_normal(gen);
        acc += b[static_cast<size_t>(n)] * b[static_cast<size_t>(n)];
    }
    for (double& x : b) x *= norm / std::sqrt(acc);
    return b;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

} // namespace

int main() {
    const QuadratureSpec quad;
    const SingularityModel base{0.5, 1.0, Form::PowerLawSine};

    // 1. lowest eigenvalue vanishes; empty product coefficient is exact zero
    {
        double worst = 0.0;
        for (Form form : {Form::PowerLawSine, Form::PowerLawTheta}) {
            SingularityModel m{0.5, 1.0, form};
            worst = std::max(worst, std::fabs(spectrum::lambda_sequence(m, 4, quad)[1]));
        }
        auto t = spectrum::build_tables(base, 4, quad);
        bool pass = worst < 1e-12 && t.alpha(0, 0) == 0.0;
        report(1, pass, "lambda(2) = 0 within 1e-12 both forms (max " + fmt(worst) +
                            "); alpha(0,0) exactly 0");
    }

    // 2. strict subadditivity of the eigenvalues
    {
        bool pass = true;
        double min_margin = 1e300;
        for (Form form : {Form::PowerLawSine, Form::PowerLawTheta})
            for (double s : {0.25, 0.5, 0.75}) {
                SingularityModel m{s, 1.0, form};
                auto lam = spectrum::lambda_sequence(m, 60, quad);
                auto rep = spectrum::no_resonance_check(lam, 30);
                pass = pass && rep.clean() && rep.min_margin > 0.0 && lam[4] < 2.0 * lam[2];
                min_margin = std::min(min_margin, rep.min_margin);
            }
        report(2, pass, "no resonances, j,k <= 30, both forms, s in {0.25,0.5,0.75} "
                        "(min margin " + fmt(min_margin) + ")");
    }

    // 3. sine-form tables against the incomplete-beta closed forms
    {
        double worst = 0.0;
        for (double s : {0.25, 0.5, 0.75}) {
            SingularityModel m{s, 1.0, Form::PowerLawSine};
            auto t = spectrum::build_tables(m, 32, quad);
            for (int n = 2; n <= 32; ++n)
                worst = std::max(worst, std::fabs(t.lambda(n) - oracle_sine_lambda(s, n)) /
                                            oracle_sine_lambda(s, n));
            for (int n = 1; n <= 32; ++n)
                for (int k = 0; n + k <= 32; ++k)
                    worst = std::max(worst, std::fabs(t.alpha(n, k) - oracle_sine_alpha(s, n, k)) /
                                                oracle_sine_alpha(s, n, k));
        }
        report(3, worst < 1e-8,
               "all lambda and alpha entries (n+m <= 32) match the closed forms to 1e-8 "
               "(max rel " + fmt(worst) + ")");
    }

    // 4. eigenvalue growth exponent from the log-log fit
    {
        bool pass = true;
        std::string detail;
        struct Case {
            Form form;
            double s;
        };
        for (const Case& c : {Case{Form::PowerLawSine, 0.5}, Case{Form::PowerLawSine, 0.75},
                              Case{Form::PowerLawTheta, 0.5}, Case{Form::PowerLawTheta, 0.75}}) {
            SingularityModel m{c.s, 1.0, c.form};
            auto lam = spectrum::lambda_sequence(m, 205, quad);
            auto fit = spectrum::fit_exponent(lam, 50, 200);
            pass = pass && std::fabs(fit.s_est - c.s) <= 0.05;
            detail += fmt(fit.s_est) + " ";
        }
        report(4, pass, "window [50,200] recovers s within 0.05 for s in {0.5,0.75}, both forms "
                        "(estimates " + detail + ")");
        {
            SingularityModel m{0.25, 1.0, Form::PowerLawSine};
            auto fit = spectrum::fit_exponent(spectrum::lambda_sequence(m, 205, quad), 50, 200);
            info("s = 0.25 at this window gives " + fmt(fit.s_est) +
                 " (slow-decaying offset in the eigenvalues; a [2000,8000] window recovers "
                 "0.25 within 0.05 -- see the spectrum unit tests)");
        }
    }

    // 5. cascade exactness on the first modes
    auto tables16 = spectrum::build_tables(base, 16, quad);
    {
        std::vector<double> b0(17, 0.0);
        b0[2] = 0.04;
        b0[3] = -0.03;
        auto sol = cascade::solve_closed_form(tables16, InitialData::from_coefficients(b0));
        double worst = 0.0;
        for (double t : {0.0, 0.5, 1.0, 2.5, 5.0}) {
            auto st = cascade::evaluate(sol, t);
            double e2 = b0[2] * std::exp(-tables16.lambda(2) * t);
            double e3 = b0[3] * std::exp(-tables16.lambda(3) * t);
            worst = std::max(worst, std::fabs(st.b[2] - e2) / std::fabs(e2));
            worst = std::max(worst, std::fabs(st.b[3] - e3) / std::fabs(e3));
        }
        bool pass23 = worst < 1e-10;

        std::vector<double> c0(17, 0.0);
        c0[2] = 0.05;
        c0[4] = 0.01;
        auto sol4 = cascade::solve_closed_form(tables16, InitialData::from_coefficients(c0));
        double lam4 = tables16.lambda(2), lam8 = tables16.lambda(4);
        double kappa = 0.6 * std::sqrt(70.0) * cross_section::angular_moment(base, 2, 2, quad) *
                       c0[2] * c0[2] / (lam8 - 2.0 * lam4);
        const auto& m4 = sol4.mode(4);
        bool pass4 = m4.terms.size() == 2 &&
                     std::fabs(m4.terms[1].coeff - kappa) / std::fabs(kappa) < 1e-8 &&
                     std::fabs(m4.terms[0].coeff - (c0[4] - kappa)) / std::fabs(c0[4] - kappa) <
                         1e-8 &&
                     std::fabs(m4.terms[1].rate - 2.0 * lam4) / (2.0 * lam4) < 1e-12 &&
                     std::fabs(m4.terms[0].rate - lam8) / lam8 < 1e-12;

        std::vector<double> d0(17, 0.0);
        d0[6] = 0.02;
        auto sol6 = cascade::solve_closed_form(tables16, InitialData::from_coefficients(d0));
        bool pass_single = sol6.mode(6).terms.size() == 1 &&
                           sol6.mode(6).terms[0].coeff == d0[6] &&
                           sol6.mode(6).terms[0].rate == tables16.lambda(6);

        report(5, pass23 && pass4 && pass_single,
               "modes 2,3 single-exponential to 1e-10 (max rel " + fmt(worst) +
                   "); mode-4 two-exponential display to 1e-8; single-mode data stays a "
                   "single term");
    }

    // 6 + 7. cross validation, decay bound and weighted-energy monotonicity
    auto tables32 = spectrum::build_tables(base, 32, quad);
    {
        std::mt19937_64 gen(20240u);
        std::vector<double> cross_grid, decay_grid;
        for (int i = 0; i <= 10; ++i) cross_grid.push_back(0.5 * i);
        for (int i = 0; i <= 20; ++i) decay_grid.push_back(0.5 * i);
        double worst_cross = 0.0, worst_ratio = 0.0, worst_increase = 0.0;
        const double norm0 = 0.05;
        cascade::StepControl ctl;
        ctl.rel_tol = 1e-12;
        ctl.abs_tol = 1e-16;
        for (int trial = 0; trial < 20; ++trial) {
            auto b0 = random_null_perp(gen, 32, norm0);
            InitialData init = InitialData::from_coefficients(b0);
            auto sol = cascade::solve_closed_form(tables32, init);
            auto numeric = cascade::solve_numeric(tables32, init, cross_grid, ctl);
            for (size_t gi = 0; gi < cross_grid.size(); ++gi) {
                auto closed = cascade::evaluate(sol, cross_grid[gi]);
                double dsq = 0.0, rsq = 0.0;
                for (size_t n = 0; n < closed.b.size(); ++n) {
                    double d = closed.b[n] - numeric[gi].b[n];
                    dsq += d * d;
                    rsq += closed.b[n] * closed.b[n];
                }
                worst_cross = std::max(worst_cross, std::sqrt(dsq / rsq));
            }
            std::vector<cascade::ModeCoefficients> traj;
            for (double t : decay_grid) traj.push_back(cascade::evaluate(sol, t));
            auto decay = field::decay_certificate(traj, tables32, 0.5, norm0);
            worst_ratio = std::max(worst_ratio, decay.max_ratio);
            auto mono = field::lyapunov_monotonicity(traj, tables32);
            worst_increase = std::max(worst_increase, mono.max_increase / mono.values.front());
        }
        report(6, worst_cross < 1e-6,
               "20 random runs, N=32: closed form vs adaptive integrator within 1e-6 "
               "(max rel " + fmt(worst_cross) + ")");
        bool decay_pass = worst_ratio <= 1.0 + 1e-12 && worst_increase <= 1e-10;
        report(7, decay_pass, "decay bound at delta=0.5 over t in [0,10] (max ratio " +
                                  fmt(worst_ratio) + "); weighted energy nonincreasing (max rel "
                                  "increase " + fmt(worst_increase) + ")");
    }

    // 8. frequency-side identities
    {
        std::vector<double> rho_grid = {0.25, 0.5, 1.0, 2.0, 4.0};
        double worst_prod = 0.0;
        for (int n = 0; n <= 12; ++n)
            for (int m = (n == 0 ? 1 : 0); n + m <= 12; ++m)
                worst_prod = std::max(
                    worst_prod, fourier::product_identity_check(tables32, n, m, rho_grid, quad));
        double worst_link = 0.0;
        for (int n = 0; n <= 20; ++n)
            worst_link = std::max(worst_link, fourier::hermite_link_check(
                                                  n, fourier::hermite_link_default_grid(n), quad));
        double worst_maxw = 0.0;
        auto maxwellian = fourier::FourierProfile::mode(0);
        for (double rho : {0.0, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0})
            worst_maxw = std::max(worst_maxw, std::fabs(fourier::bobylev_apply(
                                                  base, maxwellian, maxwellian, rho, quad)));
        bool pass = worst_prod < 1e-6 && worst_link < 1e-6 && worst_maxw < 1e-10;
        report(8, pass, "product identities n+m<=12 (max rel " + fmt(worst_prod) +
                            "); 1D-radial transform link n<=20 (max rel " + fmt(worst_link) +
                            "); Maxwellian stationarity (max " + fmt(worst_maxw) + ")");
    }

    // 9. gain and loss parts recombine into the eigenvalue table
    {
        double worst = 0.0;
        for (int n = 2; n <= 32; ++n) {
            double gain = cross_section::regularized_cos_moment(base, n, quad);
            double loss = cross_section::angular_moment(base, n, 0, quad);
            worst = std::max(worst,
                             std::fabs((gain - loss) - tables32.lambda(n)) / tables32.lambda(n));
        }
        report(9, worst < 1e-8, "split-operator eigenvalues recompose the table to 1e-8 "
                                "(max rel " + fmt(worst) + ")");
    }

    // 10. coefficient-decay smoothing certificate
    {
        std::vector<double> b0(33, 0.0);
        double acc = 0.0;
        for (int n = 2; n <= 32; ++n) {
            b0[static_cast<size_t>(n)] = 1.0 / (n + 1.0);
            acc += b0[static_cast<size_t>(n)] * b0[static_cast<size_t>(n)];
        }
        for (double& x : b0) x *= 0.05 / std::sqrt(acc);
        auto sol = cascade::solve_closed_form(tables32, InitialData::from_coefficients(b0));
        std::vector<double> cs;
        for (double t : {0.25, 0.5, 1.0})
            cs.push_back(field::gelfand_shilov_diagnostic(cascade::evaluate(sol, t), tables32).c);
        bool pass = cs[0] > 0.0 && cs[1] > cs[0] && cs[2] > cs[1];
        report(10, pass, "fitted coefficient-decay rate positive and increasing: c(0.25)=" +
                             fmt(cs[0]) + ", c(0.5)=" + fmt(cs[1]) + ", c(1.0)=" + fmt(cs[2]));
    }

    // 11. structural invariants
    {
        std::mt19937_64 gen(7171u);
        auto b0 = random_null_perp(gen, 32, 0.05);
        InitialData init = InitialData::from_coefficients(b0);
        auto numeric = cascade::solve_numeric(tables32, init, {0.0, 1.0, 2.5, 5.0});
        double worst01 = 0.0;
        for (const auto& st : numeric)
            worst01 = std::max({worst01, std::fabs(st.b[0]), std::fabs(st.b[1])});

        auto sol = cascade::solve_closed_form(tables32, init);
        bool rates_ok = true;
        for (int n = 2; n <= 32; ++n)
            for (const auto& term : sol.mode(n).terms)
                rates_ok = rates_ok && term.rate >= tables32.lambda(n) * (1.0 - 1e-12);

        std::vector<double> low16(17, 0.0), low32(33, 0.0);
        low16[2] = low32[2] = 0.02;
        low16[3] = low32[3] = 0.015;
        low16[5] = low32[5] = 0.01;
        low16[8] = low32[8] = 0.005;
        auto s16 = cascade::solve_closed_form(tables16, InitialData::from_coefficients(low16));
        auto s32 = cascade::solve_closed_form(tables32, InitialData::from_coefficients(low32));
        double worst_trunc = 0.0;
        for (double t : {0.0, 1.0, 2.5, 5.0}) {
            auto a = cascade::evaluate(s16, t);
            auto b = cascade::evaluate(s32, t);
            for (int n = 0; n <= 8; ++n)
                worst_trunc = std::max(worst_trunc, std::fabs(a.b[static_cast<size_t>(n)] -
                                                              b.b[static_cast<size_t>(n)]));
        }
        bool pass = worst01 <= 1e-14 && rates_ok && worst_trunc <= 1e-12;
        report(11, pass, "b0,b1 stay zero (max " + fmt(worst01) +
                             "); every rate dominates the mode eigenvalue; low modes stable "
                             "under N=16 -> 32 (max diff " + fmt(worst_trunc) + ")");
    }

    std::printf("acceptance: %d criterion(s) failed\n", failures);
    return failures;
}
