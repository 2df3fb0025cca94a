#include "radboltz/cascade.hpp"
#include "radboltz/errors.hpp"
#include "radboltz/quadrature.hpp"
#include "radboltz/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace radboltz::cascade {

namespace {

double l2_norm(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return std::sqrt(acc);
}

} // namespace

InitialData InitialData::from_coefficients(std::vector<double> b0) {
    for (double x : b0)
        if (!std::isfinite(x)) throw std::invalid_argument("InitialData: non-finite coefficient");
    InitialData d;
    d.coeffs = std::move(b0);
    double scale = 0.0;
    for (double x : d.coeffs) scale = std::max(scale, std::fabs(x));
    if (d.coeffs.size() >= 2 && std::fabs(d.coeffs[0]) <= 1e-14 * std::max(scale, 1.0) &&
        std::fabs(d.coeffs[1]) <= 1e-14 * std::max(scale, 1.0)) {
        d.coeffs[0] = 0.0;
        d.coeffs[1] = 0.0;
        d.in_null_perp = true;
    }
    return d;
}

InitialData project_initial(const RadialProfile& g0, int truncation,
                            const cross_section::QuadratureSpec& quad) {
    if (truncation < 0) throw std::domain_error("project_initial: negative truncation");
    const double r_max = std::max(g0.support_radius(), 2.0 * std::sqrt(2.0 * truncation + 1.5) + 12.0);
    const int panels = std::max(64, static_cast<int>(std::ceil(r_max / 0.2)));
    auto grid = quadrature::panel_grid(0.0, r_max, panels, 16);

    std::vector<double> b(static_cast<size_t>(truncation) + 1, 0.0);
    std::vector<double> phis;
    double norm_sq = 0.0;
    for (size_t i = 0; i < grid.x.size(); ++i) {
        const double r = grid.x[i];
        const double g = g0.eval(r);
        if (!std::isfinite(g)) throw numerical_error("project_initial: non-finite profile sample");
        const double wgt = grid.w[i] * 4.0 * M_PI * r * r;
        norm_sq += wgt * g * g;
        if (g == 0.0) continue;
        specfun::phi_radial_all(truncation, r, phis);
        const double gw = wgt * g;
        for (int n = 0; n <= truncation; ++n) b[static_cast<size_t>(n)] += gw * phis[static_cast<size_t>(n)];
    }
    double sum_sq = 0.0;
    for (double x : b) sum_sq += x * x;
    const double slack = std::max(quad.abs_tol * 100.0, 1e-8 * std::max(norm_sq, 1.0));
    if (sum_sq > norm_sq + slack)
        throw numerical_error("project_initial: coefficient energy exceeds the profile norm "
                              "(quadrature window too small?)");
    InitialData d = InitialData::from_coefficients(std::move(b));
    d.source_l2 = std::sqrt(norm_sq);
    return d;
}

std::vector<double> rhs(const SpectrumTables& tables, const std::vector<double>& b) {
    const int N = tables.truncation();
    if (b.size() != static_cast<size_t>(N) + 1)
        throw std::invalid_argument("rhs: coefficient vector length does not match the tables");
    std::vector<double> db(b.size(), 0.0);
    for (int n = 1; n <= N; ++n) {
        double acc = -tables.lambda(n) * b[static_cast<size_t>(n)] +
                     tables.alpha(0, n) * b[0] * b[static_cast<size_t>(n)];
        for (int k = 1; k <= n; ++k)
            acc += tables.coupling(k, n - k) * b[static_cast<size_t>(k)] * b[static_cast<size_t>(n - k)];
        db[static_cast<size_t>(n)] = acc;
    }
    return db;
}

namespace {

void merge_terms(std::vector<ExpTerm>& terms, double rel_tol) {
    if (terms.empty()) return;
    std::sort(terms.begin(), terms.end(),
              [](const ExpTerm& a, const ExpTerm& b) { return a.rate < b.rate; });
    size_t out = 0;
    for (size_t i = 1; i < terms.size(); ++i) {
        double scale = std::max({terms[out].rate, terms[i].rate, 1e-300});
        if (terms[i].rate - terms[out].rate <= rel_tol * scale) {
            terms[out].coeff += terms[i].coeff;
        } else {
            terms[++out] = terms[i];
        }
    }
    terms.resize(out + 1);
}

void prune_terms(std::vector<ExpTerm>& terms, double threshold, std::size_t& pruned) {
    size_t out = 0;
    for (size_t i = 0; i < terms.size(); ++i) {
        if (std::fabs(terms[i].coeff) >= threshold)
            terms[out++] = terms[i];
        else
            ++pruned;
    }
    terms.resize(out);
}

} // namespace

ExpSumSolution solve_closed_form(const SpectrumTables& tables, const InitialData& init,
                                 const SolveOptions& opts) {
    const int N = tables.truncation();
    if (init.coeffs.size() != static_cast<size_t>(N) + 1)
        throw std::invalid_argument("solve_closed_form: initial data length does not match the tables");
    if (!init.in_null_perp || init.coeffs[0] != 0.0 || init.coeffs[1] != 0.0)
        throw std::invalid_argument("solve_closed_form: requires b0(0) = b1(0) = 0 "
                                    "(use solve_numeric for general data)");

    const double norm0 = l2_norm(init.coeffs);
    const double prune_abs = opts.prune_rel_threshold * norm0;
    std::size_t pruned = 0;
    std::vector<std::string> events;
    std::vector<ModeSolution> modes(static_cast<size_t>(N) + 1);

    // modes 0 and 1 stay identically zero; mode n >= 2 is forced only by
    // lower modes, so one ascending pass solves the whole cascade.
    for (int n = 2; n <= N; ++n) {
        ModeSolution& mode = modes[static_cast<size_t>(n)];
        std::vector<ExpTerm> forcing;
        bool dependencies_ok = true;
        for (int k = 1; k < n; ++k) {
            const int l = n - k;
            const ModeSolution& mk = modes[static_cast<size_t>(k)];
            const ModeSolution& ml = modes[static_cast<size_t>(l)];
            if (!mk.closed_form || !ml.closed_form) {
                dependencies_ok = false;
                break;
            }
            if (mk.terms.empty() || ml.terms.empty()) continue;
            const double w = tables.coupling(k, l);
            for (const ExpTerm& a : mk.terms)
                for (const ExpTerm& b : ml.terms)
                    forcing.push_back({a.rate + b.rate, w * a.coeff * b.coeff});
        }
        if (!dependencies_ok) {
            mode.closed_form = false;
            events.push_back("mode " + std::to_string(n) +
                             ": closed form unavailable (depends on a resonant mode)");
            continue;
        }
        merge_terms(forcing, opts.merge_rel_tol);
        prune_terms(forcing, prune_abs, pruned);

        const double lam = tables.lambda(n);
        double own_coeff = init.coeffs[static_cast<size_t>(n)];
        std::vector<ExpTerm> out;
        out.reserve(forcing.size() + 1);
        bool resonant = false;
        for (const ExpTerm& f : forcing) {
            const double gap = lam - f.rate;
            if (std::fabs(gap) < opts.resonance_rel_tol * std::max({lam, f.rate, 1e-300})) {
                events.push_back("mode " + std::to_string(n) + ": near-resonant forcing rate " +
                                 std::to_string(f.rate) + " against " + std::to_string(lam) +
                                 "; switching this mode to the numeric path");
                resonant = true;
                break;
            }
            const double c = f.coeff / gap;
            out.push_back({f.rate, c});
            own_coeff -= c;
        }
        if (resonant) {
            mode.closed_form = false;
            mode.terms.clear();
            continue;
        }
        out.push_back({lam, own_coeff});
        merge_terms(out, opts.merge_rel_tol);
        prune_terms(out, prune_abs, pruned);
        if (out.size() > opts.term_budget)
            throw numerical_error("solve_closed_form: term budget exceeded at mode " +
                                  std::to_string(n) + " (" + std::to_string(out.size()) + " terms)");
        mode.terms = std::move(out);
    }
    return ExpSumSolution(N, std::move(modes), opts, pruned, std::move(events));
}

bool ExpSumSolution::all_closed_form() const {
    for (const auto& m : modes_)
        if (!m.closed_form) return false;
    return true;
}

ModeCoefficients evaluate(const ExpSumSolution& sol, double t) {
    if (!(t >= 0.0)) throw std::domain_error("evaluate: t must be >= 0");
    ModeCoefficients out;
    out.t = t;
    out.b.assign(static_cast<size_t>(sol.truncation()) + 1, 0.0);
    for (int n = 0; n <= sol.truncation(); ++n) {
        const ModeSolution& m = sol.mode(n);
        if (!m.closed_form)
            throw numerical_error("evaluate: mode " + std::to_string(n) +
                                  " has no closed form (resonant fallback); use solve_numeric");
        double acc = 0.0;
        for (const ExpTerm& term : m.terms) acc += term.coeff * std::exp(-term.rate * t);
        out.b[static_cast<size_t>(n)] = acc;
    }
    return out;
}

namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                 e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                 e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

} // namespace

std::vector<ModeCoefficients> solve_numeric(const SpectrumTables& tables, const InitialData& init,
                                            const std::vector<double>& t_grid,
                                            const StepControl& control) {
    const int N = tables.truncation();
    if (init.coeffs.size() != static_cast<size_t>(N) + 1)
        throw std::invalid_argument("solve_numeric: initial data length does not match the tables");
    if (t_grid.empty() || t_grid.front() != 0.0)
        throw std::invalid_argument("solve_numeric: time grid must start at 0");
    for (size_t i = 1; i < t_grid.size(); ++i)
        if (!(t_grid[i] > t_grid[i - 1]))
            throw std::invalid_argument("solve_numeric: time grid must be strictly increasing");

    const size_t dim = init.coeffs.size();
    std::vector<double> y = init.coeffs;
    std::vector<double> k1 = rhs(tables, y), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim);
    std::vector<double> ytmp(dim), ynew(dim);

    std::vector<ModeCoefficients> out;
    out.reserve(t_grid.size());
    out.push_back({0.0, y});

    double t = 0.0;
    double h = control.initial_step;
    if (h <= 0.0) {
        double fn = l2_norm(k1);
        h = 0.01 * (1.0 + l2_norm(y)) / (1.0 + fn);
        h = std::min(h, t_grid.back() / 10.0 + 1e-30);
        if (!(h > 0.0)) h = 1e-4;
    }
    long steps = 0;

    for (size_t gi = 1; gi < t_grid.size(); ++gi) {
        const double t_target = t_grid[gi];
        while (t < t_target) {
            if (++steps > control.max_steps)
                throw numerical_error("solve_numeric: step budget exceeded");
            // dt is the attempted step; h stays the controller's suggestion so
            // a grid-point sliver neither trips the underflow guard nor
            // restarts the next leg from a microscopic step
            double dt = h;
            bool hit = false;
            if (t + dt >= t_target) {
                dt = t_target - t;
                hit = true;
            }
            if (!hit && dt < 1e-14 * std::max(1.0, t))
                throw numerical_error("solve_numeric: step size underflow at t=" + std::to_string(t));

            for (size_t i = 0; i < dim; ++i) ytmp[i] = y[i] + dt * a21 * k1[i];
            k2 = rhs(tables, ytmp);
            for (size_t i = 0; i < dim; ++i) ytmp[i] = y[i] + dt * (a31 * k1[i] + a32 * k2[i]);
            k3 = rhs(tables, ytmp);
            for (size_t i = 0; i < dim; ++i)
                ytmp[i] = y[i] + dt * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
            k4 = rhs(tables, ytmp);
            for (size_t i = 0; i < dim; ++i)
                ytmp[i] = y[i] + dt * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
            k5 = rhs(tables, ytmp);
            for (size_t i = 0; i < dim; ++i)
                ytmp[i] = y[i] + dt * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                       a65 * k5[i]);
            k6 = rhs(tables, ytmp);
            for (size_t i = 0; i < dim; ++i)
                ynew[i] = y[i] + dt * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                                       b6 * k6[i]);
            k7 = rhs(tables, ynew);

            double err = 0.0;
            for (size_t i = 0; i < dim; ++i) {
                double le = dt * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                                  e7 * k7[i]);
                double sc = control.abs_tol +
                            control.rel_tol * std::max(std::fabs(y[i]), std::fabs(ynew[i]));
                double r = le / sc;
                err += r * r;
            }
            err = std::sqrt(err / dim);
            if (!std::isfinite(err)) throw numerical_error("solve_numeric: non-finite state");

            const bool accepted = err <= 1.0;
            if (accepted) {
                t = hit ? t_target : t + dt;
                y.swap(ynew);
                k1.swap(k7); // first-same-as-last
            }
            if (!(hit && accepted)) {
                double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
                h = dt * std::clamp(fac, 0.2, 5.0);
            }
        }
        out.push_back({t_target, y});
    }
    return out;
}

} // namespace radboltz::cascade
