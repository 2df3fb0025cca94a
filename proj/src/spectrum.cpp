#include "radboltz/spectrum.hpp"
#include "radboltz/errors.hpp"
#include "radboltz/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace radboltz::spectrum {

using cross_section::AngularMesh;
using cross_section::angular_mesh;
using cross_section::graded_panels;
using cross_section::mesh_stub;
using cross_section::one_minus_pow;

SpectrumTables::SpectrumTables(SingularityModel model, QuadratureSpec quad, int truncation,
                               std::vector<double> lambda, std::vector<double> alpha)
    : model_(model), quad_(quad), truncation_(truncation),
      lambda_(std::move(lambda)), alpha_(std::move(alpha)) {
    const size_t n1 = static_cast<size_t>(truncation_) + 1;
    if (lambda_.size() != n1 || alpha_.size() != n1 * n1)
        throw std::invalid_argument("SpectrumTables: size mismatch with truncation");
    coupling_.assign(n1 * n1, 0.0);
    for (size_t k = 1; k < n1; ++k)
        for (size_t l = 0; k + l < n1; ++l) {
            double deg = std::sqrt((2.0 * (k + l) + 1.0) / ((2.0 * k + 1.0) * (2.0 * l + 1.0)));
            coupling_[k * n1 + l] = alpha_[k * n1 + l] * deg;
        }
}

double SpectrumTables::lambda(int n) const {
    if (n < 0 || n > truncation_) throw std::out_of_range("SpectrumTables::lambda index");
    return lambda_[static_cast<size_t>(n)];
}

double SpectrumTables::alpha(int n, int m) const {
    if (n < 0 || m < 0 || n > truncation_ || m > truncation_)
        throw std::out_of_range("SpectrumTables::alpha index");
    return alpha_[static_cast<size_t>(n) * (truncation_ + 1) + m];
}

double SpectrumTables::coupling(int k, int l) const {
    if (k < 1 || l < 0 || k > truncation_ || l > truncation_ || k + l > truncation_)
        throw std::out_of_range("SpectrumTables::coupling index");
    return coupling_[static_cast<size_t>(k) * (truncation_ + 1) + l];
}

std::vector<std::string> SpectrumTables::invariant_violations() const {
    std::vector<std::string> out;
    auto complain = [&out](const std::string& s) { out.push_back(s); };
    if (lambda_[0] != 0.0) complain("lambda(0) != 0");
    if (std::fabs(lambda_[1]) > 1e-12) complain("lambda(1) not zero");
    for (int n = 2; n <= truncation_; ++n) {
        if (!(lambda(n) > 0.0)) complain("lambda(" + std::to_string(n) + ") not positive");
        if (lambda(n) + 1e-12 * std::fabs(lambda(n)) < lambda(n - 1))
            complain("lambda not nondecreasing at n=" + std::to_string(n));
        if (lambda(n) + 1e-12 * std::fabs(lambda(n)) < lambda(2))
            complain("lambda(2) not minimal at n=" + std::to_string(n));
    }
    if (alpha(0, 0) != 0.0) complain("alpha(0,0) != 0");
    for (int m = 1; m <= truncation_; ++m)
        if (!(alpha(0, m) < 0.0)) complain("alpha(0," + std::to_string(m) + ") not negative");
    for (int n = 1; n <= truncation_; ++n)
        for (int m = 0; n + m <= truncation_; ++m)
            if (!(alpha(n, m) > 0.0))
                complain("alpha(" + std::to_string(n) + "," + std::to_string(m) + ") not positive");
    return out;
}

namespace {

struct RawTables {
    std::vector<double> lambda;  // N+1
    std::vector<double> moment;  // (N+1)^2, t^n (1-t)^m moments for n >= 1
    std::vector<double> reg_cos; // N+1, regularized cosine moments
};

// One sweep over a mesh filling every moment at once.  Incremental powers at
// each node keep the whole fill at O(nodes * N^2) multiply-adds.
RawTables fill_tables(const AngularMesh& mesh, int N) {
    const size_t n1 = static_cast<size_t>(N) + 1;
    RawTables raw;
    raw.lambda.assign(n1, 0.0);
    raw.moment.assign(n1 * n1, 0.0);
    raw.reg_cos.assign(n1, 0.0);
    for (size_t i = 0; i < mesh.t.size(); ++i) {
        const double t = mesh.t[i];
        const double w = mesh.w[i];
        const double c = 1.0 - t;
        // lambda and reg-cos: geometric partial sums of (1-t)^l
        double geo = 0.0, pc = 1.0, pt = 1.0;
        for (int n = 1; n <= N; ++n) {
            geo += pc;
            pc *= c;
            pt *= t;
            const double omp = t * geo; // 1 - (1-t)^n, cancellation-free
            raw.reg_cos[static_cast<size_t>(n)] += w * omp;
            raw.lambda[static_cast<size_t>(n)] += w * (omp - pt);
        }
        // moments t^n (1-t)^m
        double pn = 1.0;
        for (int n = 1; n <= N; ++n) {
            pn *= t;
            double acc = w * pn;
            double* row = raw.moment.data() + static_cast<size_t>(n) * n1;
            for (int m = 0; m <= N; ++m) {
                row[m] += acc;
                acc *= c;
            }
        }
    }
    // Analytic left-endpoint terms.
    for (int n = 2; n <= N; ++n)
        raw.lambda[static_cast<size_t>(n)] += mesh_stub(mesh, static_cast<double>(n), 1.0);
    raw.lambda[1] = 0.0; // integrand identically zero
    for (int m = 1; m <= N; ++m)
        raw.reg_cos[static_cast<size_t>(m)] += mesh_stub(mesh, static_cast<double>(m), 1.0);
    for (int n = 1; n <= N; ++n) {
        double st = mesh_stub(mesh, 1.0, static_cast<double>(n));
        double* row = raw.moment.data() + static_cast<size_t>(n) * n1;
        for (int m = 0; m <= N; ++m) row[m] += st;
    }
    return raw;
}

double max_rel_diff(const RawTables& a, const RawTables& b, int N, int* bad_n, int* bad_m) {
    const size_t n1 = static_cast<size_t>(N) + 1;
    double worst = 0.0;
    *bad_n = *bad_m = -1;
    auto consider = [&](double x, double y, int n, int m) {
        double scale = std::max({std::fabs(x), std::fabs(y), 1e-300});
        double d = std::fabs(x - y) / scale;
        if (d > worst) {
            worst = d;
            *bad_n = n;
            *bad_m = m;
        }
    };
    for (int n = 2; n <= N; ++n) consider(a.lambda[n], b.lambda[n], n, -1);
    for (int m = 1; m <= N; ++m) consider(a.reg_cos[m], b.reg_cos[m], 0, m);
    for (int n = 1; n <= N; ++n)
        for (int m = 0; m <= N; ++m) // the whole stored square, not only n+m <= N
            consider(a.moment[n * n1 + m], b.moment[n * n1 + m], n, m);
    return worst;
}

// Binomial degeneracy fused with the raw moment in log space: the binomial
// alone overflows near n = m = 64 while the product stays O(1).
std::vector<double> assemble_alpha(const RawTables& raw, int N) {
    using specfun::log_gamma;
    const size_t n1 = static_cast<size_t>(N) + 1;
    std::vector<double> alpha(n1 * n1, 0.0);
    for (int m = 1; m <= N; ++m) alpha[static_cast<size_t>(m)] = -raw.reg_cos[m];
    for (int n = 1; n <= N; ++n)
        for (int m = 0; m <= N; ++m) {
            double mom = raw.moment[static_cast<size_t>(n) * n1 + m];
            if (!(mom > 0.0)) throw numerical_error("build_tables: nonpositive raw moment");
            double half_log_binom = 0.5 * (log_gamma(2.0 * (n + m) + 1.0) -
                                           log_gamma(2.0 * n + 1.0) - log_gamma(2.0 * m + 1.0));
            alpha[static_cast<size_t>(n) * n1 + m] = std::exp(half_log_binom + std::log(mom));
        }
    return alpha;
}

} // namespace

SpectrumTables build_tables(const SingularityModel& model, int truncation,
                            const QuadratureSpec& spec) {
    if (truncation < 2) throw std::domain_error("build_tables: truncation must be >= 2");
    model.validate();
    const int panels = graded_panels(model, spec);
    RawTables lo = fill_tables(angular_mesh(model, std::max(panels - 8, 8), 14,
                                            cross_section::top_octave_splits(truncation, 14)),
                               truncation);
    RawTables hi = fill_tables(angular_mesh(model, panels, 20,
                                            cross_section::top_octave_splits(truncation, 20)),
                               truncation);
    int bn = -1, bm = -1;
    double diff = max_rel_diff(lo, hi, truncation, &bn, &bm);
    if (diff > std::max(spec.rel_tol, spec.abs_tol)) {
        RawTables deep = fill_tables(angular_mesh(model, std::min(panels + 16, 320), 28,
                                                   cross_section::top_octave_splits(truncation, 28)),
                                     truncation);
        double diff2 = max_rel_diff(hi, deep, truncation, &bn, &bm);
        if (diff2 > std::max(spec.rel_tol, spec.abs_tol))
            throw quadrature_error("build_tables entry (n=" + std::to_string(bn) +
                                       ",m=" + std::to_string(bm) + ")",
                                   diff2, std::max(spec.rel_tol, spec.abs_tol));
        hi = std::move(deep);
    }
    return SpectrumTables(model, spec, truncation, std::move(hi.lambda), assemble_alpha(hi, truncation));
}

std::vector<double> lambda_sequence(const SingularityModel& model, int truncation,
                                    const QuadratureSpec& spec) {
    if (truncation < 1) throw std::domain_error("lambda_sequence: truncation must be >= 1");
    model.validate();
    const int panels = graded_panels(model, spec);
    auto fill = [&](const AngularMesh& mesh) {
        std::vector<double> lam(static_cast<size_t>(truncation) + 1, 0.0);
        for (size_t i = 0; i < mesh.t.size(); ++i) {
            const double t = mesh.t[i], w = mesh.w[i], c = 1.0 - t;
            double geo = 0.0, pc = 1.0, pt = 1.0;
            for (int n = 1; n <= truncation; ++n) {
                geo += pc;
                pc *= c;
                pt *= t;
                lam[static_cast<size_t>(n)] += w * (t * geo - pt);
            }
        }
        for (int n = 2; n <= truncation; ++n)
            lam[static_cast<size_t>(n)] += mesh_stub(mesh, static_cast<double>(n), 1.0);
        lam[1] = 0.0;
        return lam;
    };
    auto lo = fill(angular_mesh(model, std::max(panels - 8, 8), 14,
                                cross_section::top_octave_splits(truncation, 14)));
    auto hi = fill(angular_mesh(model, panels, 20,
                                cross_section::top_octave_splits(truncation, 20)));
    double worst = 0.0;
    for (int n = 2; n <= truncation; ++n)
        worst = std::max(worst, std::fabs(lo[n] - hi[n]) / std::max(std::fabs(hi[n]), 1e-300));
    if (worst > std::max(spec.rel_tol, spec.abs_tol)) {
        auto deep = fill(angular_mesh(model, std::min(panels + 16, 320), 28,
                                      cross_section::top_octave_splits(truncation, 28)));
        worst = 0.0;
        for (int n = 2; n <= truncation; ++n)
            worst = std::max(worst, std::fabs(deep[n] - hi[n]) / std::max(std::fabs(deep[n]), 1e-300));
        if (worst > std::max(spec.rel_tol, spec.abs_tol))
            throw quadrature_error("lambda_sequence", worst, std::max(spec.rel_tol, spec.abs_tol));
        hi = std::move(deep);
    }
    return hi;
}

GeneralEigenvalue eigenvalue_general(const SingularityModel& model, int n, int l,
                                     const QuadratureSpec& spec) {
    if (n < 0 || l < 0) throw std::domain_error("eigenvalue_general: indices must be >= 0");
    model.validate();
    if (n == 0 && l == 0) return {0, 0, 0.0}; // collisional invariant, integrand vanishes
    const std::vector<double> q = specfun::legendre_even_poly(l);
    auto q_eval = [&q](double u) {
        double acc = 0.0;
        for (size_t j = q.size(); j-- > 0;) acc = acc * u + q[j];
        return acc;
    };
    // Integrand in t, written so the value near t = 0 is assembled from
    // cancellation-free pieces:
    //   1 - (1-t)^n Q_l(1-t) = Q_l(1-t) (1 - (1-t)^n) + sum_j q_j (1 - (1-t)^j)
    auto f = [&](double t) {
        double u = 1.0 - t;
        double head = q_eval(u) * one_minus_pow(t, n);
        double tail = 0.0;
        for (size_t j = 1; j < q.size(); ++j)
            if (q[j] != 0.0) tail += q[j] * one_minus_pow(t, static_cast<int>(j));
        return head + tail - std::pow(t, n) * q_eval(t);
    };
    // Leading t-coefficient of the integrand: n Q_l(1) + Q_l'(1) from the
    // cosine branch, minus the t^1 coefficient of t^n Q_l(t) (present only
    // for n = 0 or n = 1).
    double qp1 = 0.0;
    for (size_t j = 1; j < q.size(); ++j) qp1 += static_cast<double>(j) * q[j];
    double lead = static_cast<double>(n) + qp1;
    if (n == 0 && q.size() > 1) lead -= q[1];
    if (n == 1) lead -= q[0];
    double value = integrate_angular(model, spec, f, 1.0, lead,
                                     "eigenvalue_general(n=" + std::to_string(n) +
                                         ",l=" + std::to_string(l) + ")",
                                     n + l);
    return {n, l, value};
}

ResonanceReport no_resonance_check(const std::vector<double>& lambda, int jmax) {
    if (jmax < 2) throw std::domain_error("no_resonance_check: jmax must be >= 2");
    if (static_cast<size_t>(2 * jmax) >= lambda.size())
        throw std::domain_error("no_resonance_check: table too small for jmax");
    ResonanceReport rep;
    rep.min_margin = std::numeric_limits<double>::infinity();
    for (int j = 2; j <= jmax; ++j)
        for (int k = j; k <= jmax; ++k) {
            double sum_side = lambda[j] + lambda[k];
            double comb_side = lambda[j + k];
            double margin = sum_side - comb_side;
            if (margin < rep.min_margin) {
                rep.min_margin = margin;
                rep.argmin_j = j;
                rep.argmin_k = k;
            }
            if (!(comb_side < sum_side)) rep.violations.push_back({j, k, sum_side, comb_side});
        }
    return rep;
}

ResonanceReport no_resonance_check(const SpectrumTables& tables, int jmax) {
    return no_resonance_check(tables.lambdas(), jmax);
}

ExponentFit fit_exponent(const std::vector<double>& lambda, int k_min, int k_max) {
    if (k_min < 1 || k_max <= k_min || static_cast<size_t>(k_max) >= lambda.size())
        throw std::domain_error("fit_exponent: bad index window");
    if (k_max - k_min + 1 < 3) throw std::domain_error("fit_exponent: fewer than 3 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int npts = 0;
    for (int k = k_min; k <= k_max; ++k) {
        if (!(lambda[k] > 0.0)) throw std::domain_error("fit_exponent: nonpositive eigenvalue");
        double x = std::log(static_cast<double>(k)), y = std::log(lambda[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++npts;
    }
    double denom = npts * sxx - sx * sx;
    if (denom <= 0.0) throw std::domain_error("fit_exponent: degenerate abscissa");
    double slope = (npts * sxy - sx * sy) / denom;
    double intercept = (sy - slope * sx) / npts;
    double rss = 0.0;
    for (int k = k_min; k <= k_max; ++k) {
        double x = std::log(static_cast<double>(k)), y = std::log(lambda[k]);
        double r = y - (slope * x + intercept);
        rss += r * r;
    }
    return {slope, std::sqrt(rss / npts)};
}

ExponentFit asymptotic_exponent_fit(const SpectrumTables& tables, int k_min, int k_max) {
    return fit_exponent(tables.lambdas(), k_min, k_max);
}

CouplingBoundReport coupling_bound_check(const SpectrumTables& tables) {
    CouplingBoundReport rep;
    const int N = tables.truncation();
    const double s = tables.model().s;
    for (int n = 1; n <= N; ++n)
        for (int m = 0; n + m <= N; ++m) {
            double ratio = tables.coupling(n, m) * std::pow(static_cast<double>(n), 0.75) /
                           std::pow(1.0 + static_cast<double>(m) / n, s);
            if (ratio > rep.c_emp) {
                rep.c_emp = ratio;
                rep.argmax_n = n;
                rep.argmax_m = m;
            }
        }
    return rep;
}

} // namespace radboltz::spectrum
