#include "radboltz/fourier.hpp"
#include "radboltz/errors.hpp"
#include "radboltz/quadrature.hpp"
#include "radboltz/rng.hpp"
#include "radboltz/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace radboltz::fourier {

using cross_section::AngularMesh;
using cross_section::angular_mesh;
using cross_section::graded_panels;

double fourier_mode(int n, double rho) {
    if (n < 0) throw std::domain_error("fourier_mode: negative index");
    if (!(rho >= 0.0)) throw std::domain_error("fourier_mode: rho must be >= 0");
    if (rho == 0.0) return n == 0 ? 1.0 : 0.0;
    double lg = 2.0 * n * std::log(rho) - 0.5 * rho * rho -
                0.5 * specfun::log_gamma(2.0 * n + 2.0);
    return std::exp(lg);
}

double weighted_hermite_transform_even(int two_k, double rho) {
    if (two_k < 0 || two_k % 2 != 0)
        throw std::domain_error("weighted_hermite_transform_even: index must be even and >= 0");
    const int k = two_k / 2;
    if (rho == 0.0) return k == 0 ? 1.0 : 0.0;
    double lg = 2.0 * k * std::log(rho) - 0.5 * rho * rho - 0.5 * specfun::log_gamma(2.0 * k + 1.0);
    double v = std::exp(lg);
    return (k % 2 == 0) ? v : -v;
}

FourierProfile FourierProfile::mode(int n) {
    if (n < 0) throw std::domain_error("FourierProfile::mode: negative index");
    std::vector<double> c(static_cast<size_t>(n) + 1, 0.0);
    c.back() = 1.0;
    return mode_sum(std::move(c));
}

FourierProfile FourierProfile::mode_sum(std::vector<double> coeffs) {
    FourierProfile p;
    p.kind_ = Kind::ModeSum;
    p.coeffs_ = std::move(coeffs);
    p.value_at_zero_ = p.coeffs_.empty() ? 0.0 : p.coeffs_[0];
    return p;
}

FourierProfile FourierProfile::from_samples(std::vector<double> rho, std::vector<double> values,
                                            double value_at_zero) {
    if (rho.size() != values.size() || rho.empty())
        throw std::invalid_argument("FourierProfile: need matching, nonempty sample arrays");
    FourierProfile p;
    p.kind_ = Kind::Samples;
    p.rho_ = std::move(rho);
    p.values_ = std::move(values);
    p.value_at_zero_ = value_at_zero;
    return p;
}

double FourierProfile::eval(double rho) const {
    if (!(rho >= 0.0)) throw std::domain_error("FourierProfile::eval: rho must be >= 0");
    if (kind_ == Kind::ModeSum) {
        double acc = 0.0;
        for (size_t n = 0; n < coeffs_.size(); ++n)
            if (coeffs_[n] != 0.0) acc += coeffs_[n] * fourier_mode(static_cast<int>(n), rho);
        return acc;
    }
    if (rho == 0.0) return value_at_zero_;
    if (rho <= rho_.front()) {
        // interpolate between the explicit zero value and the first sample
        double u = rho / rho_.front();
        return (1.0 - u) * value_at_zero_ + u * values_.front();
    }
    if (rho >= rho_.back() || rho_.size() == 1) return values_.back();
    auto it = std::upper_bound(rho_.begin(), rho_.end(), rho);
    size_t i = static_cast<size_t>(it - rho_.begin());
    double u = (rho - rho_[i - 1]) / (rho_[i] - rho_[i - 1]);
    return (1.0 - u) * values_[i - 1] + u * values_[i];
}

double FourierProfile::eval_sq(double y) const {
    if (!(y >= 0.0)) throw std::domain_error("FourierProfile::eval_sq: y must be >= 0");
    if (kind_ == Kind::Samples) return eval(std::sqrt(y));
    double acc = 0.0;
    const double e = std::exp(-0.5 * y);
    double py = 1.0; // y^n
    for (size_t n = 0; n < coeffs_.size(); ++n) {
        if (coeffs_[n] != 0.0)
            acc += coeffs_[n] * py * e * std::exp(-0.5 * specfun::log_gamma(2.0 * n + 2.0));
        py *= y;
    }
    return acc;
}

double FourierProfile::deriv_sq(double y) const {
    if (kind_ != Kind::ModeSum)
        throw numerical_error("FourierProfile::deriv_sq: sampled profiles carry no derivative");
    // d/dy [ c_n y^n e^{-y/2} / sqrt((2n+1)!) ]
    double acc = 0.0;
    const double e = std::exp(-0.5 * y);
    for (size_t n = 0; n < coeffs_.size(); ++n) {
        if (coeffs_[n] == 0.0) continue;
        double norm = std::exp(-0.5 * specfun::log_gamma(2.0 * n + 2.0));
        double poly;
        if (n == 0)
            poly = -0.5;
        else
            poly = static_cast<double>(n) * std::pow(y, static_cast<double>(n) - 1.0) -
                   0.5 * std::pow(y, static_cast<double>(n));
        acc += coeffs_[n] * norm * poly * e;
    }
    return acc;
}

FourierProfile fourier_radial(const RadialProfile& g, const std::vector<double>& rho_grid,
                              const QuadratureSpec& quad) {
    if (rho_grid.empty()) throw std::invalid_argument("fourier_radial: empty frequency grid");
    double rho_max = 0.0;
    for (double r : rho_grid) {
        if (!(r >= 0.0)) throw std::domain_error("fourier_radial: negative frequency");
        rho_max = std::max(rho_max, r);
    }
    const double r_max = g.support_radius();
    // resolve both the profile's own oscillation and the sine kernel
    int panels = std::max(static_cast<int>(std::ceil(r_max / 0.2)),
                          static_cast<int>(std::ceil(rho_max * r_max * 1.5)));
    panels = std::min(panels, 20000);
    auto grid = quadrature::panel_grid(0.0, r_max, panels, 12);

    std::vector<double> gv(grid.x.size());
    double tail = 0.0;
    for (size_t i = 0; i < grid.x.size(); ++i) {
        gv[i] = g.eval(grid.x[i]);
        if (grid.x[i] > 0.9 * r_max) tail = std::max(tail, std::fabs(gv[i]) * grid.x[i] * grid.x[i]);
    }
    double mass = 0.0; // 4 pi ∫ g r^2 dr, also the rho -> 0 limit
    for (size_t i = 0; i < grid.x.size(); ++i)
        mass += grid.w[i] * 4.0 * M_PI * gv[i] * grid.x[i] * grid.x[i];

    std::vector<double> values;
    values.reserve(rho_grid.size());
    for (double rho : rho_grid) {
        if (rho == 0.0) {
            values.push_back(mass);
            continue;
        }
        double acc = 0.0;
        for (size_t i = 0; i < grid.x.size(); ++i)
            acc += grid.w[i] * gv[i] * std::sin(rho * grid.x[i]) * grid.x[i];
        values.push_back(4.0 * M_PI * acc / rho);
    }
    std::vector<double> rg = rho_grid;
    FourierProfile out = FourierProfile::from_samples(std::move(rg), std::move(values), mass);
    out.set_slow_decay_warning(tail > 1e3 * std::max(quad.abs_tol, 1e-14));
    return out;
}

std::vector<double> hermite_link_default_grid(int n) {
    const double peak = std::sqrt(2.0 * n + 1.0);
    return {0.7 * peak, 0.9 * peak, 1.1 * peak, 1.3 * peak};
}

double hermite_link_check(int n, const std::vector<double>& rho_grid, const QuadratureSpec& quad) {
    if (n < 0) throw std::domain_error("hermite_link_check: negative index");
    std::vector<double> unit(static_cast<size_t>(n) + 1, 0.0);
    unit.back() = 1.0;
    RadialProfile weighted = RadialProfile::weighted_basis_sum(unit);
    FourierProfile transform = fourier_radial(weighted, rho_grid, quad);
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    const double degeneracy = std::sqrt(2.0 * n + 1.0);
    double worst = 0.0;
    for (size_t i = 0; i < rho_grid.size(); ++i) {
        double lhs = sign * degeneracy * transform.sample_values()[i];
        double rhs = weighted_hermite_transform_even(2 * n, rho_grid[i]);
        if (rhs == 0.0) continue;
        worst = std::max(worst, std::fabs(lhs - rhs) / std::fabs(rhs));
    }
    return worst;
}

namespace {

// Bracket of the collision integrand in the variable t = sin^2(theta).
struct Bracket {
    const FourierProfile& g_hat;
    const FourierProfile& f_hat;
    double rho_sq;
    double at_zero; // ghat(0) fhat(rho)

    double operator()(double t) const {
        return g_hat.eval_sq(rho_sq * t) * f_hat.eval_sq(rho_sq * (1.0 - t)) - at_zero;
    }
    // d/dt at t = 0 (exact for mode sums, secant estimate otherwise)
    double slope_at_zero() const {
        if (g_hat.has_derivative() && f_hat.has_derivative())
            return rho_sq * (g_hat.deriv_sq(0.0) * f_hat.eval_sq(rho_sq) -
                             g_hat.eval_sq(0.0) * f_hat.deriv_sq(rho_sq));
        const double h = 1e-6;
        return (*this)(h) / h;
    }
};

// Below this t the linear model replaces the bracket.  Kept at a panel
// boundary of the graded mesh (0.5 * 2^-26) so whole panels are cut, never
// split mid-panel.
const double bracket_guard = std::ldexp(0.5, -26); // ~7.45e-9

double bobylev_eval(const AngularMesh& mesh, const Bracket& br, double slope) {
    // analytic contribution of (0, guard]: slope * ∫ t^{-s} w(t) dt
    double acc = slope * mesh.lead_weight * std::pow(bracket_guard, 1.0 - mesh.s) / (1.0 - mesh.s);
    for (size_t i = 0; i < mesh.t.size(); ++i) {
        if (mesh.t[i] < bracket_guard) continue;
        acc += mesh.w[i] * br(mesh.t[i]);
    }
    return acc;
}

} // namespace

double bobylev_apply(const SingularityModel& model, const FourierProfile& g_hat,
                     const FourierProfile& f_hat, double rho, const QuadratureSpec& quad) {
    model.validate();
    if (!(rho >= 0.0)) throw std::domain_error("bobylev_apply: rho must be >= 0");
    if (rho == 0.0) return 0.0; // bracket vanishes identically at zero frequency
    Bracket br{g_hat, f_hat, rho * rho, g_hat.eval_sq(0.0) * f_hat.eval_sq(rho * rho)};

    // The singularity is removable only if the bracket vanishes at least
    // linearly in t = sin^2(theta).  Probe the local power; an inconsistent
    // zero-frequency value shows up as power ~0, an interpolation kink as
    // power ~1/2, both of which the weight t^{-1-s} cannot absorb.
    const double scale =
        std::fabs(br.at_zero) + std::fabs(br(0.25)) + std::fabs(br(0.5)) + 1e-300;
    {
        const double b1 = br(1e-6), b2 = br(1e-8);
        if (std::fabs(b1) > 1e-10 * scale) {
            double p = std::log(std::fabs(b1) / std::max(std::fabs(b2), 1e-300)) / std::log(1e2);
            if (p < 0.75)
                throw numerical_error(
                    "bobylev_apply: bracket vanishes too slowly at the singular angle "
                    "(local power " + std::to_string(p) +
                    "; inconsistent profile at zero frequency?)");
        }
    }
    const double slope = br.slope_at_zero();

    // mesh must reach below the analytic guard threshold regardless of the
    // user's panel budget (the guard sits at panel boundary 2^-27)
    const int panels = std::max(graded_panels(model, quad), 40);
    double lo = bobylev_eval(angular_mesh(model, std::max(panels - 8, 34), 14), br, slope);
    double hi = bobylev_eval(angular_mesh(model, panels, 20), br, slope);
    double tol = std::max(quad.abs_tol, quad.rel_tol * std::fabs(hi));
    // the guard-region truncation is invisible to mesh refinement; account it
    tol = std::max(tol, 1e-3 * scale * std::pow(bracket_guard, 2.0 - model.s));
    if (std::fabs(hi - lo) <= tol) return hi;
    double deep = bobylev_eval(angular_mesh(model, std::min(panels + 16, 320), 28), br, slope);
    if (std::fabs(deep - hi) <= std::max(tol, quad.rel_tol * std::fabs(deep))) return deep;
    throw quadrature_error("bobylev_apply(rho=" + std::to_string(rho) + ")",
                           std::fabs(deep - hi), tol);
}

double product_identity_check(const SpectrumTables& tables, int n, int m,
                              const std::vector<double>& rho_grid, const QuadratureSpec& quad) {
    if (n < 0 || m < 0) throw std::domain_error("product_identity_check: negative index");
    if (n + m > tables.truncation())
        throw std::domain_error("product_identity_check: n + m exceeds the table truncation");
    FourierProfile gh = FourierProfile::mode(n);
    FourierProfile fh = FourierProfile::mode(m);
    const double factor = (n >= 1) ? tables.coupling(n, m) : tables.alpha(0, m);
    const int out_mode = n + m;
    double worst = 0.0;
    for (double rho : rho_grid) {
        if (!(rho > 0.0))
            throw std::domain_error("product_identity_check: frequencies must be positive");
        double lhs = bobylev_apply(tables.model(), gh, fh, rho, quad);
        double rhs = factor * fourier_mode(out_mode, rho);
        if (rhs == 0.0 && n == 0 && m == 0) continue; // both sides vanish identically
        worst = std::max(worst, std::fabs(lhs - rhs) / std::fabs(rhs));
    }
    return worst;
}

TrilinearScan trilinear_ratio_scan(const SpectrumTables& tables, int trials, int mode_cap,
                                   std::uint64_t seed) {
    if (mode_cap < 0 || mode_cap > tables.truncation())
        throw std::domain_error("trilinear_ratio_scan: mode_cap out of range");
    const int N = tables.truncation();
    const double s = tables.model().s;
    std::mt19937_64 gen(seed);
    TrilinearScan scan;

    // Deterministic single-mode skeleton first: isotropic random triples
    // concentrate away from the extremal directions as the cap grows, so the
    // aligned candidates keep the max estimate meaningful at every cap.
    for (int k = 1; k <= mode_cap; ++k)
        for (int l = 0; k + l <= mode_cap; ++l) {
            double den = std::pow(2.0 * l + 1.5, 0.5 * s) *
                         std::pow(2.0 * (k + l) + 1.5, 0.5 * s);
            scan.max_ratio = std::max(scan.max_ratio, tables.coupling(k, l) / den);
        }
    for (int l = 1; l <= mode_cap; ++l)
        scan.max_ratio =
            std::max(scan.max_ratio, std::fabs(tables.alpha(0, l)) / std::pow(2.0 * l + 1.5, s));

    std::vector<double> f(static_cast<size_t>(mode_cap) + 1), g(f.size()), h(f.size());
    for (int trial = 0; trial < trials; ++trial) {
        for (auto* v : {&f, &g, &h})
            for (double& x : *v) x = rng::standard_normal(gen);
        double num = 0.0;
        for (int j = 1; j <= mode_cap; ++j)
            num += tables.alpha(0, j) * f[0] * g[static_cast<size_t>(j)] * h[static_cast<size_t>(j)];
        for (int k = 1; k <= mode_cap; ++k)
            for (int l = 0; l <= mode_cap && k + l <= std::min(mode_cap, N); ++l)
                num += tables.coupling(k, l) * f[static_cast<size_t>(k)] * g[static_cast<size_t>(l)] *
                       h[static_cast<size_t>(k + l)];
        double nf = 0.0, ng = 0.0, nh = 0.0;
        for (int j = 0; j <= mode_cap; ++j) {
            double wsob = std::pow(2.0 * j + 1.5, s);
            nf += f[static_cast<size_t>(j)] * f[static_cast<size_t>(j)];
            ng += wsob * g[static_cast<size_t>(j)] * g[static_cast<size_t>(j)];
            nh += wsob * h[static_cast<size_t>(j)] * h[static_cast<size_t>(j)];
        }
        double den = std::sqrt(nf) * std::sqrt(ng) * std::sqrt(nh);
        if (den == 0.0) {
            ++scan.skipped;
            continue;
        }
        scan.max_ratio = std::max(scan.max_ratio, std::fabs(num) / den);
        ++scan.evaluated;
    }
    return scan;
}

} // namespace radboltz::fourier
