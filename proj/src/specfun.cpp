#include "radboltz/specfun.hpp"
#include "radboltz/errors.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace radboltz::specfun {

namespace {

void check_degree(int n, int max_degree, const char* what) {
    if (n < 0) throw std::domain_error(std::string(what) + ": negative index");
    if (n > max_degree)
        throw std::domain_error(std::string(what) + ": index " + std::to_string(n) +
                                " exceeds cap " + std::to_string(max_degree));
}

// Rescale a two-term recurrence state when it grows past 1e280 and remember
// the shed powers of two, so the polynomial part never overflows.
struct ScaledPair {
    double prev = 0.0;
    double cur = 0.0;
    long exp2 = 0;

    void renormalize() {
        double m = std::max(std::fabs(prev), std::fabs(cur));
        if (m > 0x1p+930) { // ~9e279
            prev = std::ldexp(prev, -960);
            cur = std::ldexp(cur, -960);
            exp2 += 960;
        }
    }
};

// Combine poly * 2^exp2 * exp(log_weight) without overflowing intermediates.
double combine_scaled(double poly, long exp2, double log_weight) {
    if (poly == 0.0) return 0.0;
    if (exp2 == 0 && log_weight > -700.0 && log_weight < 700.0)
        return poly * std::exp(log_weight);
    double lg = std::log(std::fabs(poly)) + static_cast<double>(exp2) * M_LN2 + log_weight;
    if (lg < -745.0) return 0.0;
    if (lg > 709.0) throw numerical_error("specfun: scaled evaluation overflows double range");
    double v = std::exp(lg);
    return poly < 0.0 ? -v : v;
}

} // namespace

double legendre_p(int l, double x, int max_degree) {
    check_degree(l, max_degree, "legendre_p");
    if (std::fabs(x) > 1.0 + 1e-12 || !std::isfinite(x))
        throw std::domain_error("legendre_p: argument outside [-1, 1]");
    if (l == 0) return 1.0;
    double pm = 1.0, pc = x;
    for (int k = 1; k < l; ++k) {
        double pn = ((2 * k + 1) * x * pc - k * pm) / (k + 1);
        pm = pc;
        pc = pn;
    }
    return pc;
}

double assoc_laguerre(int n, double alpha, double x, int max_degree) {
    check_degree(n, max_degree, "assoc_laguerre");
    if (!(alpha > -1.0)) throw std::domain_error("assoc_laguerre: alpha must exceed -1");
    if (!(x >= 0.0) || !std::isfinite(x)) throw std::domain_error("assoc_laguerre: x must be >= 0");
    if (n == 0) return 1.0;
    double lm = 1.0, lc = 1.0 + alpha - x;
    for (int k = 1; k < n; ++k) {
        double ln = ((2 * k + 1 + alpha - x) * lc - (k + alpha) * lm) / (k + 1);
        lm = lc;
        lc = ln;
    }
    return lc;
}

double hermite_psi(int n, double x, int max_degree) {
    check_degree(n, max_degree, "hermite_psi");
    if (!std::isfinite(x)) throw std::domain_error("hermite_psi: non-finite argument");
    // psi_n(x) = 2^{-1/4} h_n(y) e^{-y^2/2},  y = x/sqrt(2), with h_n the
    // orthonormalized Hermite polynomial part (h_0 = pi^{-1/4}).
    const double y = x / std::sqrt(2.0);
    ScaledPair st;
    st.cur = std::pow(M_PI, -0.25);
    for (int k = 0; k < n; ++k) {
        double next = y * std::sqrt(2.0 / (k + 1)) * st.cur -
                      (k > 0 ? std::sqrt(static_cast<double>(k) / (k + 1)) * st.prev : 0.0);
        st.prev = st.cur;
        st.cur = next;
        st.renormalize();
    }
    const double log_weight = -0.25 * M_LN2 - 0.5 * y * y;
    return combine_scaled(st.cur, st.exp2, log_weight);
}

namespace {

// Normalized radial Laguerre part: ell_n(x) = L_n^{[1/2]}(x) sqrt(n!/Gamma(n+3/2)),
// recurrence  sqrt((k+1)(k+3/2)) ell_{k+1} = (2k+3/2-x) ell_k - sqrt(k(k+1/2)) ell_{k-1}.
constexpr double radial_alpha = 0.5;

double radial_prefactor_log() {
    // 2^{-1/4} * (4*pi)^{-1/2} folded together: phi_n(r) = C * ell_n(r^2/2) e^{-r^2/4}
    // with C = 2^{-5/4} pi^{-1/2}.
    static const double v = -1.25 * M_LN2 - 0.5 * std::log(M_PI);
    return v;
}

} // namespace

double phi_radial(int n, double r, int max_degree) {
    check_degree(n, max_degree, "phi_radial");
    if (!(r >= 0.0) || !std::isfinite(r)) throw std::domain_error("phi_radial: r must be >= 0");
    const double xx = 0.5 * r * r;
    ScaledPair st;
    st.cur = std::sqrt(1.0 / std::tgamma(1.0 + radial_alpha)); // 1/sqrt(Gamma(3/2))
    for (int k = 0; k < n; ++k) {
        double a = 2.0 * k + 1.0 + radial_alpha - xx;
        double b = (k > 0) ? std::sqrt(k * (k + radial_alpha)) : 0.0;
        double next = (a * st.cur - b * st.prev) / std::sqrt((k + 1.0) * (k + 1.0 + radial_alpha));
        st.prev = st.cur;
        st.cur = next;
        st.renormalize();
    }
    return combine_scaled(st.cur, st.exp2, radial_prefactor_log() - 0.5 * xx);
}

void phi_radial_all(int nmax, double r, std::vector<double>& out) {
    if (nmax < 0) throw std::domain_error("phi_radial_all: negative index");
    if (!(r >= 0.0) || !std::isfinite(r)) throw std::domain_error("phi_radial_all: r must be >= 0");
    out.assign(static_cast<size_t>(nmax) + 1, 0.0);
    const double xx = 0.5 * r * r;
    const double w = std::exp(radial_prefactor_log() - 0.5 * xx); // underflows to 0 for huge r
    double prev = 0.0;
    double cur = std::sqrt(1.0 / std::tgamma(1.0 + radial_alpha));
    out[0] = cur * w;
    for (int k = 0; k < nmax; ++k) {
        double a = 2.0 * k + 1.0 + radial_alpha - xx;
        double b = (k > 0) ? std::sqrt(k * (k + radial_alpha)) : 0.0;
        double next = (a * cur - b * prev) / std::sqrt((k + 1.0) * (k + 1.0 + radial_alpha));
        prev = cur;
        cur = next;
        out[static_cast<size_t>(k) + 1] = cur * w;
        // The polynomial part stays modest wherever w > 0 at practical grid
        // radii; if it does blow past the representable range the weighted
        // value is what matters, and that is already 0 here.
        if (!std::isfinite(cur)) {
            if (w == 0.0) { cur = 0.0; prev = 0.0; out[static_cast<size_t>(k) + 1] = 0.0; }
            else throw numerical_error("phi_radial_all: recurrence overflow");
        }
    }
}

double log_gamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("log_gamma: argument must be positive");
#if defined(__unix__) || defined(__APPLE__)
    // std::lgamma writes the global signgam, a data race under concurrency
    int sign = 0;
    return ::lgamma_r(x, &sign);
#else
    return std::lgamma(x);
#endif
}

double beta_function(double a, double b) {
    return std::exp(log_gamma(a) + log_gamma(b) - log_gamma(a + b));
}

namespace {

// Continued fraction for the regularized incomplete beta (modified Lentz).
double beta_cf(double a, double b, double x) {
    constexpr int max_iter = 400;
    constexpr double tiny = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) return h;
    }
    throw numerical_error("incomplete_beta: continued fraction did not converge");
}

} // namespace

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("incomplete_beta: a, b must be positive");
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("incomplete_beta: x must lie in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return beta_function(a, b);
    const double log_front = a * std::log(x) + b * std::log1p(-x);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return std::exp(log_front) * beta_cf(a, b, x) / a;
    }
    return beta_function(a, b) - std::exp(log_front) * beta_cf(b, a, 1.0 - x) / b;
}

std::vector<double> legendre_even_poly(int l) {
    if (l < 0) throw std::domain_error("legendre_even_poly: negative degree");
    // Monomial coefficients of P_l via the recurrence, then the substitution
    // x^k -> u^{(k+l)/2} (k and l share parity, so the powers are integers).
    std::vector<double> pm = {1.0};      // P_0
    std::vector<double> pc = {0.0, 1.0}; // P_1
    if (l == 0) return {1.0};
    for (int k = 1; k < l; ++k) {
        std::vector<double> pn(static_cast<size_t>(k) + 2, 0.0);
        for (size_t j = 0; j < pc.size(); ++j) pn[j + 1] += (2.0 * k + 1.0) * pc[j] / (k + 1.0);
        for (size_t j = 0; j < pm.size(); ++j) pn[j] -= static_cast<double>(k) * pm[j] / (k + 1.0);
        pm = std::move(pc);
        pc = std::move(pn);
    }
    std::vector<double> q(static_cast<size_t>(l) + 1, 0.0);
    for (size_t k = 0; k < pc.size(); ++k) {
        if (pc[k] == 0.0) continue;
        q[(k + static_cast<size_t>(l)) / 2] += pc[k];
    }
    return q;
}

} // namespace radboltz::specfun
