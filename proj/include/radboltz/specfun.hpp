#ifndef RADBOLTZ_SPECFUN_HPP
#define RADBOLTZ_SPECFUN_HPP

#include <cstddef>
#include <vector>

namespace radboltz::specfun {

// Index of a basis function: radial quantum number n and angular degree l.
// The radial solver works entirely at l = 0; l enters only through the
// general eigenvalue formula.  (The magnetic index is degenerate for every
// quantity computed here and is not carried.)
struct BasisIndex {
    int n = 0;
    int l = 0;
};

inline constexpr int default_max_degree = 10000;

// P_l(x) by the three-term recurrence.  |x| may exceed 1 by at most 1e-12
// (rounding slack); larger values are a domain error.
double legendre_p(int l, double x, int max_degree = default_max_degree);

// Generalized Laguerre polynomial L_n^{[alpha]}(x), alpha > -1, x >= 0,
// by the stable recurrence in n.
double assoc_laguerre(int n, double alpha, double x, int max_degree = default_max_degree);

// Hermite function psi_n, orthonormal on the real line:
//   psi_n(x) = 2^{-1/4} phi_n(2^{-1/2} x),  psi_0(x) = (2*pi)^{-1/4} e^{-x^2/4}.
// Large n and |x| are handled by rescaling the recurrence and combining the
// normalization in log magnitude, so indices up to a few hundred stay finite.
double hermite_psi(int n, double x, int max_degree = default_max_degree);

// Radial basis function evaluated at |v| = r (the l = 0 member of the
// eigenbasis of the harmonic oscillator on R^3, spherical factor included):
//   phi_0(r) = (2*pi)^{-3/4} e^{-r^2/4}.
double phi_radial(int n, double r, int max_degree = default_max_degree);

// All of phi_0(r) .. phi_nmax(r) in one recurrence pass.  This is the kernel
// behind projections and reconstructions; one call costs O(nmax).
void phi_radial_all(int nmax, double r, std::vector<double>& out);

// ln Gamma(x) for x > 0.
double log_gamma(double x);

// Unnormalized incomplete beta integral  B_x(a,b) = ∫_0^x t^{a-1} (1-t)^{b-1} dt,
// a, b > 0, 0 <= x <= 1.  Relative accuracy ~1e-13.
double incomplete_beta(double a, double b, double x);

// exp(ln Gamma(a) + ln Gamma(b) - ln Gamma(a+b)) -- the complete beta function.
double beta_function(double a, double b);

// Coefficients q_j of the polynomial Q_l(u) = P_l(sqrt(u)) u^{l/2} = sum_j q_j u^j.
// Q_l is a genuine polynomial of degree l (lowest power ceil(l/2)); it evaluates
// P_l(cos theta) cos^l(theta) in the variable u = cos^2(theta).
std::vector<double> legendre_even_poly(int l);

} // namespace radboltz::specfun

#endif
