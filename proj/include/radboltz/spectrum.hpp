#ifndef RADBOLTZ_SPECTRUM_HPP
#define RADBOLTZ_SPECTRUM_HPP

#include "radboltz/cross_section.hpp"

#include <string>
#include <vector>

namespace radboltz::spectrum {

using cross_section::QuadratureSpec;
using cross_section::SingularityModel;

// Precomputed eigenvalues and bilinear collision coefficients up to the
// truncation order.  Immutable once built; shareable across threads.
//
//   lambda(n)    : eigenvalue of the linearized radial operator on mode n
//                  (lambda(0) = lambda(1) = 0)
//   alpha(n, m)  : coefficient of mode n+m in the collision product of modes
//                  n and m, without the degeneracy factor
//   coupling(k,l): alpha(k, l) * sqrt((2k+2l+1) / ((2k+1)(2l+1))), k >= 1 --
//                  the weight actually entering the mode ODE system
class SpectrumTables {
public:
    SpectrumTables() = default;
    SpectrumTables(SingularityModel model, QuadratureSpec quad, int truncation,
                   std::vector<double> lambda, std::vector<double> alpha);

    const SingularityModel& model() const { return model_; }
    const QuadratureSpec& quad() const { return quad_; }
    int truncation() const { return truncation_; }

    double lambda(int n) const;
    double alpha(int n, int m) const;
    double coupling(int k, int l) const;
    const std::vector<double>& lambdas() const { return lambda_; }

    // Structural sanity: lambda(0)=lambda(1)=0, positivity and monotonicity,
    // sign pattern of alpha.  Returns a list of human-readable violations
    // (empty when everything holds).
    std::vector<std::string> invariant_violations() const;

private:
    SingularityModel model_;
    QuadratureSpec quad_;
    int truncation_ = 0;
    std::vector<double> lambda_;   // length N+1
    std::vector<double> alpha_;    // (N+1)^2 row-major
    std::vector<double> coupling_; // (N+1)^2 row-major, rows k >= 1
};

SpectrumTables build_tables(const SingularityModel& model, int truncation,
                            const QuadratureSpec& spec);

// Just the eigenvalue sequence lambda(1..N); much cheaper than full tables
// and usable at large N for asymptotics.
std::vector<double> lambda_sequence(const SingularityModel& model, int truncation,
                                    const QuadratureSpec& spec);

// Eigenvalue of the linearized operator on a general (n, l) basis function,
// independent of the magnetic index.
struct GeneralEigenvalue {
    int n = 0;
    int l = 0;
    double value = 0.0;
};
GeneralEigenvalue eigenvalue_general(const SingularityModel& model, int n, int l,
                                     const QuadratureSpec& spec);

// Verifies the strict subadditivity lambda(j+k) < lambda(j) + lambda(k) for
// all 2 <= j, k <= jmax.  Violations are reported, never thrown.
struct ResonanceReport {
    struct Entry {
        int j = 0, k = 0;
        double sum_side = 0.0;  // lambda(j) + lambda(k)
        double comb_side = 0.0; // lambda(j + k)
    };
    std::vector<Entry> violations;
    double min_margin = 0.0; // min over pairs of (sum_side - comb_side)
    int argmin_j = 0, argmin_k = 0;
    bool clean() const { return violations.empty(); }
};
ResonanceReport no_resonance_check(const std::vector<double>& lambda, int jmax);
ResonanceReport no_resonance_check(const SpectrumTables& tables, int jmax);

// Least-squares slope of log lambda(k) against log k over [k_min, k_max].
struct ExponentFit {
    double s_est = 0.0;
    double residual = 0.0; // RMS of the fit residuals
};
ExponentFit fit_exponent(const std::vector<double>& lambda, int k_min, int k_max);
ExponentFit asymptotic_exponent_fit(const SpectrumTables& tables, int k_min, int k_max);

// Empirical constant for the coupling decay: max over 1 <= n, n+m <= N of
// coupling(n,m) * n^{3/4} / (1 + m/n)^s, with the arg-max pair.
struct CouplingBoundReport {
    double c_emp = 0.0;
    int argmax_n = 0;
    int argmax_m = 0;
};
CouplingBoundReport coupling_bound_check(const SpectrumTables& tables);

} // namespace radboltz::spectrum

#endif
