#ifndef RADBOLTZ_FIELD_HPP
#define RADBOLTZ_FIELD_HPP

#include "radboltz/cascade.hpp"
#include "radboltz/profile.hpp"
#include "radboltz/spectrum.hpp"

#include <vector>

namespace radboltz::field {

using cascade::ModeCoefficients;
using profile::RadialProfile;
using spectrum::SpectrumTables;

// g(t, r) = sum_n b_n(t) phi_n(r) sampled on the given radii.
RadialProfile reconstruct(const ModeCoefficients& b, const std::vector<double>& r_grid);

// Weighted l2 norms of a coefficient vector.
//   L2                    : (sum b_n^2)^{1/2}
//   WeightedSemigroup(t)  : (sum exp(lambda_n t) b_n^2)^{1/2}
//   FracSobolev(s/2)      : (sum (2n + 3/2)^{2*(s/2)} b_n^2)^{1/2}
//   SemigroupFracSobolev  : both weights combined
// Weights are assembled in log space; a term outside the representable range
// raises numerical_error.
struct NormKind {
    enum class Family { L2, WeightedSemigroup, FracSobolev, SemigroupFracSobolev } family =
        Family::L2;
    double time = 0.0;   // semigroup parameter t >= 0
    double s_half = 0.0; // fractional exponent s/2 in (0, 1/2)

    static NormKind l2() { return {}; }
    static NormKind weighted_semigroup(double t) { return {Family::WeightedSemigroup, t, 0.0}; }
    static NormKind frac_sobolev(double s_half) { return {Family::FracSobolev, 0.0, s_half}; }
    static NormKind semigroup_frac_sobolev(double t, double s_half) {
        return {Family::SemigroupFracSobolev, t, s_half};
    }
};

double spectral_norm(const std::vector<double>& b, const NormKind& kind,
                     const SpectrumTables& tables);

// Pointwise check of the decay bound along a trajectory:
//   sum_n exp(lambda_n t) b_n(t)^2  <=  exp(-lambda(2)(1-delta) t) * g0_norm^2.
struct DecayReport {
    struct Row {
        double t = 0.0;
        double weighted_sq = 0.0; // left side
        double bound_sq = 0.0;    // right side
    };
    std::vector<Row> rows;
    double max_ratio = 0.0;          // max over rows of weighted_sq / bound_sq
    double first_violation_t = -1.0; // -1 when the bound holds everywhere
    bool pass = true;
};

DecayReport decay_certificate(const std::vector<ModeCoefficients>& trajectory,
                              const SpectrumTables& tables, double delta, double g0_norm);

// Checks that t -> sum_n exp(lambda_n t) b_n(t)^2 never increases along the
// grid (within a small slack proportional to the initial value).
struct MonotonicityReport {
    std::vector<double> values;
    double max_increase = 0.0; // most positive forward difference
    double slack = 0.0;
    bool pass = true;
};

MonotonicityReport lyapunov_monotonicity(const std::vector<ModeCoefficients>& trajectory,
                                         const SpectrumTables& tables);

// Least-squares fit of log |b_n| against (2n + 3/2)^s; a positive slope c is
// the numerical witness of Gevrey-type coefficient decay at time t.
struct GelfandShilovFit {
    double c = 0.0;
    double residual = 0.0;
    int modes_used = 0;
};

GelfandShilovFit gelfand_shilov_diagnostic(const ModeCoefficients& b, const SpectrumTables& tables);

} // namespace radboltz::field

#endif
