#include "radboltz/field.hpp"
#include "radboltz/errors.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <stdexcept>

namespace radboltz::field {

RadialProfile reconstruct(const ModeCoefficients& b, const std::vector<double>& r_grid) {
    if (r_grid.size() < 2) throw std::invalid_argument("reconstruct: need at least two radii");
    RadialProfile combo = RadialProfile::basis_sum(b.b);
    std::vector<double> values;
    values.reserve(r_grid.size());
    for (double r : r_grid) values.push_back(combo.eval(r));
    return RadialProfile::from_samples(r_grid, std::move(values));
}

double spectral_norm(const std::vector<double>& b, const NormKind& kind,
                     const SpectrumTables& tables) {
    if (kind.time < 0.0) throw std::domain_error("spectral_norm: semigroup time must be >= 0");
    const bool semigroup = kind.family == NormKind::Family::WeightedSemigroup ||
                           kind.family == NormKind::Family::SemigroupFracSobolev;
    const bool sobolev = kind.family == NormKind::Family::FracSobolev ||
                         kind.family == NormKind::Family::SemigroupFracSobolev;
    if (sobolev && !(kind.s_half > 0.0 && kind.s_half < 0.5))
        throw std::domain_error("spectral_norm: fractional exponent must lie in (0, 1/2)");
    if (semigroup && b.size() > static_cast<size_t>(tables.truncation()) + 1)
        throw std::invalid_argument("spectral_norm: tables too small for the coefficient vector");
    double acc = 0.0;
    for (size_t n = 0; n < b.size(); ++n) {
        if (b[n] == 0.0) continue;
        double log_term = 2.0 * std::log(std::fabs(b[n]));
        if (semigroup) log_term += tables.lambda(static_cast<int>(n)) * kind.time;
        if (sobolev) log_term += 2.0 * kind.s_half * std::log(2.0 * n + 1.5);
        if (log_term > 700.0)
            throw numerical_error("spectral_norm: weighted term exceeds the representable range");
        acc += std::exp(log_term);
    }
    return std::sqrt(acc);
}

DecayReport decay_certificate(const std::vector<ModeCoefficients>& trajectory,
                              const SpectrumTables& tables, double delta, double g0_norm) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("decay_certificate: delta in (0,1)");
    if (!(g0_norm >= 0.0)) throw std::domain_error("decay_certificate: negative norm");
    DecayReport rep;
    const double rate = tables.lambda(2) * (1.0 - delta);
    for (const auto& state : trajectory) {
        double weighted = spectral_norm(state.b, NormKind::weighted_semigroup(state.t), tables);
        DecayReport::Row row;
        row.t = state.t;
        row.weighted_sq = weighted * weighted;
        row.bound_sq = std::exp(-rate * state.t) * g0_norm * g0_norm;
        double ratio = row.bound_sq > 0.0
                           ? row.weighted_sq / row.bound_sq
                           : (row.weighted_sq > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
        rep.max_ratio = std::max(rep.max_ratio, ratio);
        if (ratio > 1.0 + 1e-12 && rep.first_violation_t < 0.0) rep.first_violation_t = state.t;
        rep.rows.push_back(row);
    }
    rep.pass = rep.first_violation_t < 0.0;
    return rep;
}

MonotonicityReport lyapunov_monotonicity(const std::vector<ModeCoefficients>& trajectory,
                                         const SpectrumTables& tables) {
    MonotonicityReport rep;
    for (const auto& state : trajectory) {
        double w = spectral_norm(state.b, NormKind::weighted_semigroup(state.t), tables);
        rep.values.push_back(w * w);
    }
    const double scale = rep.values.empty() ? 0.0 : std::max(rep.values.front(), 1e-300);
    rep.slack = 1e-10 * scale;
    for (size_t i = 1; i < rep.values.size(); ++i)
        rep.max_increase = std::max(rep.max_increase, rep.values[i] - rep.values[i - 1]);
    rep.pass = rep.max_increase <= rep.slack;
    return rep;
}

GelfandShilovFit gelfand_shilov_diagnostic(const ModeCoefficients& b,
                                           const SpectrumTables& tables) {
    double peak = 0.0;
    for (double x : b.b) peak = std::max(peak, std::fabs(x));
    if (peak == 0.0) throw numerical_error("gelfand_shilov_diagnostic: zero coefficient vector");
    const double floor = 1e-13 * peak;
    const double s = tables.model().s;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int npts = 0;
    for (size_t n = 0; n < b.b.size(); ++n) {
        double a = std::fabs(b.b[n]);
        if (a <= floor) continue;
        double x = std::pow(2.0 * n + 1.5, s);
        double y = std::log(a);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++npts;
    }
    if (npts < 4)
        throw numerical_error("gelfand_shilov_diagnostic: fewer than 4 coefficients above the "
                              "noise floor");
    double denom = npts * sxx - sx * sx;
    double slope = (npts * sxy - sx * sy) / denom;
    double intercept = (sy - slope * sx) / npts;
    double rss = 0.0;
    for (size_t n = 0; n < b.b.size(); ++n) {
        double a = std::fabs(b.b[n]);
        if (a <= floor) continue;
        double x = std::pow(2.0 * n + 1.5, s);
        double r = std::log(a) - (slope * x + intercept);
        rss += r * r;
    }
    return {-slope, std::sqrt(rss / npts), npts};
}

} // namespace radboltz::field
