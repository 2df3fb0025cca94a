#ifndef RADBOLTZ_CASCADE_HPP
#define RADBOLTZ_CASCADE_HPP

#include "radboltz/profile.hpp"
#include "radboltz/spectrum.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace radboltz::cascade {

using profile::RadialProfile;
using spectrum::SpectrumTables;

// Spectral coefficients of the fluctuation at one instant.
struct ModeCoefficients {
    double t = 0.0;
    std::vector<double> b; // indices 0..N
};

// Initial data for the mode system.  in_null_perp means the mass and energy
// components vanish (b0 = b1 = 0), the regime where the closed-form cascade
// applies.
struct InitialData {
    std::vector<double> coeffs;
    bool in_null_perp = false;
    double source_l2 = -1.0; // L2 norm of the projected profile, when known

    static InitialData from_coefficients(std::vector<double> b0);
};

// b_n(0) = ∫ g0(r) phi_n(r) 4 pi r^2 dr for n = 0..N, with a Bessel check
// against the profile norm.
InitialData project_initial(const RadialProfile& g0, int truncation,
                            const cross_section::QuadratureSpec& quad);

// Right-hand side of the mode ODE system; component 0 is identically zero.
std::vector<double> rhs(const SpectrumTables& tables, const std::vector<double>& b);

// One mode of the closed-form solution: b_n(t) = sum_j coeff_j exp(-rate_j t).
struct ExpTerm {
    double rate = 0.0;
    double coeff = 0.0;
};

struct ModeSolution {
    std::vector<ExpTerm> terms; // sorted by rate, distinct beyond the merge tolerance
    bool closed_form = true;    // false when a near-resonant denominator forced fallback
};

struct SolveOptions {
    double merge_rel_tol = 1e-9;
    double resonance_rel_tol = 1e-9;
    double prune_rel_threshold = 1e-16; // relative to ||b(0)||_2
    std::size_t term_budget = 100000;   // per mode, after pruning
};

class ExpSumSolution {
public:
    ExpSumSolution() = default;
    ExpSumSolution(int truncation, std::vector<ModeSolution> modes, SolveOptions opts,
                   std::size_t pruned, std::vector<std::string> events)
        : truncation_(truncation), modes_(std::move(modes)), opts_(opts),
          pruned_terms_(pruned), events_(std::move(events)) {}

    int truncation() const { return truncation_; }
    const std::vector<ModeSolution>& modes() const { return modes_; }
    const ModeSolution& mode(int n) const { return modes_.at(static_cast<size_t>(n)); }
    const SolveOptions& options() const { return opts_; }
    std::size_t pruned_terms() const { return pruned_terms_; }
    const std::vector<std::string>& events() const { return events_; }
    bool all_closed_form() const;

private:
    int truncation_ = 0;
    std::vector<ModeSolution> modes_;
    SolveOptions opts_;
    std::size_t pruned_terms_ = 0;
    std::vector<std::string> events_;
};

// Solve the triangular system mode by mode via variation of constants.
// Requires initial data with b0 = b1 = 0.  Near-resonant modes are flagged
// (never silently mis-solved); evaluate() refuses flagged solutions.
ExpSumSolution solve_closed_form(const SpectrumTables& tables, const InitialData& init,
                                 const SolveOptions& opts = {});

ModeCoefficients evaluate(const ExpSumSolution& sol, double t);

// Adaptive embedded Runge-Kutta (Dormand-Prince 5(4)) over the given time
// grid; the independent cross-check of the closed form, and the only route
// for data outside the null-orthogonal subspace.
struct StepControl {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double initial_step = 0.0; // 0: choose automatically
    long max_steps = 20000000;
};

std::vector<ModeCoefficients> solve_numeric(const SpectrumTables& tables, const InitialData& init,
                                            const std::vector<double>& t_grid,
                                            const StepControl& control = {});

} // namespace radboltz::cascade

#endif
