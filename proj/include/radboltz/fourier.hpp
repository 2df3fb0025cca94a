#ifndef RADBOLTZ_FOURIER_HPP
#define RADBOLTZ_FOURIER_HPP

#include "radboltz/profile.hpp"
#include "radboltz/spectrum.hpp"

#include <cstdint>
#include <vector>

namespace radboltz::fourier {

using cross_section::QuadratureSpec;
using cross_section::SingularityModel;
using profile::RadialProfile;
using spectrum::SpectrumTables;

// Closed form of the 3D radial transform of the n-th weighted basis function:
//   ((2n+1)!)^{-1/2} rho^{2n} exp(-rho^2/2).
double fourier_mode(int n, double rho);

// Transform of the weighted 1D Hermite function at even index 2k:
//   (-1)^k rho^{2k} exp(-rho^2/2) / sqrt((2k)!).
double weighted_hermite_transform_even(int two_k, double rho);

// A sampled or closed-form radial Fourier transform.  Closed-form profiles
// (sums of fourier_mode terms) evaluate anywhere and expose the derivative
// in the squared frequency, which the collision integral needs near its
// singular angle.
class FourierProfile {
public:
    enum class Kind { ModeSum, Samples };

    static FourierProfile mode(int n);
    static FourierProfile mode_sum(std::vector<double> coeffs);
    static FourierProfile from_samples(std::vector<double> rho, std::vector<double> values,
                                       double value_at_zero);

    Kind kind() const { return kind_; }
    double value_at_zero() const { return value_at_zero_; }
    bool slow_decay_warning() const { return slow_decay_warning_; }
    void set_slow_decay_warning(bool v) { slow_decay_warning_ = v; }
    const std::vector<double>& coeffs() const { return coeffs_; }
    const std::vector<double>& sample_rho() const { return rho_; }
    const std::vector<double>& sample_values() const { return values_; }

    double eval(double rho) const;
    // u(y) with y = rho^2 (profiles are smooth functions of the squared
    // frequency); du/dy exists for mode sums only.
    double eval_sq(double y) const;
    bool has_derivative() const { return kind_ == Kind::ModeSum; }
    double deriv_sq(double y) const;

private:
    Kind kind_ = Kind::ModeSum;
    std::vector<double> coeffs_;
    std::vector<double> rho_, values_;
    double value_at_zero_ = 0.0;
    bool slow_decay_warning_ = false;
};

// Quadrature 3D radial transform: ghat(rho) = (4 pi / rho) ∫ g(r) sin(rho r) r dr,
// with the rho -> 0 limit 4 pi ∫ g r^2 dr stored explicitly.
FourierProfile fourier_radial(const RadialProfile& g, const std::vector<double>& rho_grid,
                              const QuadratureSpec& quad);

// Max relative discrepancy between the quadrature transform of the n-th
// weighted basis function and the closed form at doubled Hermite index,
// including the sign and degeneracy factors linking the radial and 1D bases.
double hermite_link_check(int n, const std::vector<double>& rho_grid, const QuadratureSpec& quad);

// Frequencies near the transform's peak; a fixed tiny frequency would make
// the relative comparison ill-conditioned at large n.
std::vector<double> hermite_link_default_grid(int n);

// Fourier side of the collision operator on radial profiles at frequency rho:
//   ∫ beta(theta) [ ghat(rho sin theta) fhat(rho cos theta) - ghat(0) fhat(rho) ] dtheta.
// The integrable singularity is handled by the graded mesh; below a guard
// threshold the bracket is replaced by its analytic linear term.
double bobylev_apply(const SingularityModel& model, const FourierProfile& g_hat,
                     const FourierProfile& f_hat, double rho, const QuadratureSpec& quad);

// Collision product of two basis modes computed through bobylev_apply versus
// the table coefficient times the closed-form transform of the output mode;
// returns the max relative error over the frequency grid.  n = 0 exercises
// the regularized branch.
double product_identity_check(const SpectrumTables& tables, int n, int m,
                              const std::vector<double>& rho_grid, const QuadratureSpec& quad);

// Random scan of |<collision(f,g), h>| / (||f|| ||H^{s/2} g|| ||H^{s/2} h||)
// computed purely from the tables.
struct TrilinearScan {
    double max_ratio = 0.0;
    int evaluated = 0;
    int skipped = 0;
};
TrilinearScan trilinear_ratio_scan(const SpectrumTables& tables, int trials, int mode_cap,
                                   std::uint64_t seed);

} // namespace radboltz::fourier

#endif
