#ifndef RADBOLTZ_CROSS_SECTION_HPP
#define RADBOLTZ_CROSS_SECTION_HPP

#include "radboltz/quadrature.hpp"

#include <functional>
#include <string>
#include <vector>

namespace radboltz::cross_section {

using quadrature::QuadratureSpec;

// Functional form of the grazing-collision cross section on [-pi/4, pi/4]:
//   PowerLawTheta: beta(theta) = amplitude * |theta|^{-1-2s}
//   PowerLawSine:  beta(theta) = amplitude * |sin theta|^{-1-2s} * cos theta
// The sine form is the reference test model: under t = sin^2(theta) every
// moment against it is an incomplete beta function, which gives every table
// entry an exact independent oracle.
enum class Form { PowerLawTheta, PowerLawSine };

struct SingularityModel {
    double s = 0.5;         // singularity exponent, 0 < s < 1
    double amplitude = 1.0; // overall constant, > 0
    Form form = Form::PowerLawSine;

    void validate() const; // throws std::domain_error on bad parameters
};

std::string form_name(Form f);
Form form_from_name(const std::string& name); // throws std::domain_error

// Pointwise cross section; theta = 0 is a singular-point error.
double beta_eval(const SingularityModel& model, double theta);

// Every integral below is of the shape
//     I[F] = ∫_{-pi/4}^{pi/4} beta(theta) F(sin^2 theta) dtheta
//          = ∫_0^{1/2} t^{-1-s} w(t) F(t) dt,           t = sin^2 theta,
// with w smooth and positive on [0, 1/2].  The substitution confines the
// singularity to a known power of t at the left endpoint, where a
// geometrically graded panel mesh plus one analytic leading-order term
// resolves it to near machine precision for any s in (0, 1).
struct AngularMesh {
    std::vector<double> t; // nodes, ascending in (t_min, 1/2]
    std::vector<double> w; // quadrature weight times the full measure t^{-1-s} w(t)
    double t_min = 0.0;    // left cutoff handled by the analytic stub
    double lead_weight = 0.0; // amplitude * w(0)
    double s = 0.0;
};

// Number of graded panels implied by the model and spec.
int graded_panels(const SingularityModel& model, const QuadratureSpec& spec);

// top_splits subdivides the last octave [1/4, 1/2]: a monomial t^n grows to
// the right edge and needs roughly n / (2 * order) panels there, while the
// graded left end resolves any (1-t)^m factor for free.
AngularMesh angular_mesh(const SingularityModel& model, int panels, int gauss_order,
                         int top_splits = 1);

// Panels needed on the top octave for integrands carrying t^max_power.
int top_octave_splits(int max_power, int gauss_order);

// Analytic contribution of (0, t_min] for an integrand whose symbol behaves
// like lead_coeff * t^{vanish_order} at t = 0.
double mesh_stub(const AngularMesh& mesh, double lead_coeff, double vanish_order);

// Integrate F (given on the t variable) with the graded mesh at increasing
// Gauss orders until two estimates agree within spec tolerances.
double integrate_angular(const SingularityModel& model, const QuadratureSpec& spec,
                         const std::function<double(double)>& integrand_t,
                         double vanish_order, double lead_coeff, const std::string& what,
                         int max_power = 1);

// Lambda_{n,m} = I[t^n (1-t)^m], n >= 1.  n = 0 diverges and is rejected;
// the subtracted variants below are the finite n = 0 surrogates.
double angular_moment(const SingularityModel& model, int n, int m, const QuadratureSpec& spec);

// I[1 - (1-t)^n - t^n]; zero for n = 1 identically.
double regularized_moment(const SingularityModel& model, int n, const QuadratureSpec& spec);

// I[1 - (1-t)^n], n >= 1.
double regularized_cos_moment(const SingularityModel& model, int n, const QuadratureSpec& spec);

// 1 - (1-t)^n evaluated without cancellation (t * sum_{l<n} (1-t)^l).
double one_minus_pow(double t, int n);

} // namespace radboltz::cross_section

#endif
