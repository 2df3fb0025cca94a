#include "radboltz/cross_section.hpp"
#include "radboltz/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace radboltz::cross_section {

void SingularityModel::validate() const {
    if (!(s > 0.0 && s < 1.0)) throw std::domain_error("SingularityModel: s must lie in (0, 1)");
    if (!(amplitude > 0.0) || !std::isfinite(amplitude))
        throw std::domain_error("SingularityModel: amplitude must be positive and finite");
}

std::string form_name(Form f) {
    return f == Form::PowerLawTheta ? "power-law-theta" : "power-law-sine";
}

Form form_from_name(const std::string& name) {
    if (name == "power-law-theta") return Form::PowerLawTheta;
    if (name == "power-law-sine") return Form::PowerLawSine;
    throw std::domain_error("unknown cross-section form '" + name + "'");
}

double beta_eval(const SingularityModel& model, double theta) {
    model.validate();
    const double quarter_pi = 0.25 * M_PI;
    if (theta == 0.0) throw std::domain_error("beta_eval: theta = 0 is the singular point");
    if (!(std::fabs(theta) <= quarter_pi + 1e-12))
        throw std::domain_error("beta_eval: |theta| must not exceed pi/4");
    const double a = std::fabs(theta);
    if (model.form == Form::PowerLawTheta) return model.amplitude * std::pow(a, -1.0 - 2.0 * model.s);
    return model.amplitude * std::pow(std::fabs(std::sin(a)), -1.0 - 2.0 * model.s) * std::cos(a);
}

namespace {

// Smooth part of the measure after t = sin^2(theta):
//   sine form:  w(t) = 1
//   theta form: w(t) = (asin(sqrt t)/sqrt t)^{-1-2s} / sqrt(1-t)
double measure_smooth(const SingularityModel& model, double t) {
    if (model.form == Form::PowerLawSine) return 1.0;
    double eta = (t == 0.0) ? 1.0 : std::asin(std::sqrt(t)) / std::sqrt(t);
    return std::pow(eta, -1.0 - 2.0 * model.s) / std::sqrt(1.0 - t);
}

constexpr int min_panels = 8;
constexpr int max_panels = 320; // keeps t^{-1-s} at the deepest node representable

} // namespace

int graded_panels(const SingularityModel& model, const QuadratureSpec& spec) {
    double g = spec.grading_exponent > 0.0 ? spec.grading_exponent : 1.0;
    int k = static_cast<int>(std::lround((48.0 + 16.0 * model.s) * g));
    k = std::min(k, spec.max_subdivisions); // the user's budget is a hard cap
    return std::clamp(k, min_panels, max_panels);
}

int top_octave_splits(int max_power, int gauss_order) {
    return std::max(1, (max_power + 2 * gauss_order - 1) / (2 * gauss_order));
}

AngularMesh angular_mesh(const SingularityModel& model, int panels, int gauss_order,
                         int top_splits) {
    model.validate();
    panels = std::clamp(panels, 1, max_panels);
    top_splits = std::clamp(top_splits, 1, 512);
    const auto& g = quadrature::gauss_legendre(gauss_order);
    AngularMesh mesh;
    mesh.s = model.s;
    mesh.lead_weight = model.amplitude * measure_smooth(model, 0.0);
    mesh.t.reserve((static_cast<size_t>(panels) + top_splits) * gauss_order);
    mesh.w.reserve(mesh.t.capacity());
    double hi = 0.5;
    for (int p = 0; p < panels; ++p) hi *= 0.5; // hi = t_min after the loop
    mesh.t_min = hi;
    auto add_panel = [&](double lo, double up) {
        double mid = 0.5 * (lo + up), half = 0.5 * (up - lo);
        for (size_t i = 0; i < g.x.size(); ++i) {
            double t = mid + half * g.x[i];
            double measure = model.amplitude * measure_smooth(model, t) *
                             std::pow(t, -1.0 - model.s);
            mesh.t.push_back(t);
            mesh.w.push_back(half * g.w[i] * measure);
        }
    };
    // Geometric octaves ascending: [t_min 2^p, t_min 2^{p+1}]; the last one
    // split uniformly for steep monomials.
    double lo = mesh.t_min;
    for (int p = 0; p < panels; ++p) {
        double up = 2.0 * lo;
        if (p + 1 == panels && top_splits > 1) {
            double width = (up - lo) / top_splits;
            for (int q = 0; q < top_splits; ++q)
                add_panel(lo + q * width, (q + 1 == top_splits) ? up : lo + (q + 1) * width);
        } else {
            add_panel(lo, up);
        }
        lo = up;
    }
    return mesh;
}

double mesh_stub(const AngularMesh& mesh, double lead_coeff, double vanish_order) {
    if (lead_coeff == 0.0) return 0.0;
    const double a = vanish_order - mesh.s;
    return mesh.lead_weight * lead_coeff * std::pow(mesh.t_min, a) / a;
}

namespace {

double eval_on_mesh(const AngularMesh& mesh, const std::function<double(double)>& f,
                    double vanish_order, double lead_coeff) {
    double acc = mesh_stub(mesh, lead_coeff, vanish_order);
    for (size_t i = 0; i < mesh.t.size(); ++i) acc += mesh.w[i] * f(mesh.t[i]);
    return acc;
}

} // namespace

double integrate_angular(const SingularityModel& model, const QuadratureSpec& spec,
                         const std::function<double(double)>& integrand_t,
                         double vanish_order, double lead_coeff, const std::string& what,
                         int max_power) {
    const int panels = graded_panels(model, spec);
    double prev = eval_on_mesh(angular_mesh(model, std::max(panels - 8, 8), 14,
                                            top_octave_splits(max_power, 14)),
                               integrand_t, vanish_order, lead_coeff);
    double cur = eval_on_mesh(angular_mesh(model, panels, 20, top_octave_splits(max_power, 20)),
                              integrand_t, vanish_order, lead_coeff);
    double tol = std::max(spec.abs_tol, spec.rel_tol * std::fabs(cur));
    if (std::fabs(cur - prev) <= tol) return cur;
    double deep = eval_on_mesh(angular_mesh(model, std::min(panels + 16, max_panels), 28,
                                            top_octave_splits(max_power, 28)),
                               integrand_t, vanish_order, lead_coeff);
    tol = std::max(spec.abs_tol, spec.rel_tol * std::fabs(deep));
    if (std::fabs(deep - cur) <= tol) return deep;
    throw quadrature_error(what, std::fabs(deep - cur), tol);
}

double one_minus_pow(double t, int n) {
    double acc = 0.0, p = 1.0;
    const double c = 1.0 - t;
    for (int l = 0; l < n; ++l) {
        acc += p;
        p *= c;
    }
    return t * acc;
}

double angular_moment(const SingularityModel& model, int n, int m, const QuadratureSpec& spec) {
    if (n < 1)
        throw std::domain_error("angular_moment: moment diverges for n = 0 "
                                "(use the regularized variants)");
    if (m < 0) throw std::domain_error("angular_moment: m must be >= 0");
    auto f = [n, m](double t) { return std::pow(t, n) * std::pow(1.0 - t, m); };
    return integrate_angular(model, spec, f, static_cast<double>(n), 1.0,
                             "angular_moment(n=" + std::to_string(n) + ",m=" + std::to_string(m) + ")",
                             n);
}

double regularized_moment(const SingularityModel& model, int n, const QuadratureSpec& spec) {
    if (n < 1) throw std::domain_error("regularized_moment: n must be >= 1");
    if (n == 1) return 0.0; // integrand is identically zero
    auto f = [n](double t) { return one_minus_pow(t, n) - std::pow(t, n); };
    return integrate_angular(model, spec, f, 1.0, static_cast<double>(n),
                             "regularized_moment(n=" + std::to_string(n) + ")", n);
}

double regularized_cos_moment(const SingularityModel& model, int n, const QuadratureSpec& spec) {
    if (n < 1) throw std::domain_error("regularized_cos_moment: n must be >= 1");
    auto f = [n](double t) { return one_minus_pow(t, n); };
    return integrate_angular(model, spec, f, 1.0, static_cast<double>(n),
                             "regularized_cos_moment(n=" + std::to_string(n) + ")");
}

} // namespace radboltz::cross_section
