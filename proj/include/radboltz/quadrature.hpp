#ifndef RADBOLTZ_QUADRATURE_HPP
#define RADBOLTZ_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace radboltz::quadrature {

// Tolerances and budget for the singular angular integrals.  grading_exponent
// scales how deep the panel grading reaches toward the singular endpoint;
// 1.0 is already ample for the default tolerances.
struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_subdivisions = 256;
    double grading_exponent = 1.0;
};

struct GaussRule {
    std::vector<double> x; // nodes on [-1, 1]
    std::vector<double> w;
};

// Gauss-Legendre rule of the given order, computed once and cached.
const GaussRule& gauss_legendre(int order);

// Composite Gauss-Legendre over [a, b] split into `panels` equal panels.
double integrate_panels(const std::function<double(double)>& f, double a, double b,
                        int panels, int order);

// Nodes/weights of the same composite rule, for callers that sweep many
// integrands over one grid.
struct GridRule {
    std::vector<double> x;
    std::vector<double> w;
};
GridRule panel_grid(double a, double b, int panels, int order);

} // namespace radboltz::quadrature

#endif
