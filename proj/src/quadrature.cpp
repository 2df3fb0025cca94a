#include "radboltz/quadrature.hpp"
#include "radboltz/errors.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace radboltz::quadrature {

namespace {

GaussRule make_rule(int order) {
    if (order < 1 || order > 200) throw std::domain_error("gauss_legendre: order out of range");
    GaussRule r;
    r.x.resize(order);
    r.w.resize(order);
    const int m = (order + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Newton on P_order(x) from the Tricomi initial guess.
        double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 1; k < order; ++k) {
                double p2 = ((2 * k + 1) * x * p1 - k * p0) / (k + 1);
                p0 = p1;
                p1 = p2;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        // One more evaluation at the converged node for the weight.
        double p0 = 1.0, p1 = x;
        for (int k = 1; k < order; ++k) {
            double p2 = ((2 * k + 1) * x * p1 - k * p0) / (k + 1);
            p0 = p1;
            p1 = p2;
        }
        dp = order * (x * p1 - p0) / (x * x - 1.0);
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.x[i] = -x;
        r.w[i] = w;
        r.x[order - 1 - i] = x;
        r.w[order - 1 - i] = w;
    }
    if (order % 2 == 1) r.x[order / 2] = 0.0;
    return r;
}

} // namespace

const GaussRule& gauss_legendre(int order) {
    static std::map<int, GaussRule> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, make_rule(order)).first;
    return it->second;
}

double integrate_panels(const std::function<double(double)>& f, double a, double b,
                        int panels, int order) {
    const GaussRule& g = gauss_legendre(order);
    const double h = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        double acc = 0.0;
        for (size_t i = 0; i < g.x.size(); ++i) acc += g.w[i] * f(mid + 0.5 * h * g.x[i]);
        total += 0.5 * h * acc;
    }
    return total;
}

GridRule panel_grid(double a, double b, int panels, int order) {
    const GaussRule& g = gauss_legendre(order);
    GridRule out;
    out.x.reserve(static_cast<size_t>(panels) * order);
    out.w.reserve(static_cast<size_t>(panels) * order);
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        for (size_t i = 0; i < g.x.size(); ++i) {
            out.x.push_back(mid + 0.5 * h * g.x[i]);
            out.w.push_back(0.5 * h * g.w[i]);
        }
    }
    return out;
}

} // namespace radboltz::quadrature
