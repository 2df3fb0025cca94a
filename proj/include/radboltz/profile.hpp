#ifndef RADBOLTZ_PROFILE_HPP
#define RADBOLTZ_PROFILE_HPP

#include <vector>

namespace radboltz::profile {

// A radial function of |v| (or of |xi| on the frequency side).  Closed-form
// descriptors are preferred wherever an integral is taken against the
// profile; sampled profiles interpolate linearly and are meant for emitted
// data, not for high-accuracy quadrature.
class RadialProfile {
public:
    enum class Kind { Zero, Samples, BasisSum, WeightedBasisSum, GaussianBump };

    static RadialProfile zero();
    static RadialProfile from_samples(std::vector<double> r, std::vector<double> values);
    // sum_n c[n] phi_n(r)
    static RadialProfile basis_sum(std::vector<double> coeffs);
    // sqrt(mu_3)(r) * sum_n c[n] phi_n(r)
    static RadialProfile weighted_basis_sum(std::vector<double> coeffs);
    // a * exp(-((r - center)/width)^2)
    static RadialProfile gaussian_bump(double center, double width, double amplitude);

    Kind kind() const { return kind_; }
    const std::vector<double>& coeffs() const { return coeffs_; }
    const std::vector<double>& sample_r() const { return r_; }
    const std::vector<double>& sample_values() const { return values_; }

    double eval(double r) const;

    // Radius beyond which the profile is numerically negligible (guides
    // quadrature windows).
    double support_radius() const;

private:
    Kind kind_ = Kind::Zero;
    std::vector<double> coeffs_;
    std::vector<double> r_, values_;
    double center_ = 0.0, width_ = 1.0, amplitude_ = 0.0;
};

} // namespace radboltz::profile

#endif
