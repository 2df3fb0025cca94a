#include "radboltz/profile.hpp"
#include "radboltz/errors.hpp"
#include "radboltz/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace radboltz::profile {

RadialProfile RadialProfile::zero() {
    return RadialProfile{};
}

RadialProfile RadialProfile::from_samples(std::vector<double> r, std::vector<double> values) {
    if (r.size() != values.size() || r.size() < 2)
        throw std::invalid_argument("RadialProfile: need matching sample arrays of size >= 2");
    for (size_t i = 0; i < r.size(); ++i) {
        if (!std::isfinite(r[i]) || !std::isfinite(values[i]))
            throw std::invalid_argument("RadialProfile: non-finite sample");
        if (i > 0 && !(r[i] > r[i - 1]))
            throw std::invalid_argument("RadialProfile: radii must be strictly increasing");
    }
    if (r.front() < 0.0) throw std::invalid_argument("RadialProfile: radii must be >= 0");
    RadialProfile p;
    p.kind_ = Kind::Samples;
    p.r_ = std::move(r);
    p.values_ = std::move(values);
    return p;
}

RadialProfile RadialProfile::basis_sum(std::vector<double> coeffs) {
    RadialProfile p;
    p.kind_ = Kind::BasisSum;
    p.coeffs_ = std::move(coeffs);
    return p;
}

RadialProfile RadialProfile::weighted_basis_sum(std::vector<double> coeffs) {
    RadialProfile p;
    p.kind_ = Kind::WeightedBasisSum;
    p.coeffs_ = std::move(coeffs);
    return p;
}

RadialProfile RadialProfile::gaussian_bump(double center, double width, double amplitude) {
    if (!(width > 0.0)) throw std::invalid_argument("RadialProfile: bump width must be positive");
    RadialProfile p;
    p.kind_ = Kind::GaussianBump;
    p.center_ = center;
    p.width_ = width;
    p.amplitude_ = amplitude;
    return p;
}

double RadialProfile::eval(double r) const {
    if (!(r >= 0.0) || !std::isfinite(r)) throw std::domain_error("RadialProfile::eval: r must be >= 0");
    switch (kind_) {
    case Kind::Zero:
        return 0.0;
    case Kind::Samples: {
        if (r <= r_.front()) return values_.front();
        if (r >= r_.back()) return values_.back();
        auto it = std::upper_bound(r_.begin(), r_.end(), r);
        size_t i = static_cast<size_t>(it - r_.begin());
        double u = (r - r_[i - 1]) / (r_[i] - r_[i - 1]);
        return (1.0 - u) * values_[i - 1] + u * values_[i];
    }
    case Kind::BasisSum:
    case Kind::WeightedBasisSum: {
        if (coeffs_.empty()) return 0.0;
        static thread_local std::vector<double> work;
        specfun::phi_radial_all(static_cast<int>(coeffs_.size()) - 1, r, work);
        double acc = 0.0;
        for (size_t n = 0; n < coeffs_.size(); ++n) acc += coeffs_[n] * work[n];
        if (kind_ == Kind::WeightedBasisSum)
            acc *= std::pow(2.0 * M_PI, -0.75) * std::exp(-0.25 * r * r);
        return acc;
    }
    case Kind::GaussianBump: {
        double u = (r - center_) / width_;
        return amplitude_ * std::exp(-u * u);
    }
    }
    return 0.0;
}

double RadialProfile::support_radius() const {
    switch (kind_) {
    case Kind::Zero:
        return 1.0;
    case Kind::Samples:
        return r_.back();
    case Kind::BasisSum:
    case Kind::WeightedBasisSum: {
        // classical turning radius of the highest mode plus a Gaussian tail margin
        double n = coeffs_.empty() ? 0.0 : static_cast<double>(coeffs_.size() - 1);
        return 2.0 * std::sqrt(2.0 * n + 1.5) + 12.0;
    }
    case Kind::GaussianBump:
        return center_ + 9.0 * width_;
    }
    return 1.0;
}

} // namespace radboltz::profile
