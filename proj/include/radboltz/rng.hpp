#ifndef RADBOLTZ_RNG_HPP
#define RADBOLTZ_RNG_HPP

#include <cmath>
#include <random>

namespace radboltz::rng {

// Draws built directly on the mt19937_64 stream; distribution adapters in
// the standard library are implementation-defined, which would break
// byte-identical reruns across toolchains.
inline double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline double standard_normal(std::mt19937_64& gen) {
    double u1 = uniform01(gen), u2 = uniform01(gen);
    while (u1 <= 0.0) u1 = uniform01(gen);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

} // namespace radboltz::rng

#endif
