#pragma once

/// Deterministic random-number kit for the Monte Carlo oracle. Everything is
/// pinned to mt19937_64 plus fixed transformation algorithms so that a (seed,
/// substream) pair reproduces bit-identical draws on any platform.

#include <cmath>
#include <cstdint>
#include <random>

#include "hyfso/errors.hpp"

namespace hyfso::rng {

/// splitmix64 step; used to derive independent substream seeds from a master
/// seed without correlation between adjacent indices.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t index) {
    std::uint64_t state = master_seed ^ (0xa0761d6478bd642fULL * (index + 1));
    std::uint64_t s = splitmix64(state);
    s ^= splitmix64(state);
    return s;
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on the open interval (0, 1): 53-bit mantissa, offset half-ulp
    /// so 0 and 1 are unreachable (safe under log()).
    double uniform() {
        const std::uint64_t bits = engine_();
        return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; the second value of each pair is
    /// cached, so draws come in deterministic order.
    double normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * M_PI * u2;
        cached_ = radius * std::sin(angle);
        has_cached_ = true;
        return radius * std::cos(angle);
    }

    double exponential() { return -std::log(uniform()); }

    /// Gamma(shape, scale) by Marsaglia-Tsang squeeze; shapes below one are
    /// boosted through the U^(1/shape) identity.
    double gamma(double shape, double scale) {
        if (!(shape > 0.0) || !(scale > 0.0))
            throw domain_error("Rng::gamma: shape and scale must be > 0");
        if (shape < 1.0) {
            const double boost = std::pow(uniform(), 1.0 / shape);
            return gamma(shape + 1.0, scale) * boost;
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x;
            double v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform();
            const double x2 = x * x;
            if (u < 1.0 - 0.0331 * x2 * x2) return d * v * scale;
            if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v * scale;
        }
    }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

} // namespace hyfso::rng
