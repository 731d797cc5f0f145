#include "hsv/rng.hpp"

#include <cmath>

namespace hsv {

namespace {

inline std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

void Rng::reseed(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& s : s_) s = splitmix64(sm);
    has_cached_normal_ = false;
}

Rng Rng::stream(std::uint64_t seed, std::uint64_t stream_id) {
    // Mix the stream id through splitmix64 so nearby ids give unrelated states.
    std::uint64_t x = seed;
    std::uint64_t a = splitmix64(x);
    x ^= 0x6a09e667f3bcc909ULL + stream_id;
    std::uint64_t b = splitmix64(x);
    Rng r(a ^ rotl(b, 17) ^ (stream_id * 0x9e3779b97f4a7c15ULL));
    return r;
}

std::uint64_t Rng::next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform() {
    // 53-bit mantissa, strictly inside (0,1).
    const double u = (next_u64() >> 11) * 0x1.0p-53;
    return u == 0.0 ? 0x1.0p-54 : u;
}

double Rng::uniform(double a, double b) { return a + (b - a) * uniform(); }

double Rng::normal() {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    cached_normal_ = v * f;
    has_cached_normal_ = true;
    return u * f;
}

double Rng::exponential(double mean) { return -mean * std::log(uniform()); }

double Rng::gamma(double shape) {
    if (shape < 1.0) {
        // Boost via G(a) = G(a+1) * U^(1/a).
        const double g = gamma(shape + 1.0);
        return g * std::pow(uniform(), 1.0 / shape);
    }
    // Marsaglia-Tsang squeeze.
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double Rng::beta(double a, double b) {
    const double x = gamma(a);
    const double y = gamma(b);
    return x / (x + y);
}

double Rng::truncated_normal_lower(double mean, double sd, double lower) {
    const double alpha = (lower - mean) / sd;
    if (alpha < 0.5) {
        // Plenty of mass above the bound: plain rejection.
        for (;;) {
            const double z = normal();
            if (z >= alpha) return mean + sd * z;
        }
    }
    // Robert (1995) exponential-proposal rejection for the upper tail.
    const double a_star = 0.5 * (alpha + std::sqrt(alpha * alpha + 4.0));
    for (;;) {
        const double z = alpha - std::log(uniform()) / a_star;
        const double d = z - a_star;
        if (std::log(uniform()) <= -0.5 * d * d) return mean + sd * z;
    }
}

}  // namespace hsv
