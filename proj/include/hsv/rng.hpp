#pragma once

#include <cstdint>
#include <vector>

namespace hsv {

// xoshiro256++ with splitmix64 seeding. We keep our own generator (and our own
// distribution code) so that chain output is bit-reproducible across platforms
// and standard-library versions.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) { reseed(seed); }

    void reseed(std::uint64_t seed);

    // Independent stream for a (seed, id) pair; used by parallel workers.
    static Rng stream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t next_u64();

    double uniform();                      // (0,1)
    double uniform(double a, double b);    // (a,b)
    double normal();                       // standard normal (polar method)
    double normal(double mean, double sd) { return mean + sd * normal(); }
    double exponential(double mean);       // mean parameterization
    bool bernoulli(double p) { return uniform() < p; }
    double gamma(double shape);            // unit scale, shape > 0
    double gamma(double shape, double scale) { return scale * gamma(shape); }
    double inv_gamma(double shape, double scale) { return scale / gamma(shape); }
    double beta(double a, double b);
    double chi_squared(double dof) { return gamma(0.5 * dof, 2.0); }

    // N(mean, sd^2) truncated to (lower, +inf). Robert (1995) tail sampler
    // when the bound is far in the upper tail, naive rejection otherwise.
    double truncated_normal_lower(double mean, double sd, double lower);

  private:
    std::uint64_t s_[4];
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

}  // namespace hsv
