#ifndef LWP_RNG_HPP
#define LWP_RNG_HPP

#include <cstdint>

namespace lwp {

// Counter-based generator: value = mix(seed, stream, counter). Stateless per
// draw, so parallel trials replay identically regardless of evaluation order.
class CounterRng {
public:
    CounterRng(uint64_t seed, uint64_t stream) : seed_(seed), stream_(stream) {}

    uint64_t bits(uint64_t counter) const {
        // splitmix64 finalizer over the combined key
        uint64_t z = seed_ + 0x9e3779b97f4a7c15ULL * (stream_ + 1);
        z ^= counter + 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z ^= z >> 31;
        z += counter * 0xda942042e4dd58b5ULL;
        z = (z ^ (z >> 29)) * 0xff51afd7ed558ccdULL;
        z = (z ^ (z >> 32)) * 0xc4ceb9fe1a85ec53ULL;
        return z ^ (z >> 33);
    }

    // uniform in [0,1) with 53 random bits
    double uniform(uint64_t counter) const {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

    // uniform in [-1,1)
    double symmetric(uint64_t counter) const { return 2.0 * uniform(counter) - 1.0; }

    int sign(uint64_t counter) const { return (bits(counter) & 1) ? 1 : -1; }

    bool bernoulli(uint64_t counter, double prob) const { return uniform(counter) < prob; }

    // uniform integer in [0, n)
    uint64_t below(uint64_t counter, uint64_t n) const { return bits(counter) % n; }

private:
    uint64_t seed_;
    uint64_t stream_;
};

}  // namespace lwp

#endif
