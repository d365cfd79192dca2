#ifndef WEILINV_RANDOM_HPP
#define WEILINV_RANDOM_HPP

#include <cstdint>

#include "weilinv/rational.hpp"

namespace weilinv {

/// Deterministic splittable generator: every (seed, index) pair yields an
/// independent stream, so sample i never depends on how samples 0..i-1
/// consumed the generator.
class SplitRng {
public:
    SplitRng(std::uint64_t seed, std::uint64_t index)
        : state_(mix(mix(seed + 0x9e3779b97f4a7c15ULL) ^ mix(index + 0xbf58476d1ce4e5b9ULL))) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    /// Uniform integer in [lo, hi].
    long long next_int(long long lo, long long hi) {
        std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<long long>(next() % span);
    }

    double next_double(double lo, double hi) {
        double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
        return lo + u * (hi - lo);
    }

    /// Small random rational with numerator in [-bound, bound] and
    /// denominator in [1, den_bound].
    Rational next_rational(long long bound = 20, long long den_bound = 6) {
        return Rational(Integer(next_int(-bound, bound)), Integer(next_int(1, den_bound)));
    }

    /// Nonzero variant, for denominators and group parameters.
    Rational next_nonzero_rational(long long bound = 20, long long den_bound = 6) {
        for (;;) {
            Rational q = next_rational(bound, den_bound);
            if (q != 0) return q;
        }
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

} // namespace weilinv

#endif
