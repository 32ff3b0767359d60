// rng.hpp — seedable, platform-independent Gaussian sampling and
// deterministic pairwise summation

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace decohere {

// Deterministic seed derivation (splitmix64 finalizer).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Box-Muller over explicitly constructed uniforms; std::mt19937_64 output is
// fully specified by the standard, so sequences are identical across
// platforms for a given seed.
class GaussianSampler {
  public:
    explicit GaussianSampler(std::uint64_t seed) : engine_(seed) {}

    double operator()() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = next_unit_open_closed();
        const double u2 = next_unit_open_closed();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * M_PI * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

  private:
    // uniform in (0, 1]: 53 high bits shifted into the mantissa, offset by one ulp
    double next_unit_open_closed() {
        return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
    }

    std::mt19937_64 engine_;
    double spare_{0};
    bool has_spare_{false};
};

// Pairwise reduction; summation order is fixed by the input order.
template <typename T>
T pairwise_sum(const std::vector<T>& values, std::size_t begin, std::size_t end) {
    const std::size_t n = end - begin;
    if (n == 0) return T(0);
    if (n <= 8) {
        T acc = values[begin];
        for (std::size_t k = begin + 1; k < end; ++k) acc += values[k];
        return acc;
    }
    const std::size_t mid = begin + n / 2;
    return pairwise_sum(values, begin, mid) + pairwise_sum(values, mid, end);
}

template <typename T>
T pairwise_sum(const std::vector<T>& values) {
    return pairwise_sum(values, 0, values.size());
}

}  // namespace decohere
