#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace cohdisc {

/// splitmix64 step; used to derive independent per-chunk seeds from one master seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic normal sampler: mt19937_64 + explicit Box-Muller, so streams are
/// reproducible across standard libraries (std::normal_distribution is not).
class GaussianSampler {
  public:
    explicit GaussianSampler(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in (0, 1).
    double uniform() {
        // 53 random mantissa bits, then shift away from zero by half an ulp.
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1p-53;
    }

    /// Standard normal deviate.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        const double ang = 6.283185307179586476925286766559 * u2;
        spare_ = mag * std::sin(ang);
        has_spare_ = true;
        return mag * std::cos(ang);
    }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace cohdisc
