#pragma once

#include <cstdint>
#include <random>

namespace stackplan {

/// Deterministic random stream. The engine is std::mt19937_64, whose output
/// sequence is fixed by the standard; the derived draws below avoid the
/// implementation-defined std distributions so a seed reproduces the same
/// run on every platform.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform integer in [0, bound). bound must be > 0. Rejection sampling
    /// on the top of the range keeps the draw exactly uniform.
    std::uint64_t uniform_index(std::uint64_t bound) {
        const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
        std::uint64_t x = engine_();
        while (x > limit) x = engine_();
        return x % bound;
    }

    /// Uniform double in [0, 1) built from the top 53 bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) {
        if (p <= 0.0) return false;
        if (p >= 1.0) return true;
        return uniform01() < p;
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace stackplan
