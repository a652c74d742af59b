#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace casecost {

/// Seeded generator with bit-reproducible output across platforms. The
/// engine is the standard-mandated mt19937_64; the real/int mappings are
/// written out explicitly because the standard library distributions are
/// implementation-defined.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1) with 53 random mantissa bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [lo, hi], both inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1u;
        return lo + static_cast<std::int64_t>(engine_() % span);
    }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Fisher-Yates, driven by uniform_int for reproducibility.
    template <typename T>
    void shuffle(std::vector<T>& values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(i) - 1));
            std::swap(values[i - 1], values[j]);
        }
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace casecost
