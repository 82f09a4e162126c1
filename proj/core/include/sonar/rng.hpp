#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace sonar {

/// Deterministic random source. std::mt19937_64 gives a portable bit
/// stream, and the uniform/normal transforms here are pinned down so the
/// same seed produces the same doubles on every platform (the standard
/// distribution objects are implementation-defined and would not).
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    uint64_t next_u64() { return gen_(); }

    /// Uniform in [0, 1): 53 mantissa bits.
    double uniform();

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi);

    /// Standard normal via Box-Muller (both values used, in order).
    double normal();

    /// Uniform integer in [0, n).
    uint64_t below(uint64_t n);

    std::vector<double> normal_vec(size_t n);

    /// Fisher-Yates with draws from this stream.
    template <typename T>
    void shuffle(std::vector<T>& xs) {
        for (size_t i = xs.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(below(i));
            std::swap(xs[i - 1], xs[j]);
        }
    }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// SplitMix64 mix; used to derive independent per-item seeds from
/// (master seed, index, tag) without correlated streams.
uint64_t mix_seed(uint64_t seed, uint64_t index, uint64_t tag);

}  // namespace sonar
