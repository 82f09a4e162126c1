#include "sonar/rng.hpp"

#include <cmath>

namespace sonar {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kInv53 = 1.0 / 9007199254740992.0;  // 2^-53
}  // namespace

double Rng::uniform() { return static_cast<double>(gen_() >> 11) * kInv53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // u1 in (0,1] so the log is finite.
    double u1 = (static_cast<double>(gen_() >> 11) + 1.0) * kInv53;
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(kTwoPi * u2);
    have_spare_ = true;
    return r * std::cos(kTwoPi * u2);
}

uint64_t Rng::below(uint64_t n) {
    // Rejection sampling to kill modulo bias.
    uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
        x = gen_();
    } while (x >= limit);
    return x % n;
}

std::vector<double> Rng::normal_vec(size_t n) {
    std::vector<double> out(n);
    for (auto& x : out) x = normal();
    return out;
}

uint64_t mix_seed(uint64_t seed, uint64_t index, uint64_t tag) {
    uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1) + 0xbf58476d1ce4e5b9ULL * (tag + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace sonar
