#include "sonar/fft.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace sonar {

namespace {

constexpr double kPi = 3.141592653589793238462643383279;

bool is_pow2(size_t n) { return n != 0 && (n & (n - 1)) == 0; }

size_t next_pow2(size_t n) {
    size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// Precomputed twiddles for one power-of-two size.
struct Pow2Plan {
    size_t n = 0;
    std::vector<size_t> bitrev;
    std::vector<cplx> twiddle;  // e^{-2pi i k/n} for k < n/2

    explicit Pow2Plan(size_t n_) : n(n_), bitrev(n_), twiddle(n_ / 2) {
        size_t log2n = 0;
        while ((size_t{1} << log2n) < n) ++log2n;
        for (size_t i = 0; i < n; ++i) {
            size_t r = 0;
            for (size_t b = 0; b < log2n; ++b)
                if (i & (size_t{1} << b)) r |= size_t{1} << (log2n - 1 - b);
            bitrev[i] = r;
        }
        for (size_t k = 0; k < n / 2; ++k) {
            double a = -2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
            twiddle[k] = cplx(std::cos(a), std::sin(a));
        }
    }

    void run(std::vector<cplx>& x, bool inverse) const {
        for (size_t i = 0; i < n; ++i) {
            size_t j = bitrev[i];
            if (i < j) std::swap(x[i], x[j]);
        }
        for (size_t len = 2; len <= n; len <<= 1) {
            size_t half = len / 2;
            size_t step = n / len;
            for (size_t base = 0; base < n; base += len) {
                for (size_t k = 0; k < half; ++k) {
                    cplx w = twiddle[k * step];
                    if (inverse) w = std::conj(w);
                    cplx u = x[base + k];
                    cplx t = x[base + k + half] * w;
                    x[base + k] = u + t;
                    x[base + k + half] = u - t;
                }
            }
        }
        if (inverse) {
            double inv = 1.0 / static_cast<double>(n);
            for (auto& c : x) c *= inv;
        }
    }
};

// Bluestein reduction of length-n DFT to a power-of-two convolution.
struct BluesteinPlan {
    size_t n = 0;
    size_t m = 0;                // convolution length, power of two >= 2n-1
    std::vector<cplx> chirp;     // e^{-i pi k^2 / n}
    std::vector<cplx> b_spec;    // FFT of the chirp kernel
    std::shared_ptr<const Pow2Plan> pow2;

    explicit BluesteinPlan(size_t n_, std::shared_ptr<const Pow2Plan> p2)
        : n(n_), m(p2->n), chirp(n_), pow2(std::move(p2)) {
        for (size_t k = 0; k < n; ++k) {
            // k^2 mod 2n keeps the phase argument small and exact.
            size_t k2 = (k * k) % (2 * n);
            double a = -kPi * static_cast<double>(k2) / static_cast<double>(n);
            chirp[k] = cplx(std::cos(a), std::sin(a));
        }
        std::vector<cplx> b(m, cplx(0.0, 0.0));
        b[0] = std::conj(chirp[0]);
        for (size_t k = 1; k < n; ++k) {
            b[k] = std::conj(chirp[k]);
            b[m - k] = std::conj(chirp[k]);
        }
        pow2->run(b, false);
        b_spec = std::move(b);
    }

    void run(std::vector<cplx>& x, bool inverse) const {
        std::vector<cplx> a(m, cplx(0.0, 0.0));
        for (size_t k = 0; k < n; ++k) {
            cplx c = inverse ? std::conj(chirp[k]) : chirp[k];
            a[k] = x[k] * c;
        }
        pow2->run(a, false);
        for (size_t k = 0; k < m; ++k) a[k] *= inverse ? std::conj(b_spec[k]) : b_spec[k];
        pow2->run(a, true);
        for (size_t k = 0; k < n; ++k) {
            cplx c = inverse ? std::conj(chirp[k]) : chirp[k];
            x[k] = a[k] * c;
        }
        if (inverse) {
            double invn = 1.0 / static_cast<double>(n);
            for (auto& c : x) c *= invn;
        }
    }
};

std::shared_ptr<const Pow2Plan> pow2_plan(size_t n) {
    static std::mutex mu;
    static std::map<size_t, std::shared_ptr<const Pow2Plan>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    auto plan = std::make_shared<const Pow2Plan>(n);
    cache.emplace(n, plan);
    return plan;
}

std::shared_ptr<const BluesteinPlan> bluestein_plan(size_t n) {
    static std::mutex mu;
    static std::map<size_t, std::shared_ptr<const BluesteinPlan>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    auto plan = std::make_shared<const BluesteinPlan>(n, pow2_plan(next_pow2(2 * n - 1)));
    cache.emplace(n, plan);
    return plan;
}

void transform(std::vector<cplx>& x, bool inverse) {
    size_t n = x.size();
    if (n == 0) throw std::invalid_argument("fft: empty input");
    if (n == 1) return;
    if (is_pow2(n)) {
        pow2_plan(n)->run(x, inverse);
    } else {
        bluestein_plan(n)->run(x, inverse);
    }
}

}  // namespace

void fft(std::vector<cplx>& x) { transform(x, false); }

void ifft(std::vector<cplx>& x) { transform(x, true); }

std::vector<cplx> fft_real(const std::vector<double>& x) {
    std::vector<cplx> c(x.size());
    for (size_t i = 0; i < x.size(); ++i) c[i] = cplx(x[i], 0.0);
    fft(c);
    return c;
}

std::vector<double> ifft_to_real(std::vector<cplx> spectrum) {
    ifft(spectrum);
    std::vector<double> out(spectrum.size());
    for (size_t i = 0; i < spectrum.size(); ++i) out[i] = spectrum[i].real();
    return out;
}

std::vector<cplx> dft_naive(const std::vector<cplx>& x) {
    size_t n = x.size();
    std::vector<cplx> out(n, cplx(0.0, 0.0));
    for (size_t k = 0; k < n; ++k) {
        for (size_t t = 0; t < n; ++t) {
            double a = -2.0 * kPi * static_cast<double>((k * t) % n) / static_cast<double>(n);
            out[k] += x[t] * cplx(std::cos(a), std::sin(a));
        }
    }
    return out;
}

}  // namespace sonar
