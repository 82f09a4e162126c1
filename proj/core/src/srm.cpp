#include "sonar/srm.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "sonar/rng.hpp"

namespace sonar {

SrmFilterBank init_bank(int m_filters, uint64_t rng_seed) {
    if (m_filters < 1) throw std::invalid_argument("init_bank: need at least one filter");
    Rng rng(rng_seed);
    SrmFilterBank bank;
    bank.kernels = Tensor2(m_filters, kSrmKernelLen);
    for (auto& w : bank.kernels.v) w = rng.normal();
    project_constraints(bank.kernels);

    bank.mix_weights = Tensor2(1, m_filters);
    double stddev = 1.0 / std::sqrt(static_cast<double>(m_filters));
    for (auto& w : bank.mix_weights.v) w = stddev * rng.normal();
    bank.mix_bias = 0.0;
    return bank;
}

void project_constraints(Tensor2& kernels) {
    if (kernels.cols != kSrmKernelLen)
        throw std::invalid_argument("project_constraints: kernels must have 5 taps");
    if (!kernels.all_finite())
        throw std::invalid_argument("project_constraints: non-finite tap");
    for (int m = 0; m < kernels.rows; ++m) {
        double* w = kernels.row(m);
        w[kSrmCenter] = -1.0;
        double off_sum = w[0] + w[1] + w[3] + w[4];
        double delta = (off_sum - 1.0) / 4.0;
        w[0] -= delta;
        w[1] -= delta;
        w[3] -= delta;
        w[4] -= delta;
    }
}

SrmFilterBank project_constraints(SrmFilterBank bank) {
    project_constraints(bank.kernels);
    return bank;
}

double constraint_violation(const Tensor2& kernels) {
    double worst = 0.0;
    for (int m = 0; m < kernels.rows; ++m) {
        const double* w = kernels.row(m);
        double sum = w[0] + w[1] + w[2] + w[3] + w[4];
        worst = std::max(worst, std::abs(w[kSrmCenter] + 1.0));
        worst = std::max(worst, std::abs(sum));
    }
    return worst;
}

Tensor2 apply_kernels(const SrmFilterBank& bank, const Signal& sig) {
    sig.validate();
    const int t_len = sig.length();
    if (t_len < kSrmKernelLen)
        throw std::invalid_argument("apply_kernels: signal shorter than kernel");
    const int m_filters = bank.num_filters();
    Tensor2 maps(m_filters, t_len);
    const double* x = sig.samples.data();
    for (int m = 0; m < m_filters; ++m) {
        const double* w = bank.kernels.row(m);
        double* out = maps.row(m);
        // Interior: all five taps in range.
        for (int t = 2; t < t_len - 2; ++t)
            out[t] = w[0] * x[t - 2] + w[1] * x[t - 1] + w[2] * x[t] + w[3] * x[t + 1] + w[4] * x[t + 2];
        for (int t : {0, 1, t_len - 2, t_len - 1}) {
            double acc = 0.0;
            for (int k = 0; k < kSrmKernelLen; ++k) {
                int j = t + k - kSrmCenter;
                if (j >= 0 && j < t_len) acc += w[k] * x[j];
            }
            out[t] = acc;
        }
    }
    return maps;
}

std::vector<double> apply_bank(const SrmFilterBank& bank, const Signal& sig) {
    Tensor2 maps = apply_kernels(bank, sig);
    std::vector<double> out(static_cast<size_t>(maps.cols), bank.mix_bias);
    for (int m = 0; m < maps.rows; ++m) {
        double wm = bank.mix_weights.at(0, m);
        const double* src = maps.row(m);
        for (int t = 0; t < maps.cols; ++t) out[t] += wm * src[t];
    }
    return out;
}

std::vector<double> frequency_response(const double* kernel, int n_points) {
    if (n_points < 2) throw std::invalid_argument("frequency_response: need at least 2 points");
    constexpr double kPi = 3.141592653589793238462643383279;
    std::vector<double> mags(n_points);
    for (int i = 0; i < n_points; ++i) {
        double f = kPi * static_cast<double>(i) / static_cast<double>(n_points - 1);
        std::complex<double> h(0.0, 0.0);
        for (int k = 0; k < kSrmKernelLen; ++k)
            h += kernel[k] * std::complex<double>(std::cos(f * k), -std::sin(f * k));
        mags[i] = std::abs(h);
    }
    return mags;
}

}  // namespace sonar
