#pragma once

#include <cstdint>
#include <vector>

#include "sonar/signal.hpp"
#include "sonar/tensor.hpp"

namespace sonar {

/// Length of every SRM kernel and the index of its center tap.
inline constexpr int kSrmKernelLen = 5;
inline constexpr int kSrmCenter = 2;

/// Bank of M constrained high-pass prediction-error kernels plus the 1x1
/// mixing layer that collapses the M residual maps into x_noise.
/// Post-projection every kernel satisfies w[2] == -1 and sum(w) == 0.
struct SrmFilterBank {
    Tensor2 kernels;      // M x 5
    Tensor2 mix_weights;  // 1 x M
    double mix_bias = 0.0;

    int num_filters() const { return kernels.rows; }
};

/// Taps i.i.d. N(0,1) then projected once; mix weights N(0, 1/M), bias 0.
SrmFilterBank init_bank(int m_filters, uint64_t rng_seed);

/// Hard projection onto the constraint set, kernel by kernel: the center
/// tap is overwritten with -1 and the four remaining taps are shifted
/// uniformly so they sum to +1. Idempotent.
void project_constraints(Tensor2& kernels);
SrmFilterBank project_constraints(SrmFilterBank bank);

/// Largest constraint violation over the bank: max of |w[2] + 1| and
/// |sum(w)| across kernels.
double constraint_violation(const Tensor2& kernels);

/// Per-kernel residual maps F_noise (M x T). Cross-correlation, stride 1,
/// two zero samples of padding each side so T is preserved.
Tensor2 apply_kernels(const SrmFilterBank& bank, const Signal& sig);

/// The full RFE: residual maps mixed down to one sequence x_noise (length T).
std::vector<double> apply_bank(const SrmFilterBank& bank, const Signal& sig);

/// |sum_k w[k] e^{-j 2 pi f k}| sampled at n_points frequencies in [0, pi].
/// `kernel` must have kSrmKernelLen entries.
std::vector<double> frequency_response(const double* kernel, int n_points);

}  // namespace sonar
