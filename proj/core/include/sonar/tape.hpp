#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "sonar/tensor.hpp"

namespace sonar {

/// Probabilities below this floor are clamped before logs and their
/// gradient contribution masked, making 0*log(0/x) = 0 differentiable.
inline constexpr double kProbFloor = 1e-12;

/// Reverse-mode autodiff over Tensor2 values. A tape is built forward by
/// the ops below (each returns a node id), then backward(root) fills
/// gradients in reverse creation order. One tape per forward pass; tapes
/// are independent, so concurrent evaluation over clips is safe as long
/// as each worker owns its own tape.
class Tape {
public:
    /// Input node without parameters attached.
    int leaf(Tensor2 value);

    /// Parameter node: snapshots the current value and remembers the name
    /// so accumulate_param_grads can route gradients back by name.
    int param(const ParamStore& ps, const std::string& name);

    const Tensor2& val(int id) const { return nodes_[id].val; }
    const Tensor2& grad(int id) const { return nodes_[id].grad; }

    /// Scalar value of a 1x1 node.
    double scalar(int id) const;

    /// Seeds d(root)/d(root) = 1 and sweeps the tape once. Root must be 1x1.
    void backward(int root);

    /// Adds every param node's gradient into sink[name] (allocated on demand).
    void accumulate_param_grads(std::map<std::string, Tensor2>& sink) const;

    // --- elementwise / structural ---
    int add(int a, int b);
    int add_rowvec(int a, int bias);  // bias is 1xC, broadcast over rows
    int scale(int a, double c);
    int add_const(int a, double c);
    int gelu(int a);
    int softmax_rows(int a);
    int mean_rows(int a);  // -> 1xC
    int concat_cols(int a, int b);
    int slice_cols(int a, int c0, int c1);
    int slice_rows(int a, int r0, int r1);

    // --- linear algebra ---
    int matmul(int a, int b);     // (MxK)(KxN)
    int matmul_nt(int a, int b);  // (MxK)(NxK)^T -> MxN

    // --- signal front-ends ---
    /// Strided 1-D conv over a 1xT signal: output F x D with
    /// F = ceil(T / stride); the signal is zero-extended on the right.
    int conv1d(int x, int w, int bias, int stride);

    /// Constrained-bank residual: M length-5 cross-correlations (zero pad 2)
    /// mixed down by the 1x1 layer. x is 1xT, kernels Mx5, mix 1xM,
    /// mix_bias 1x1; result 1xT.
    int srm_apply(int x, int kernels, int mix, int mix_bias);

    // --- losses ---
    /// Frame-averaged Jensen-Shannon divergence (log base 2, in [0,1]) of
    /// twoF x D tensors of row distributions.
    int js_framewise(int p, int q);

    /// -w[y] * log softmax(logits)[y], natural log; logits 1x2.
    int wce(int logits, int y, double w_fake, double w_real);

    size_t node_count() const { return nodes_.size(); }

private:
    struct Node {
        Tensor2 val;
        Tensor2 grad;
        bool touched = false;
        std::function<void(Tape&)> back;
        std::string param_name;
    };

    std::vector<Node> nodes_;

    int push(Tensor2 val, std::function<void(Tape&)> back = nullptr);
    Tensor2& grad_mut(int id);
    void add_grad(int id, const Tensor2& g);
};

/// y = x*W + b. W is KxN, b 1xN (pass b = -1 to skip the bias).
int linear(Tape& t, int x, int w, int b);

/// Multi-head scaled dot-product attention with learnable projections.
/// q,k,v are FxD; wq/wk/wv/wo are DxD; D must divide by n_heads.
int attention(Tape& t, int q, int k, int v, int n_heads, int wq, int wk, int wv, int wo);

}  // namespace sonar
