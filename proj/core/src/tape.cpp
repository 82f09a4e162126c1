#include "sonar/tape.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace sonar {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
constexpr double kInvLn2 = 1.4426950408889634074;  // 1/ln(2)

double log2_clamped(double x) { return std::log2(x); }
}  // namespace

int Tape::push(Tensor2 val, std::function<void(Tape&)> back) {
    nodes_.push_back(Node{std::move(val), Tensor2{}, false, std::move(back), {}});
    return static_cast<int>(nodes_.size()) - 1;
}

Tensor2& Tape::grad_mut(int id) {
    Node& n = nodes_[id];
    if (n.grad.size() == 0) n.grad = Tensor2(n.val.rows, n.val.cols);
    n.touched = true;
    return n.grad;
}

void Tape::add_grad(int id, const Tensor2& g) {
    Tensor2& dst = grad_mut(id);
    for (size_t i = 0; i < dst.v.size(); ++i) dst.v[i] += g.v[i];
}

int Tape::leaf(Tensor2 value) { return push(std::move(value)); }

int Tape::param(const ParamStore& ps, const std::string& name) {
    int id = push(ps.value(name));
    nodes_[id].param_name = name;
    return id;
}

double Tape::scalar(int id) const {
    const Tensor2& v = nodes_[id].val;
    if (v.rows != 1 || v.cols != 1) throw std::invalid_argument("Tape::scalar: node is not 1x1");
    return v.v[0];
}

void Tape::backward(int root) {
    const Tensor2& rv = nodes_[root].val;
    if (rv.rows != 1 || rv.cols != 1) throw std::invalid_argument("Tape::backward: root must be 1x1");
    grad_mut(root).v[0] = 1.0;
    for (int i = root; i >= 0; --i) {
        Node& n = nodes_[i];
        if (n.touched && n.back) n.back(*this);
    }
}

void Tape::accumulate_param_grads(std::map<std::string, Tensor2>& sink) const {
    for (const Node& n : nodes_) {
        if (n.param_name.empty() || !n.touched) continue;
        auto it = sink.find(n.param_name);
        if (it == sink.end()) {
            sink.emplace(n.param_name, n.grad);
        } else {
            Tensor2& dst = it->second;
            for (size_t i = 0; i < dst.v.size(); ++i) dst.v[i] += n.grad.v[i];
        }
    }
}

// ---------------------------------------------------------------- elementwise

int Tape::add(int a, int b) {
    const Tensor2& av = nodes_[a].val;
    const Tensor2& bv = nodes_[b].val;
    if (!av.same_shape(bv)) throw std::invalid_argument("Tape::add: shape mismatch");
    Tensor2 out = av;
    for (size_t i = 0; i < out.v.size(); ++i) out.v[i] += bv.v[i];
    return push(std::move(out), [a, b, out_id = static_cast<int>(nodes_.size())](Tape& t) {
        const Tensor2& g = t.nodes_[out_id].grad;
        t.add_grad(a, g);
        t.add_grad(b, g);
    });
}

int Tape::add_rowvec(int a, int bias) {
    const Tensor2& av = nodes_[a].val;
    const Tensor2& bv = nodes_[bias].val;
    if (bv.rows != 1 || bv.cols != av.cols)
        throw std::invalid_argument("Tape::add_rowvec: bias must be 1 x cols");
    Tensor2 out = av;
    for (int r = 0; r < out.rows; ++r)
        for (int c = 0; c < out.cols; ++c) out.at(r, c) += bv.at(0, c);
    return push(std::move(out), [a, bias, out_id = static_cast<int>(nodes_.size())](Tape& t) {
        const Tensor2& g = t.nodes_[out_id].grad;
        t.add_grad(a, g);
        Tensor2& db = t.grad_mut(bias);
        for (int r = 0; r < g.rows; ++r)
            for (int c = 0; c < g.cols; ++c) db.at(0, c) += g.at(r, c);
    });
}

int Tape::scale(int a, double c) {
    Tensor2 out = nodes_[a].val;
    for (auto& x : out.v) x *= c;
    return push(std::move(out), [a, c, out_id = static_cast<int>(nodes_.size())](Tape& t) {
        const Tensor2& g = t.nodes_[out_id].grad;
        Tensor2& da = t.grad_mut(a);
        for (size_t i = 0; i < da.v.size(); ++i) da.v[i] += c * g.v[i];
    });
}

int Tape::add_const(int a, double c) {
    Tensor2 out = nodes_[a].val;
    for (auto& x : out.v) x += c;
    return push(std::move(out), [a, out_id = static_cast<int>(nodes_.size())](Tape& t) {
        t.add_grad(a, t.nodes_[out_id].grad);
    });
}

int Tape::gelu(int a) {
    const Tensor2& av = nodes_[a].val;
    Tensor2 out(av.rows, av.cols);
    for (size_t i = 0; i < av.v.size(); ++i) {
        double x = av.v[i];
        out.v[i] = 0.5 * x * (1.0 + std::erf(x * kInvSqrt2));
    }
    return push(std::move(out), [a, out_id = static_cast<int>(nodes_.size())](Tape& t) {
        const Tensor2& g = t.nodes_[out_id].grad;
        const Tensor2& x = t.nodes_[a].val;
        Tensor2& da = t.grad_mut(a);
        for (size_t i = 0; i < x.v.size(); ++i) {
            double xi = x.v[i];
            double cdf = 0.5 * (1.0 + std::erf(xi * kInvSqrt2));
            double pdf = kInvSqrt2Pi * std::exp(-0.5 * xi * xi);
            da.v[i] += g.v[i] * (cdf + xi * pdf);
        }
    });
}

int Tape::softmax_rows(int a) {
    const Tensor2& av = nodes_[a].val;
    if (!av.all_finite()) throw std::invalid_argument("softmax_rows: non-finite input");
    Tensor2 out(av.rows, av.cols);
    for (int r = 0; r < av.rows; ++r) {
        const double* x = av.row(r);
        double* y = out.row(r);
        double mx = x[0];
        for (int c = 1; c < av.cols; ++c) mx = std::max(mx, x[c]);
        double denom = 0.0;
        for (int c = 0; c < av.cols; ++c) {
            y[c] = std::exp(x[c] - mx);
            denom += y[c];
        }
        double inv = 1.0 / denom;
        for (int c = 0; c < av.cols; ++c) y[c] *= inv;
    }
    return push(std::move(out), [a, out_id = static_cast<int>(nodes_.size())](Tape& t) {
        const Tensor2& g = t.nodes_[out_id].grad;
        const Tensor2& y = t.nodes_[out_id].val;
        Tensor2& da = t.grad_mut(a);
        for (int r = 0; r < y.rows; ++r) {
            const double* gr = g.row(r);
            const double* yr = y.row(r);
            double dot = 0.0;
            for (int c = 0; c < y.cols; ++c) dot += gr[c] * yr[c];
            double* dar = da.row(r);
            for (int c = 0; c < y.cols; ++c) dar[c] += yr[c] * (gr[c] - dot);
        }
    });
}

int Tape::mean_rows(int a) {
    const Tensor2& av = nodes_[a].val;
    if (av.rows < 1) throw std::invalid_argument("mean_rows: empty input");
    Tensor2 out(1, av.cols);
    for (int r = 0; r < av.rows; ++r)
        for (int c = 0; c < av.cols; ++c) out.at(0, c) += av.at(r, c);
    double inv = 1.0 / av.rows;
    for (auto& x : out.v) x *= inv;
    return push(std::move(out), [a, inv, out_id = static_cast<int>(nodes_.size())](Tape& t) {
        const Tensor2& g = t.nodes_[out_id].grad;
        Tensor2& da = t.grad_mut(a);
        for (int r = 0; r < da.rows; ++r)
            for (int c = 0; c < da.cols; ++c) da.at(r, c) += inv * g.at(0, c);
    });
}

int Tape::concat_cols(int a, int b) {
    const Tensor2& av = nodes_[a].val;
    const Tensor2& bv = nodes_[b].val;
    if (av.rows != bv.rows) throw std::invalid_argument("concat_cols: row mismatch");
    Tensor2 out(av.rows, av.cols + bv.cols);
    for (int r = 0; r < av.rows; ++r) {
        for (int c = 0; c < av.cols; ++c) out.at(r, c) = av.at(r, c);
        for (int c = 0; c < bv.cols; ++c) out.at(r, av.cols + c) = bv.at(r, c);
    }
    int ca = av.cols;
    return push(std::move(out), [a, b, ca, out_id = static_cast<int>(nodes_.size())](Tape& t) {
        const Tensor2& g = t.nodes_[out_id].grad;
        Tensor2& da = t.grad_mut(a);
        Tensor2& db = t.grad_mut(b);
        for (int r = 0; r < g.rows; ++r) {
            for (int c = 0; c < da.cols; ++c) da.at(r, c) += g.at(r, c);
            for (int c = 0; c < db.cols; ++c) db.at(r, c) += g.at(r, ca + c);
        }
    });
}

int Tape::slice_cols(int a, int c0, int c1) {
    const Tensor2& av = nodes_[a].val;
    if (c0 < 0 || c1 <= c0 || c1 > av.cols) throw std::invalid_argument("slice_cols: bad range");
    Tensor2 out(av.rows, c1 - c0);
    for (int r = 0; r < av.rows; ++r)
        for (int c = c0; c < c1; ++c) out.at(r, c - c0) = av.at(r, c);
    return push(std::move(out), [a, c0, out_id = static_cast<int>(nodes_.size())](Tape& t) {
        const Tensor2& g = t.nodes_[out_id].grad;
        Tensor2& da = t.grad_mut(a);
        for (int r = 0; r < g.rows; ++r)
            for (int c = 0; c < g.cols; ++c) da.at(r, c0 + c) += g.at(r, c);
    });
}

int Tape::slice_rows(int a, int r0, int r1) {
    const Tensor2& av = nodes_[a].val;
    if (r0 < 0 || r1 <= r0 || r1 > av.rows) throw std::invalid_argument("slice_rows: bad range");
    Tensor2 out(r1 - r0, av.cols);
    for (int r = r0; r < r1; ++r)
        for (int c = 0; c < av.cols; ++c) out.at(r - r0, c) = av.at(r, c);
    return push(std::move(out), [a, r0, out_id = static_cast<int>(nodes_.size())](Tape& t) {
        const Tensor2& g = t.nodes_[out_id].grad;
        Tensor2& da = t.grad_mut(a);
        for (int r = 0; r < g.rows; ++r)
            for (int c = 0; c < g.cols; ++c) da.at(r0 + r, c) += g.at(r, c);
    });
}

// ------------------------------------------------------------- linear algebra

int Tape::matmul(int a, int b) {
    const Tensor2& av = nodes_[a].val;
    const Tensor2& bv = nodes_[b].val;
    if (av.cols != bv.rows) throw std::invalid_argument("matmul: inner dimension mismatch");
    Tensor2 out(av.rows, bv.cols);
    for (int i = 0; i < av.rows; ++i) {
        double* oi = out.row(i);
        for (int k = 0; k < av.cols; ++k) {
            double aik = av.at(i, k);
            const double* bk = bv.row(k);
            for (int j = 0; j < bv.cols; ++j) oi[j] += aik * bk[j];
        }
    }
    return push(std::move(out), [a, b, out_id = static_cast<int>(nodes_.size())](Tape& t) {
        const Tensor2& g = t.nodes_[out_id].grad;
        const Tensor2& av2 = t.nodes_[a].val;
        const Tensor2& bv2 = t.nodes_[b].val;
        Tensor2& da = t.grad_mut(a);
        Tensor2& db = t.grad_mut(b);
        // dA = g * B^T
        for (int i = 0; i < da.rows; ++i) {
            const double* gi = g.row(i);
            for (int k = 0; k < da.cols; ++k) {
                const double* bk = bv2.row(k);
                double acc = 0.0;
                for (int j = 0; j < g.cols; ++j) acc += gi[j] * bk[j];
                da.at(i, k) += acc;
            }
        }
        // dB = A^T * g
        for (int i = 0; i < av2.rows; ++i) {
            const double* gi = g.row(i);
            for (int k = 0; k < av2.cols; ++k) {
                double aik = av2.at(i, k);
                double* dbk = db.row(k);
                for (int j = 0; j < g.cols; ++j) dbk[j] += aik * gi[j];
            }
        }
    });
}

int Tape::matmul_nt(int a, int b) {
    const Tensor2& av = nodes_[a].val;
    const Tensor2& bv = nodes_[b].val;
    if (av.cols != bv.cols) throw std::invalid_argument("matmul_nt: inner dimension mismatch");
    Tensor2 out(av.rows, bv.rows);
    for (int i = 0; i < av.rows; ++i) {
        const double* ai = av.row(i);
        for (int j = 0; j < bv.rows; ++j) {
            const double* bj = bv.row(j);
            double acc = 0.0;
            for (int k = 0; k < av.cols; ++k) acc += ai[k] * bj[k];
            out.at(i, j) = acc;
        }
    }
    return push(std::move(out), [a, b, out_id = static_cast<int>(nodes_.size())](Tape& t) {
        const Tensor2& g = t.nodes_[out_id].grad;
        const Tensor2& av2 = t.nodes_[a].val;
        const Tensor2& bv2 = t.nodes_[b].val;
        Tensor2& da = t.grad_mut(a);
        Tensor2& db = t.grad_mut(b);
        // dA = g * B ; dB = g^T * A
        for (int i = 0; i < da.rows; ++i) {
            const double* gi = g.row(i);
            double* dai = da.row(i);
            for (int j = 0; j < bv2.rows; ++j) {
                double gij = gi[j];
                const double* bj = bv2.row(j);
                for (int k = 0; k < da.cols; ++k) dai[k] += gij * bj[k];
            }
        }
        for (int i = 0; i < av2.rows; ++i) {
            const double* gi = g.row(i);
            const double* ai = av2.row(i);
            for (int j = 0; j < db.rows; ++j) {
                double gij = gi[j];
                double* dbj = db.row(j);
                for (int k = 0; k < db.cols; ++k) dbj[k] += gij * ai[k];
            }
        }
    });
}

// ----------------------------------------------------------------- front-ends

int Tape::conv1d(int x, int w, int bias, int stride) {
    const Tensor2& xv = nodes_[x].val;
    const Tensor2& wv = nodes_[w].val;
    const Tensor2& bv = nodes_[bias].val;
    if (xv.rows != 1) throw std::invalid_argument("conv1d: signal must be 1 x T");
    if (stride < 1) throw std::invalid_argument("conv1d: stride must be >= 1");
    if (bv.rows != 1 || bv.cols != wv.rows) throw std::invalid_argument("conv1d: bias must be 1 x D");
    const int t_len = xv.cols;
    const int d = wv.rows;
    const int klen = wv.cols;
    if (t_len < stride) throw std::invalid_argument("conv1d: signal shorter than stride");
    const int f = (t_len + stride - 1) / stride;

    Tensor2 out(f, d);
    const double* xs = xv.row(0);
    for (int fi = 0; fi < f; ++fi) {
        int base = fi * stride;
        int kmax = std::min(klen, t_len - base);
        double* orow = out.row(fi);
        for (int di = 0; di < d; ++di) {
            const double* wr = wv.row(di);
            double acc = bv.at(0, di);
            for (int k = 0; k < kmax; ++k) acc += wr[k] * xs[base + k];
            orow[di] = acc;
        }
    }
    return push(std::move(out), [x, w, bias, stride, out_id = static_cast<int>(nodes_.size())](Tape& t) {
        const Tensor2& g = t.nodes_[out_id].grad;
        const Tensor2& xv2 = t.nodes_[x].val;
        const Tensor2& wv2 = t.nodes_[w].val;
        Tensor2& dx = t.grad_mut(x);
        Tensor2& dw = t.grad_mut(w);
        Tensor2& db = t.grad_mut(bias);
        const int t_len = xv2.cols;
        const int d = wv2.rows;
        const int klen = wv2.cols;
        const double* xs = xv2.row(0);
        double* dxs = dx.row(0);
        for (int fi = 0; fi < g.rows; ++fi) {
            int base = fi * stride;
            int kmax = std::min(klen, t_len - base);
            const double* gr = g.row(fi);
            for (int di = 0; di < d; ++di) {
                double gfd = gr[di];
                if (gfd == 0.0) continue;
                const double* wr = wv2.row(di);
                double* dwr = dw.row(di);
                db.at(0, di) += gfd;
                for (int k = 0; k < kmax; ++k) {
                    dwr[k] += gfd * xs[base + k];
                    dxs[base + k] += gfd * wr[k];
                }
            }
        }
    });
}

int Tape::srm_apply(int x, int kernels, int mix, int mix_bias) {
    const Tensor2& xv = nodes_[x].val;
    const Tensor2& kv = nodes_[kernels].val;
    const Tensor2& mv = nodes_[mix].val;
    const Tensor2& bv = nodes_[mix_bias].val;
    if (xv.rows != 1) throw std::invalid_argument("srm_apply: signal must be 1 x T");
    if (kv.cols != 5) throw std::invalid_argument("srm_apply: kernels must be M x 5");
    if (mv.rows != 1 || mv.cols != kv.rows) throw std::invalid_argument("srm_apply: mix must be 1 x M");
    if (bv.rows != 1 || bv.cols != 1) throw std::invalid_argument("srm_apply: mix bias must be 1 x 1");
    const int t_len = xv.cols;
    if (t_len < 5) throw std::invalid_argument("srm_apply: signal shorter than kernel");
    const int m_filters = kv.rows;

    // Residual maps are kept for the backward pass (mix gradient needs them).
    auto maps = std::make_shared<Tensor2>(m_filters, t_len);
    const double* xs = xv.row(0);
    for (int m = 0; m < m_filters; ++m) {
        const double* w = kv.row(m);
        double* out = maps->row(m);
        for (int t2 = 2; t2 < t_len - 2; ++t2)
            out[t2] = w[0] * xs[t2 - 2] + w[1] * xs[t2 - 1] + w[2] * xs[t2] + w[3] * xs[t2 + 1] +
                      w[4] * xs[t2 + 2];
        for (int t2 : {0, 1, t_len - 2, t_len - 1}) {
            double acc = 0.0;
            for (int k = 0; k < 5; ++k) {
                int j = t2 + k - 2;
                if (j >= 0 && j < t_len) acc += w[k] * xs[j];
            }
            out[t2] = acc;
        }
    }
    Tensor2 out(1, t_len);
    double* os = out.row(0);
    double b = bv.v[0];
    for (int t2 = 0; t2 < t_len; ++t2) os[t2] = b;
    for (int m = 0; m < m_filters; ++m) {
        double wm = mv.at(0, m);
        const double* src = maps->row(m);
        for (int t2 = 0; t2 < t_len; ++t2) os[t2] += wm * src[t2];
    }
    return push(std::move(out),
                [x, kernels, mix, mix_bias, maps, out_id = static_cast<int>(nodes_.size())](Tape& t) {
        const Tensor2& g = t.nodes_[out_id].grad;
        const Tensor2& xv2 = t.nodes_[x].val;
        const Tensor2& kv2 = t.nodes_[kernels].val;
        const Tensor2& mv2 = t.nodes_[mix].val;
        Tensor2& dx = t.grad_mut(x);
        Tensor2& dk = t.grad_mut(kernels);
        Tensor2& dm = t.grad_mut(mix);
        Tensor2& db = t.grad_mut(mix_bias);
        const int t_len = xv2.cols;
        const int m_filters = kv2.rows;
        const double* gs = g.row(0);
        const double* xs = xv2.row(0);
        double* dxs = dx.row(0);

        double gsum = 0.0;
        for (int t2 = 0; t2 < t_len; ++t2) gsum += gs[t2];
        db.v[0] += gsum;

        for (int m = 0; m < m_filters; ++m) {
            const double* src = maps->row(m);
            double acc = 0.0;
            for (int t2 = 0; t2 < t_len; ++t2) acc += gs[t2] * src[t2];
            dm.at(0, m) += acc;
        }
        // dK[m][k] = mix[m] * sum_t g[t] x[t+k-2]
        for (int m = 0; m < m_filters; ++m) {
            double wm = mv2.at(0, m);
            double* dkr = dk.row(m);
            for (int k = 0; k < 5; ++k) {
                int lo = std::max(0, 2 - k);
                int hi = std::min(t_len, t_len + 2 - k);
                double acc = 0.0;
                for (int t2 = lo; t2 < hi; ++t2) acc += gs[t2] * xs[t2 + k - 2];
                dkr[k] += wm * acc;
            }
        }
        // dx via the mixdown kernel c[k] = sum_m mix[m] K[m][k]
        double c[5] = {0, 0, 0, 0, 0};
        for (int m = 0; m < m_filters; ++m) {
            double wm = mv2.at(0, m);
            const double* w = kv2.row(m);
            for (int k = 0; k < 5; ++k) c[k] += wm * w[k];
        }
        for (int k = 0; k < 5; ++k) {
            int lo = std::max(0, 2 - k);
            int hi = std::min(t_len, t_len + 2 - k);
            for (int t2 = lo; t2 < hi; ++t2) dxs[t2 + k - 2] += c[k] * gs[t2];
        }
    });
}

// --------------------------------------------------------------------- losses

int Tape::js_framewise(int p, int q) {
    const Tensor2& pv = nodes_[p].val;
    const Tensor2& qv = nodes_[q].val;
    if (!pv.same_shape(qv)) throw std::invalid_argument("js_framewise: shape mismatch");
    if (pv.rows < 1) throw std::invalid_argument("js_framewise: need at least one frame");
    double total = 0.0;
    for (int r = 0; r < pv.rows; ++r) {
        const double* pr = pv.row(r);
        const double* qr = qv.row(r);
        double js = 0.0;
        for (int c = 0; c < pv.cols; ++c) {
            double pc = std::max(pr[c], kProbFloor);
            double qc = std::max(qr[c], kProbFloor);
            double m = 0.5 * (pc + qc);
            js += 0.5 * (pc * log2_clamped(pc / m) + qc * log2_clamped(qc / m));
        }
        total += std::min(1.0, std::max(0.0, js));
    }
    Tensor2 out(1, 1);
    out.v[0] = std::min(1.0, std::max(0.0, total / pv.rows));
    return push(std::move(out), [p, q, out_id = static_cast<int>(nodes_.size())](Tape& t) {
        double g = t.nodes_[out_id].grad.v[0];
        const Tensor2& pv2 = t.nodes_[p].val;
        const Tensor2& qv2 = t.nodes_[q].val;
        Tensor2& dp = t.grad_mut(p);
        Tensor2& dq = t.grad_mut(q);
        double inv_f = 1.0 / pv2.rows;
        for (int r = 0; r < pv2.rows; ++r) {
            const double* pr = pv2.row(r);
            const double* qr = qv2.row(r);
            double* dpr = dp.row(r);
            double* dqr = dq.row(r);
            for (int c = 0; c < pv2.cols; ++c) {
                double pc = std::max(pr[c], kProbFloor);
                double qc = std::max(qr[c], kProbFloor);
                double m = 0.5 * (pc + qc);
                if (pr[c] >= kProbFloor) dpr[c] += g * inv_f * 0.5 * log2_clamped(pc / m);
                if (qr[c] >= kProbFloor) dqr[c] += g * inv_f * 0.5 * log2_clamped(qc / m);
            }
        }
    });
}

int Tape::wce(int logits, int y, double w_fake, double w_real) {
    const Tensor2& lv = nodes_[logits].val;
    if (lv.rows != 1 || lv.cols != 2) throw std::invalid_argument("wce: logits must be 1 x 2");
    if (y != 0 && y != 1) throw std::invalid_argument("wce: label must be 0 or 1");
    if (w_fake <= 0.0 || w_real <= 0.0) throw std::invalid_argument("wce: weights must be positive");
    double wy = y == 0 ? w_fake : w_real;
    double l0 = lv.v[0], l1 = lv.v[1];
    double mx = std::max(l0, l1);
    double lse = mx + std::log(std::exp(l0 - mx) + std::exp(l1 - mx));
    Tensor2 out(1, 1);
    out.v[0] = -wy * (lv.v[y] - lse);
    return push(std::move(out), [logits, y, wy, out_id = static_cast<int>(nodes_.size())](Tape& t) {
        double g = t.nodes_[out_id].grad.v[0];
        const Tensor2& lv2 = t.nodes_[logits].val;
        Tensor2& dl = t.grad_mut(logits);
        double l0 = lv2.v[0], l1 = lv2.v[1];
        double mx = std::max(l0, l1);
        double e0 = std::exp(l0 - mx), e1 = std::exp(l1 - mx);
        double inv = 1.0 / (e0 + e1);
        double p0 = e0 * inv, p1 = e1 * inv;
        dl.v[0] += g * wy * (p0 - (y == 0 ? 1.0 : 0.0));
        dl.v[1] += g * wy * (p1 - (y == 1 ? 1.0 : 0.0));
    });
}

// ------------------------------------------------------------------ composite

int linear(Tape& t, int x, int w, int b) {
    int y = t.matmul(x, w);
    return b < 0 ? y : t.add_rowvec(y, b);
}

int attention(Tape& t, int q, int k, int v, int n_heads, int wq, int wk, int wv, int wo) {
    const int d = t.val(q).cols;
    if (n_heads < 1 || d % n_heads != 0)
        throw std::invalid_argument("attention: head count must divide the feature dim");
    if (t.val(k).rows != t.val(v).rows)
        throw std::invalid_argument("attention: key/value row mismatch");
    int qp = t.matmul(q, wq);
    int kp = t.matmul(k, wk);
    int vp = t.matmul(v, wv);
    const int dh = d / n_heads;
    const double inv_sqrt_dh = 1.0 / std::sqrt(static_cast<double>(dh));
    int merged = -1;
    for (int h = 0; h < n_heads; ++h) {
        int qh = t.slice_cols(qp, h * dh, (h + 1) * dh);
        int kh = t.slice_cols(kp, h * dh, (h + 1) * dh);
        int vh = t.slice_cols(vp, h * dh, (h + 1) * dh);
        int scores = t.scale(t.matmul_nt(qh, kh), inv_sqrt_dh);
        int weights = t.softmax_rows(scores);
        int oh = t.matmul(weights, vh);
        merged = h == 0 ? oh : t.concat_cols(merged, oh);
    }
    return t.matmul(merged, wo);
}

}  // namespace sonar
