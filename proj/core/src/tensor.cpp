#include "sonar/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sonar {

Tensor2::Tensor2(int r, int c, std::vector<double> data) : rows(r), cols(c), v(std::move(data)) {
    if (v.size() != static_cast<size_t>(r) * c)
        throw std::invalid_argument("Tensor2: data length does not match rows*cols");
}

void Tensor2::fill(double x) { std::fill(v.begin(), v.end(), x); }

bool Tensor2::all_finite() const {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

Tensor2 Tensor2::from_row(const std::vector<double>& data) {
    Tensor2 t;
    t.rows = 1;
    t.cols = static_cast<int>(data.size());
    t.v = data;
    return t;
}

bool operator==(const Tensor2& a, const Tensor2& b) {
    return a.rows == b.rows && a.cols == b.cols && a.v == b.v;
}

Tensor2& ParamStore::add(const std::string& name, Tensor2 init) {
    auto [it, inserted] = entries_.emplace(name, Entry{std::move(init), Tensor2{}});
    if (!inserted) throw std::invalid_argument("ParamStore: duplicate parameter '" + name + "'");
    it->second.grad = Tensor2(it->second.value.rows, it->second.value.cols);
    return it->second.value;
}

Tensor2& ParamStore::value(const std::string& name) {
    auto it = entries_.find(name);
    if (it == entries_.end()) throw std::invalid_argument("ParamStore: unknown parameter '" + name + "'");
    return it->second.value;
}

const Tensor2& ParamStore::value(const std::string& name) const {
    auto it = entries_.find(name);
    if (it == entries_.end()) throw std::invalid_argument("ParamStore: unknown parameter '" + name + "'");
    return it->second.value;
}

Tensor2& ParamStore::grad(const std::string& name) {
    auto it = entries_.find(name);
    if (it == entries_.end()) throw std::invalid_argument("ParamStore: unknown parameter '" + name + "'");
    return it->second.grad;
}

void ParamStore::zero_grads() {
    for (auto& [name, e] : entries_) e.grad.fill(0.0);
}

size_t ParamStore::param_count() const {
    size_t n = 0;
    for (const auto& [name, e] : entries_) n += e.value.size();
    return n;
}

}  // namespace sonar
