#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace sonar {

/// Dense row-major 2-D array of doubles. The one value type every
/// numerical routine in this library speaks.
struct Tensor2 {
    int rows = 0;
    int cols = 0;
    std::vector<double> v;

    Tensor2() = default;
    Tensor2(int r, int c) : rows(r), cols(c), v(static_cast<size_t>(r) * c, 0.0) {}
    Tensor2(int r, int c, std::vector<double> data);

    double& at(int r, int c) { return v[static_cast<size_t>(r) * cols + c]; }
    double at(int r, int c) const { return v[static_cast<size_t>(r) * cols + c]; }

    double* row(int r) { return v.data() + static_cast<size_t>(r) * cols; }
    const double* row(int r) const { return v.data() + static_cast<size_t>(r) * cols; }

    size_t size() const { return v.size(); }
    bool same_shape(const Tensor2& o) const { return rows == o.rows && cols == o.cols; }

    void fill(double x);
    bool all_finite() const;

    static Tensor2 from_row(const std::vector<double>& data);
};

bool operator==(const Tensor2& a, const Tensor2& b);

/// Named parameter buffers with shape-matched gradient buffers.
/// Iteration order is the lexicographic name order (std::map), which keeps
/// optimizer sweeps and checkpoint layout deterministic.
class ParamStore {
public:
    struct Entry {
        Tensor2 value;
        Tensor2 grad;
    };

    Tensor2& add(const std::string& name, Tensor2 init);

    bool has(const std::string& name) const { return entries_.count(name) != 0; }
    Tensor2& value(const std::string& name);
    const Tensor2& value(const std::string& name) const;
    Tensor2& grad(const std::string& name);

    void zero_grads();
    size_t param_count() const;

    std::map<std::string, Entry>& entries() { return entries_; }
    const std::map<std::string, Entry>& entries() const { return entries_; }

private:
    std::map<std::string, Entry> entries_;
};

}  // namespace sonar
