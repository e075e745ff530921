#include "progtr/tensor.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "progtr/errors.hpp"

namespace progtr::ad {

namespace {
std::size_t shape_product(const std::vector<int>& shape) {
    std::size_t n = 1;
    for (int d : shape) {
        if (d < 0) throw DimensionError("negative tensor dimension");
        n *= static_cast<std::size_t>(d);
    }
    return n;
}
} // namespace

Tensor::Tensor(std::vector<int> shape)
    : shape_(std::move(shape)), values_(shape_product(shape_), 0.0) {}

Tensor::Tensor(std::vector<int> shape, std::vector<double> values)
    : shape_(std::move(shape)), values_(values.begin(), values.end()) {
    if (shape_product(shape_) != values_.size())
        throw DimensionError("tensor shape " + shape_str() + " does not match value count");
}

Tensor Tensor::scalar(double v) { return Tensor({1}, {v}); }

Tensor Tensor::zeros_like(const Tensor& other) { return Tensor(other.shape_); }

void Tensor::fill(double v) {
    for (double& x : values_) x = v;
}

bool Tensor::all_finite() const {
    for (double x : values_)
        if (!std::isfinite(x)) return false;
    return true;
}

std::string Tensor::shape_str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < shape_.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(shape_[i]);
    }
    return s + "]";
}

} // namespace progtr::ad
