#pragma once

#include <cstddef>
#include <initializer_list>
#include <new>
#include <string>
#include <vector>

namespace progtr::ad {

/// Allocator pinning every buffer to a 64-byte boundary. SIMD kernels pick
/// their loop peeling from the base address, so a fixed alignment keeps
/// floating-point results independent of heap layout (bit-reproducibility).
template <class T>
struct AlignedAlloc {
    using value_type = T;
    static constexpr std::size_t alignment = 64;

    AlignedAlloc() = default;
    template <class U>
    AlignedAlloc(const AlignedAlloc<U>&) {}

    T* allocate(std::size_t n) {
        return static_cast<T*>(::operator new(n * sizeof(T), std::align_val_t(alignment)));
    }
    void deallocate(T* p, std::size_t) noexcept {
        ::operator delete(p, std::align_val_t(alignment));
    }
    template <class U>
    bool operator==(const AlignedAlloc<U>&) const {
        return true;
    }
};

/// Dense row-major tensor of 64-bit floats. Rank is 1 or 2 in practice
/// (vectors, [batch, features] matrices); a size-1 tensor doubles as a scalar.
class Tensor {
public:
    using Storage = std::vector<double, AlignedAlloc<double>>;

    Tensor() = default;
    explicit Tensor(std::vector<int> shape);
    Tensor(std::vector<int> shape, std::vector<double> values);

    static Tensor scalar(double v);
    static Tensor zeros_like(const Tensor& other);

    const std::vector<int>& shape() const { return shape_; }
    int rank() const { return static_cast<int>(shape_.size()); }
    int dim(int i) const { return shape_[static_cast<std::size_t>(i)]; }
    std::size_t size() const { return values_.size(); }
    bool is_scalar() const { return values_.size() == 1; }

    double* data() { return values_.data(); }
    const double* data() const { return values_.data(); }
    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }

    /// 2-D element access; row-major.
    double& at(int r, int c) { return values_[static_cast<std::size_t>(r) * shape_[1] + c]; }
    double at(int r, int c) const { return values_[static_cast<std::size_t>(r) * shape_[1] + c]; }

    int rows() const { return rank() == 2 ? shape_[0] : 1; }
    int cols() const { return rank() == 2 ? shape_[1] : (rank() == 1 ? shape_[0] : 1); }

    void fill(double v);
    bool all_finite() const;
    bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }

    std::string shape_str() const;

private:
    std::vector<int> shape_;
    Storage values_;
};

} // namespace progtr::ad
