#pragma once

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "progtr/tensor.hpp"

namespace progtr::ad {

/// A named trainable tensor with its gradient accumulator.
struct Parameter {
    std::string name;
    Tensor value;
    Tensor grad; // same shape, zeroed between optimizer steps

    Parameter(std::string n, Tensor v)
        : name(std::move(n)), value(std::move(v)), grad(Tensor::zeros_like(value)) {}
};

/// Ordered collection of uniquely named parameters. Order is creation order
/// and is part of the checkpoint contract, so iteration is deterministic.
class ParameterSet {
public:
    Parameter& add(std::string name, Tensor value);
    Parameter& at(const std::string& name);
    const Parameter& at(const std::string& name) const;
    bool contains(const std::string& name) const { return index_.count(name) != 0; }

    std::size_t size() const { return items_.size(); }
    Parameter& operator[](std::size_t i) { return *items_[i]; }
    const Parameter& operator[](std::size_t i) const { return *items_[i]; }

    void zero_grads();
    std::size_t value_count() const; // total scalar count across parameters

    /// Deep copy (used for last-good snapshots during training).
    ParameterSet clone() const;
    /// Copy values (not grads) from a same-structured set.
    void assign_values(const ParameterSet& src);

private:
    std::vector<std::unique_ptr<Parameter>> items_; // stable addresses
    std::unordered_map<std::string, std::size_t> index_;
};

} // namespace progtr::ad
