#include "progtr/params.hpp"

#include "progtr/errors.hpp"

namespace progtr::ad {

Parameter& ParameterSet::add(std::string name, Tensor value) {
    if (index_.count(name)) throw DimensionError("duplicate parameter name: " + name);
    items_.push_back(std::make_unique<Parameter>(name, std::move(value)));
    index_.emplace(std::move(name), items_.size() - 1);
    return *items_.back();
}

Parameter& ParameterSet::at(const std::string& name) {
    auto it = index_.find(name);
    if (it == index_.end()) throw DimensionError("unknown parameter: " + name);
    return *items_[it->second];
}

const Parameter& ParameterSet::at(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw DimensionError("unknown parameter: " + name);
    return *items_[it->second];
}

void ParameterSet::zero_grads() {
    for (auto& p : items_) p->grad.fill(0.0);
}

std::size_t ParameterSet::value_count() const {
    std::size_t n = 0;
    for (const auto& p : items_) n += p->value.size();
    return n;
}

ParameterSet ParameterSet::clone() const {
    ParameterSet out;
    for (const auto& p : items_) out.add(p->name, p->value);
    return out;
}

void ParameterSet::assign_values(const ParameterSet& src) {
    if (src.size() != size()) throw DimensionError("assign_values: parameter count mismatch");
    for (std::size_t i = 0; i < items_.size(); ++i) {
        Parameter& dst = *items_[i];
        const Parameter& s = *src.items_[i];
        if (dst.name != s.name || !dst.value.same_shape(s.value)) {
            throw DimensionError("assign_values: mismatched parameter " + dst.name);
        }
        dst.value = s.value;
    }
}

} // namespace progtr::ad
